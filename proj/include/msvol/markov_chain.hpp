#pragma once

#include <vector>

#include "msvol/linalg.hpp"
#include "msvol/rng.hpp"

namespace msvol {

// Conservative generator of an irreducible finite-state chain. States
// are 0-based internally; the JSON layer renumbers from 1.
class GeneratorMatrix {
public:
    // Validates: square, off-diagonal >= 0, row sums ~ 0 (diagonal is
    // recomputed from the off-diagonal part), irreducible.
    explicit GeneratorMatrix(Matrix q);

    int size() const { return q_.rows(); }
    double rate(int i, int j) const { return q_(i, j); }
    double exit_rate(int i) const { return -q_(i, i); }
    const Matrix& matrix() const { return q_; }
    Matrix transposed() const { return transpose(q_); }

private:
    Matrix q_;
};

// pi' Q = 0, sum pi = 1, entrywise positive for irreducible Q.
Vector stationary_distribution(const GeneratorMatrix& q);

struct RegimeSwitch {
    double time;
    int from;
    int to;
};

struct RegimePath {
    int initial_state = 0;
    double horizon = 0.0;
    std::vector<RegimeSwitch> switches;

    int state_at(double t) const;            // cadlag
    Vector occupation_times() const;          // length N, sums to horizon
    int n_states = 0;
};

RegimePath sample_regime_path(const GeneratorMatrix& q, int initial_state, double horizon,
                              RandomStream& rng);

// One draw from a probability vector, categories in index order.
int draw_state(const Vector& probabilities, RandomStream& rng);

// Jump target of the embedded chain, proportional to the exit rates of `from`.
int sample_next_state(const GeneratorMatrix& q, int from, RandomStream& rng);

}  // namespace msvol
