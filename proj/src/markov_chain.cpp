#include "msvol/markov_chain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace msvol {

namespace {

// Strong connectivity of the directed graph {q_ij > 0} by double BFS.
bool strongly_connected(const Matrix& q) {
    const int n = q.rows();
    if (n == 1) return true;
    auto reach = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                if (seen[v] || v == u) continue;
                double edge = forward ? q(u, v) : q(v, u);
                if (edge > 0.0) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
        for (char s : seen)
            if (!s) return false;
        return true;
    };
    return reach(true) && reach(false);
}

}  // namespace

GeneratorMatrix::GeneratorMatrix(Matrix q) : q_(std::move(q)) {
    const int n = q_.rows();
    if (n < 1 || q_.cols() != n)
        throw std::invalid_argument("GeneratorMatrix: square matrix of size >= 1 required");
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (q_(i, j) < -1e-12)
                throw std::invalid_argument("GeneratorMatrix: negative off-diagonal rate at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            if (q_(i, j) < 0.0) q_(i, j) = 0.0;
            off += q_(i, j);
        }
        if (std::abs(q_(i, i) + off) > 1e-9 * std::max(1.0, off))
            throw std::invalid_argument("GeneratorMatrix: row " + std::to_string(i) +
                                        " does not sum to zero");
        q_(i, i) = -off;  // exact zero row sums from here on
        if (n > 1 && off == 0.0)
            throw std::invalid_argument("GeneratorMatrix: absorbing state " + std::to_string(i));
    }
    if (!strongly_connected(q_))
        throw std::invalid_argument("GeneratorMatrix: chain is not irreducible");
}

Vector stationary_distribution(const GeneratorMatrix& q) {
    const int n = q.size();
    // pi' Q = 0 with the normalization replacing the last equation.
    Matrix m = q.transposed();
    for (int j = 0; j < n; ++j) m(n - 1, j) = 1.0;
    Vector rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    Vector pi = solve(m, rhs);
    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += pi[i] * q.rate(i, j);
        residual = std::max(residual, std::abs(s));
        if (pi[j] <= 0.0)
            throw std::runtime_error("stationary_distribution: nonpositive entry");
    }
    if (residual > 1e-10)
        throw std::runtime_error("stationary_distribution: residual " + std::to_string(residual));
    return pi;
}

int RegimePath::state_at(double t) const {
    int s = initial_state;
    for (const auto& sw : switches) {
        if (sw.time > t) break;
        s = sw.to;
    }
    return s;
}

Vector RegimePath::occupation_times() const {
    Vector occ(n_states, 0.0);
    double prev = 0.0;
    int state = initial_state;
    for (const auto& sw : switches) {
        occ[state] += sw.time - prev;
        prev = sw.time;
        state = sw.to;
    }
    occ[state] += horizon - prev;
    return occ;
}

RegimePath sample_regime_path(const GeneratorMatrix& q, int initial_state, double horizon,
                              RandomStream& rng) {
    const int n = q.size();
    if (initial_state < 0 || initial_state >= n)
        throw std::invalid_argument("sample_regime_path: initial state out of range");
    if (horizon < 0.0) throw std::invalid_argument("sample_regime_path: negative horizon");
    RegimePath path;
    path.initial_state = initial_state;
    path.horizon = horizon;
    path.n_states = n;
    int state = initial_state;
    double t = 0.0;
    for (;;) {
        const double r = q.exit_rate(state);
        if (r <= 0.0) break;  // N == 1
        t += rng.exponential(r);
        if (t >= horizon) break;
        const int next = sample_next_state(q, state, rng);
        path.switches.push_back({t, state, next});
        state = next;
    }
    return path;
}

int draw_state(const Vector& probabilities, RandomStream& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    const int n = static_cast<int>(probabilities.size());
    for (int j = 0; j < n; ++j) {
        acc += probabilities[j];
        if (u < acc) return j;
    }
    return n - 1;  // roundoff at u ~ 1
}

int sample_next_state(const GeneratorMatrix& q, int from, RandomStream& rng) {
    const int n = q.size();
    const double r = q.exit_rate(from);
    // next state in fixed index order
    const double u = rng.uniform() * r;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == from) continue;
        acc += q.rate(from, j);
        if (u < acc) return j;
    }
    for (int j = n - 1; j >= 0; --j)  // guard against roundoff at u ~ r
        if (j != from && q.rate(from, j) > 0.0) return j;
    return from;
}

}  // namespace msvol
