#pragma once

#include <vector>

#include "msvol/levy.hpp"
#include "msvol/linalg.hpp"
#include "msvol/markov_chain.hpp"
#include "msvol/rng.hpp"

namespace msvol {

// Law of the extra (xi, eta) jump injected when the chain switches i -> j.
// Coordinates are independent; a point mass in both coordinates covers the
// dependent degenerate case.
struct SwitchJumpLaw {
    JumpLaw xi = JumpLaw::zero();
    JumpLaw eta = JumpLaw::zero();

    bool is_zero() const { return xi.is_zero() && eta.is_zero(); }
};

class SwitchJumpTable {
public:
    SwitchJumpTable() = default;
    explicit SwitchJumpTable(int n_states);

    int n_states() const { return n_; }
    void set(int from, int to, SwitchJumpLaw law);
    const SwitchJumpLaw& at(int from, int to) const;

    bool all_zero() const;
    bool eta_all_zero() const;
    bool xi_all_zero() const;

    // Switch jumps may only push the variance up through eta; every eta law
    // must sit on [0, inf).
    void require_nonnegative_eta() const;
    // MSBNS additionally confines the xi coordinate to [0, inf).
    void require_nonnegative_xi() const;

private:
    int n_ = 0;
    std::vector<SwitchJumpLaw> laws_;
};

// F_{k,n}(i,j) = E[e^{-k dxi^{ij}}] E[(deta^{ij})^n] where q_ij > 0, else 0.
Matrix f_matrix(const GeneratorMatrix& q, const SwitchJumpTable& table, int k, int n);

// Psi(w)(i,j) = delta_ij (psi_i(w) + q_ii) + (i != j) q_ji E[e^{w dxi^{ji}}].
// psi_diag holds the per-state Laplace exponents evaluated at w.  When every
// psi_i(0) is exactly 0.0 the result at w = 0 reproduces Q^T bit for bit.
Matrix matrix_exponent(const Vector& psi_diag, const GeneratorMatrix& q,
                       const SwitchJumpTable& table, double w);

// Per-state rates sum_k q(j,k) E[dxi^{jk}] and sum_k q(j,k) E[deta^{jk}].
Vector xi_switch_mean_rates(const GeneratorMatrix& q, const SwitchJumpTable& table);
Vector eta_switch_mean_rates(const GeneratorMatrix& q, const SwitchJumpTable& table);

// How a raw driver mark Y maps into (xi, eta) coordinates within a regime.
enum class MarkMap {
    EtaAdditive,    // (0, Y): subordinator feeds eta directly
    XiLogSquare,    // (-log(1 + a Y^2), 0): squared-jump feedback into xi
};

struct RegimePiece {
    double xi_drift = 0.0;
    double eta_drift = 0.0;
    double jump_intensity = 0.0;  // driver jump rate while this regime is active
    JumpLaw mark = JumpLaw::zero();
    MarkMap map = MarkMap::EtaAdditive;
    double map_coeff = 0.0;  // the "a" in XiLogSquare

    std::pair<double, double> xi_eta_jump(double y) const;
};

enum class MapEventKind { Driver, Switch };

struct MapEvent {
    double time = 0.0;
    MapEventKind kind = MapEventKind::Driver;
    int from = 0;  // regime the event occurs in; pre-switch state for switches
    int to = 0;    // post-switch state; == from for driver events
    double y = 0.0;    // raw driver mark, 0 for switches
    double dxi = 0.0;  // jump in (xi, eta) coordinates
    double deta = 0.0;
};

// One sampled background path: regime trajectory plus every driver jump and
// switch jump, merged in time order.  Driver and switch events are kept
// distinguishable so (xi_1, xi_2) can be reconstructed exactly.
struct MapPath {
    RegimePath regimes;
    std::vector<MapEvent> events;
    Vector xi_drift;   // per-state drifts frozen at sampling time
    Vector eta_drift;

    double xi_at(double t) const;
    double eta_at(double t) const;
};

// Samples the regime path first, then the driver jumps of each constant-regime
// interval in time order (interarrival, then mark), then the switch draw at
// each switch time (xi before eta).  A driver jump landing exactly on a switch
// time precedes the switch in the log.
MapPath sample_map_path(const GeneratorMatrix& q, const std::vector<RegimePiece>& pieces,
                        const SwitchJumpTable& table, int initial_state, double horizon,
                        RandomStream& rng);

}  // namespace msvol
