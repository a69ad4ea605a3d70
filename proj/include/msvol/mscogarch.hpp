#pragma once

#include <vector>

#include "msvol/levy.hpp"
#include "msvol/map_process.hpp"
#include "msvol/path_bundle.hpp"
#include "msvol/reports.hpp"

namespace msvol {

struct MscogarchSpec {
    Vector beta;    // > 0
    Vector lambda;  // >= 0
    Vector delta;   // in (0, 1)
    LevyDriverSpec driver;  // one driver shared by all regimes, nonzero jump part
    GeneratorMatrix q;
    SwitchJumpTable switch_jumps;  // support R x R+
    InitialLaw v0;
    int initial_state = -1;  // -1: draw J_0 from the stationary law

    int n_states() const { return q.size(); }
    void validate() const;

    std::vector<RegimePiece> regime_pieces() const;
    Vector psi_diag(double w) const;
    Matrix psi_matrix(double w) const;  // Psi_xi(w)
    Matrix mean_source() const;         // diag(beta) + Q^T o F_11^T
    double burn_in_time() const;
    Vector stationary_regimes() const { return stationary_distribution(q); }
};

PathBundle simulate(const MscogarchSpec& spec, double horizon, double grid_dt,
                    RandomStream& rng);
// Walks a pre-sampled background path with V_0 = v0; rng only feeds the
// Brownian/drift price contribution of a non-pure-jump driver.
PathBundle simulate_on(const MscogarchSpec& spec, const MapPath& map, double v0,
                       double grid_dt, RandomStream& rng);

// (U, K) pair driving the volatility SDE dV = V_- dU + dK.
struct UkEvent {
    double time = 0.0;
    double du = 0.0;
    double dk = 0.0;
    int state_after = 0;
};

struct UkPath {
    RegimePath regimes;
    Vector u_drift;  // log delta_j
    Vector k_drift;  // beta_j
    std::vector<UkEvent> events;

    double u_at(double t) const;
    double k_at(double t) const;
};

UkPath uk_representation(const MscogarchSpec& spec, const MapPath& map);
// V right after each event, by exact piecewise integration of dV = V_- dU + dK.
Vector uk_reconstruct(const UkPath& uk, double v0);

// kappa_xi = sum_j pi_j (-log delta_j - int log(1+(lambda_j/delta_j)y^2) nu(dy)
//                        + sum_k q_jk E[dxi^{jk}])
double kappa_xi(const MscogarchSpec& spec);

struct StationarityReport {
    double kappa_xi = 0.0;
    bool kappa_positive = false;
    bool switch_log_moment_finite = false;
    Vector cycle_log_moment;  // per-state MC estimate of E_j[log+ sup e^{-xi2} deta2]
    bool stationary = false;
};

StationarityReport stationarity_check(const MscogarchSpec& spec, int mc_budget,
                                      RandomStream& rng);

ConditionReport stationary_conditions(const MscogarchSpec& spec, int k);
StationaryMoment stationary_moment(const MscogarchSpec& spec, int k);
// The scalar product form k! prod_n (-1^T Psi(-n)^{-1} diag(beta) pi); agrees
// with the recursion for a single state when switch jumps never hit eta.
double stationary_moment_product(const MscogarchSpec& spec, int k);

AutocovResult mean_and_autocov(const MscogarchSpec& spec, int j0, double t, double s,
                               const AutocovInputs& inputs);

LogReturnMoments logreturn_moments(const MscogarchSpec& spec, double r, double h,
                                   const LogReturnInputs& inner);

}  // namespace msvol
