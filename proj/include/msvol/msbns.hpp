#pragma once

#include <vector>

#include "msvol/levy.hpp"
#include "msvol/map_process.hpp"
#include "msvol/path_bundle.hpp"
#include "msvol/reports.hpp"

namespace msvol {

struct MsbnsSpec {
    Vector lambda;  // > 0, mean-reversion rates
    Vector mu;
    Vector beta;
    Vector rho;
    // One nondecreasing driver per state. A drift part is allowed so the
    // constant-solution family is representable; the usual model is pure jump.
    std::vector<LevyDriverSpec> subordinators;
    GeneratorMatrix q;
    SwitchJumpTable switch_jumps;  // support R+ x R+
    InitialLaw v0;
    int initial_state = -1;  // -1: draw J_0 from the stationary law

    int n_states() const { return q.size(); }
    void validate() const;

    std::vector<RegimePiece> regime_pieces() const;
    Vector psi_diag(double w) const;  // psi_j(w) = w lambda_j
    Matrix psi_matrix(double w) const;
    Matrix mean_source() const;  // diag(lambda_i E[L1^(i)]) + Q^T o F_11^T
    double burn_in_time() const;
    Vector stationary_regimes() const { return stationary_distribution(q); }
};

// Drift rate of the eta compensator per regime:
//   rate_j = lambda_j E[L1^(j)] + sum_k q_jk E[deta^{jk}]
struct CompensatorSpec {
    Vector rate_vector;
};

CompensatorSpec compensator(const MsbnsSpec& spec);

PathBundle simulate(const MsbnsSpec& spec, double horizon, double grid_dt,
                    RandomStream& rng);
PathBundle simulate_on(const MsbnsSpec& spec, const MapPath& map, double v0,
                       double grid_dt, RandomStream& rng);

// eta_t minus the compensator drift, recovered from the recorded events and
// regime path; a martingale in t from any start.
double eta_tilde(const MsbnsSpec& spec, const PathBundle& bundle, double t);

struct DegenerateReport {
    bool degenerate = false;
    Vector c;  // the constant volatility per regime; empty unless degenerate
};

// The constant solution V_t = c_{J_t} exists iff every subordinator is pure
// drift c_j t and every reachable switch jump is a point mass (x, y) with
// e^{-x}(y + c_i) = c_j.
DegenerateReport degenerate_check(const MsbnsSpec& spec);

struct MsbnsStationarityReport {
    double kappa_xi = 0.0;       // sum_j pi_j (lambda_j + sum_k q_jk E[dxi^{jk}])
    bool kappa_positive = false;
    Vector driver_log_moment;    // int over (1,inf) of log(q) nu_j(dq)
    bool driver_log_moment_finite = false;
    Vector cycle_log_moment;     // per-state MC estimate of E_j[log+ sup e^{-xi2} deta2]
    bool switch_log_moment_finite = false;
    bool stationary = false;
};

MsbnsStationarityReport stationarity_check(const MsbnsSpec& spec, int mc_budget,
                                           RandomStream& rng);

// The moment recursion's per-regime source integral int x^n nu_j(dx): over
// the full support (0,inf), or truncated to (1,inf).
enum class MomentVariant { FullSupport, AboveOne };

ConditionReport stationary_conditions(const MsbnsSpec& spec, int k);
StationaryMoment stationary_moment(const MsbnsSpec& spec, int k,
                                   MomentVariant variant = MomentVariant::FullSupport);

AutocovResult mean_and_autocov(const MsbnsSpec& spec, int j0, double t, double s,
                               const AutocovInputs& inputs);

// mean needs nothing beyond stationarity at k=1; second_moment, cov_disjoint
// and cov_squared require mu = beta = rho = 0 and are NaN otherwise.
LogReturnMoments logreturn_moments(const MsbnsSpec& spec, double r, double h,
                                   const LogReturnInputs& inner);

struct MartingaleCheckReport {
    Vector times;
    Vector estimate;        // MC mean of eta_tilde at each checkpoint
    Vector standard_error;
    bool pass = false;      // |estimate| <= 3 se everywhere
};

MartingaleCheckReport compensator_martingale_check(const MsbnsSpec& spec, double horizon,
                                                   int n_paths, RandomStream& rng);

}  // namespace msvol
