#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "msvol/msbns.hpp"
#include "msvol/mscogarch.hpp"

namespace msvol {

using ModelSpec = std::variant<MscogarchSpec, MsbnsSpec>;

PathBundle simulate_model(const ModelSpec& model, double horizon, double grid_dt,
                          RandomStream& rng);

// Copies with the initial condition replaced; the harness pins starts
// explicitly so row labels stay honest.
ModelSpec with_point_start(ModelSpec model, double v0, int initial_state);
ModelSpec with_stationary_start(ModelSpec model);
double model_burn_in(const ModelSpec& model);

// Per-path statistic; must return the same length for every path.
using PathStatistic = std::function<Vector(const PathBundle&)>;

// One statistic vector per path, in path order. Path i draws from
// substream(master_seed, i), so the rows do not depend on the worker count.
struct EnsembleSlots {
    std::vector<Vector> rows;
};

EnsembleSlots run_ensemble(const ModelSpec& model, double horizon, double grid_dt,
                           int n_paths, std::uint64_t master_seed,
                           const PathStatistic& stat, int n_threads = 1);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct EnsembleEstimate {
    std::string name;
    int n_paths = 0;
    Vector mean;
    Vector std_error;
    std::vector<Interval> ci95;  // mean +- 1.96 se
};

EnsembleEstimate summarize(const std::string& name, const EnsembleSlots& slots);

struct CovEstimate {
    double value = 0.0;
    double se = 0.0;
};

// Sample covariance of two slot components, with the influence-function
// standard error.
CovEstimate slot_covariance(const EnsembleSlots& slots, int a, int b);

// The stock functionals the validation rows are built from.
struct Functional {
    enum class Kind {
        MeanAtTimes,        // V(t)^power at each requested grid time
        TimeAverage,        // [int V dt / T, int V^2 dt / T], exact segment integrals
        ReturnMoments,      // X1 = G(r)-G(0), X2 = G(h+r)-G(h):
                            //   [X1, X1^2, X2, X2^2, X1 X2, X1^2 X2^2]
        InnerExpectations,  // [G_r^2 V_r 1{J_r=i}]_i then [G_r^2 1{J_r=i}]_i
        Occupation          // occupation fraction per regime
    };
    Kind kind = Kind::MeanAtTimes;
    double horizon = 1.0;
    double grid_dt = 0.25;
    Vector times;    // MeanAtTimes
    int power = 1;   // MeanAtTimes
    double r = 1.0;  // ReturnMoments, InnerExpectations
    double h = 2.0;  // ReturnMoments
};

PathStatistic make_statistic(const Functional& functional);

EnsembleEstimate ensemble_estimate(const ModelSpec& model, const Functional& functional,
                                   int n_paths, std::uint64_t master_seed,
                                   int n_threads = 1);

struct ValidationRow {
    std::string quantity;
    double analytic = 0.0;
    double estimate = 0.0;
    double std_error = 0.0;  // 0 marks a deterministic row
    double z = 0.0;
    bool deterministic = false;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    std::uint64_t seed = 0;
    double burn_in = 0.0;  // burn-in horizon behind the stationary-start rows
    std::string notes;

    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
};

// z = (estimate - analytic) / se, pass iff |z| < 3; rows with se = 0 are
// deterministic and pass iff |estimate - analytic| <= 1e-9.
ValidationRow compare_row(const std::string& quantity, double analytic, double estimate,
                          double se);

struct ValidationBudgets {
    int mean_paths = 10000;
    double mean_horizon = 20.0;
    double mean_grid_dt = 0.25;
    int moment_paths = 16;
    double moment_horizon = 10000.0;
    int return_paths = 20000;
    double return_r = 1.0;
    double return_h = 2.0;
    int martingale_paths = 10000;
    double martingale_horizon = 50.0;
};

// The bundled analytic-vs-MC suite behind `msvol validate`.
ValidationReport run_validation(const ModelSpec& model, const ValidationBudgets& budgets,
                                std::uint64_t seed, int n_threads = 1);

}  // namespace msvol
