#include "msvol/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace msvol {

namespace {

// Distinct master seeds for the independent ensembles inside one validation
// run; hashing keeps unrelated tags uncorrelated even for adjacent seeds.
std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag) {
    RandomStream s = RandomStream::substream(seed, tag);
    return s.next_u64();
}

std::size_t grid_index(const PathBundle& bundle, double t) {
    auto it = std::lower_bound(bundle.grid.begin(), bundle.grid.end(), t - 1e-9);
    if (it == bundle.grid.end() || std::abs(*it - t) > 1e-9)
        throw std::invalid_argument("statistic time " + std::to_string(t) +
                                    " is not on the sample grid");
    return static_cast<std::size_t>(it - bundle.grid.begin());
}

}  // namespace

PathBundle simulate_model(const ModelSpec& model, double horizon, double grid_dt,
                          RandomStream& rng) {
    return std::visit([&](const auto& spec) { return simulate(spec, horizon, grid_dt, rng); },
                      model);
}

ModelSpec with_point_start(ModelSpec model, double v0, int initial_state) {
    std::visit(
        [&](auto& spec) {
            spec.v0 = InitialLaw::point(v0);
            spec.initial_state = initial_state;
        },
        model);
    return model;
}

ModelSpec with_stationary_start(ModelSpec model) {
    std::visit(
        [](auto& spec) {
            spec.v0 = InitialLaw::stationary();
            spec.initial_state = -1;
        },
        model);
    return model;
}

double model_burn_in(const ModelSpec& model) {
    return std::visit([](const auto& spec) { return spec.burn_in_time(); }, model);
}

EnsembleSlots run_ensemble(const ModelSpec& model, double horizon, double grid_dt,
                           int n_paths, std::uint64_t master_seed,
                           const PathStatistic& stat, int n_threads) {
    if (n_paths < 2) throw std::invalid_argument("run_ensemble: n_paths >= 2 required");
    EnsembleSlots slots;
    slots.rows.resize(n_paths);

    auto worker = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            RandomStream rng = RandomStream::substream(master_seed, static_cast<std::uint64_t>(i));
            const PathBundle bundle = simulate_model(model, horizon, grid_dt, rng);
            slots.rows[i] = stat(bundle);
        }
    };

    n_threads = std::max(1, std::min(n_threads, n_paths));
    if (n_threads == 1) {
        worker(0, n_paths);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(n_threads);
        const int chunk = (n_paths + n_threads - 1) / n_threads;
        for (int w = 0; w < n_threads; ++w) {
            const int lo = w * chunk, hi = std::min(n_paths, lo + chunk);
            pool.emplace_back([&, w, lo, hi] {
                try {
                    worker(lo, hi);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    const std::size_t width = slots.rows.front().size();
    for (const auto& row : slots.rows)
        if (row.size() != width)
            throw std::logic_error("run_ensemble: statistic width varies across paths");
    return slots;
}

EnsembleEstimate summarize(const std::string& name, const EnsembleSlots& slots) {
    const int n = static_cast<int>(slots.rows.size());
    if (n < 2) throw std::invalid_argument("summarize: at least two paths required");
    const std::size_t width = slots.rows.front().size();
    EnsembleEstimate est;
    est.name = name;
    est.n_paths = n;
    est.mean.assign(width, 0.0);
    est.std_error.assign(width, 0.0);
    est.ci95.resize(width);
    for (const auto& row : slots.rows)
        for (std::size_t c = 0; c < width; ++c) est.mean[c] += row[c];
    for (double& m : est.mean) m /= n;
    // a component that is bitwise constant across paths must report exactly
    // zero spread; the accumulated mean alone can carry rounding dust that
    // would misclassify a deterministic row as stochastic downstream
    for (std::size_t c = 0; c < width; ++c) {
        const double first = slots.rows.front()[c];
        bool constant = true;
        for (const auto& row : slots.rows) constant = constant && row[c] == first;
        if (constant) est.mean[c] = first;
    }
    for (const auto& row : slots.rows)
        for (std::size_t c = 0; c < width; ++c) {
            const double d = row[c] - est.mean[c];
            est.std_error[c] += d * d;
        }
    for (std::size_t c = 0; c < width; ++c) {
        est.std_error[c] = std::sqrt(est.std_error[c] / (n - 1) / n);
        est.ci95[c] = {est.mean[c] - 1.96 * est.std_error[c],
                       est.mean[c] + 1.96 * est.std_error[c]};
    }
    return est;
}

CovEstimate slot_covariance(const EnsembleSlots& slots, int a, int b) {
    const int n = static_cast<int>(slots.rows.size());
    if (n < 2) throw std::invalid_argument("slot_covariance: at least two paths required");
    const int width = static_cast<int>(slots.rows.front().size());
    if (a < 0 || b < 0 || a >= width || b >= width)
        throw std::invalid_argument("slot_covariance: component index out of range");
    double mean_a = 0.0, mean_b = 0.0;
    for (const auto& row : slots.rows) {
        mean_a += row[a];
        mean_b += row[b];
    }
    mean_a /= n;
    mean_b /= n;
    double cov = 0.0;
    for (const auto& row : slots.rows) cov += (row[a] - mean_a) * (row[b] - mean_b);
    cov /= n;
    // influence function of the plug-in covariance
    double var_if = 0.0;
    for (const auto& row : slots.rows) {
        const double inf = (row[a] - mean_a) * (row[b] - mean_b) - cov;
        var_if += inf * inf;
    }
    CovEstimate out;
    out.value = cov;
    out.se = std::sqrt(var_if / (n - 1) / n);
    return out;
}

PathStatistic make_statistic(const Functional& functional) {
    using Kind = Functional::Kind;
    switch (functional.kind) {
        case Kind::MeanAtTimes:
            return [f = functional](const PathBundle& b) {
                Vector out(f.times.size());
                for (std::size_t i = 0; i < f.times.size(); ++i) {
                    const double v = b.v[grid_index(b, f.times[i])];
                    out[i] = f.power == 1 ? v : std::pow(v, f.power);
                }
                return out;
            };
        case Kind::TimeAverage:
            return [](const PathBundle& b) {
                return Vector{b.integral_v / b.horizon, b.integral_v_sq / b.horizon};
            };
        case Kind::ReturnMoments:
            return [f = functional](const PathBundle& b) {
                const double x1 = b.g[grid_index(b, f.r)] - b.g.front();
                const double x2 = b.g[grid_index(b, f.h + f.r)] - b.g[grid_index(b, f.h)];
                return Vector{x1, x1 * x1, x2, x2 * x2, x1 * x2, x1 * x1 * x2 * x2};
            };
        case Kind::InnerExpectations:
            return [f = functional](const PathBundle& b) {
                const std::size_t k = grid_index(b, f.r);
                const double g2 = b.g[k] * b.g[k];
                const int n = b.regimes.n_states;
                Vector out(2 * n, 0.0);
                out[b.j[k]] = g2 * b.v[k];
                out[n + b.j[k]] = g2;
                return out;
            };
        case Kind::Occupation:
            return [](const PathBundle& b) {
                Vector occ = b.regimes.occupation_times();
                for (double& o : occ) o /= b.horizon;
                return occ;
            };
    }
    throw std::logic_error("make_statistic: unknown functional");
}

EnsembleEstimate ensemble_estimate(const ModelSpec& model, const Functional& functional,
                                   int n_paths, std::uint64_t master_seed, int n_threads) {
    const EnsembleSlots slots = run_ensemble(model, functional.horizon, functional.grid_dt,
                                             n_paths, master_seed, make_statistic(functional),
                                             n_threads);
    return summarize("functional", slots);
}

ValidationRow compare_row(const std::string& quantity, double analytic, double estimate,
                          double se) {
    ValidationRow row;
    row.quantity = quantity;
    row.analytic = analytic;
    row.estimate = estimate;
    row.std_error = se;
    row.deterministic = se == 0.0;
    if (row.deterministic) {
        row.z = 0.0;
        row.pass = std::abs(estimate - analytic) <= 1e-9;
    } else {
        row.z = (estimate - analytic) / se;
        row.pass = std::abs(row.z) < 3.0;
    }
    return row;
}

namespace {

double psi_zero_gap(const ModelSpec& model) {
    return std::visit(
        [](const auto& spec) {
            const Matrix psi0 = spec.psi_matrix(0.0);
            const Matrix qt = spec.q.transposed();
            double gap = 0.0;
            for (int i = 0; i < spec.n_states(); ++i)
                for (int j = 0; j < spec.n_states(); ++j)
                    gap = std::max(gap, std::abs(psi0(i, j) - qt(i, j)));
            return gap;
        },
        model);
}

}  // namespace

ValidationReport run_validation(const ModelSpec& model, const ValidationBudgets& budgets,
                                std::uint64_t seed, int n_threads) {
    std::visit([](const auto& spec) { spec.validate(); }, model);
    ValidationReport rep;
    rep.seed = seed;

    rep.rows.push_back(
        compare_row("max entry of |Psi(0) - Q^T| (deterministic)", 0.0, psi_zero_gap(model), 0.0));

    // transient mean from a pinned start
    {
        const ModelSpec point = with_point_start(model, 1.0, 0);
        Functional f;
        f.kind = Functional::Kind::MeanAtTimes;
        f.times = {5.0, budgets.mean_horizon};
        f.horizon = budgets.mean_horizon;
        f.grid_dt = budgets.mean_grid_dt;
        const EnsembleEstimate est =
            ensemble_estimate(point, f, budgets.mean_paths, derived_seed(seed, 1), n_threads);
        for (std::size_t i = 0; i < f.times.size(); ++i) {
            AutocovInputs in;
            in.e_v0 = 1.0;
            const double analytic = std::visit(
                [&](const auto& spec) {
                    return mean_and_autocov(spec, 0, f.times[i], f.times[i], in).mean;
                },
                point);
            rep.rows.push_back(compare_row("E_1[V_t], V_0 = 1, t = " + std::to_string(f.times[i]),
                                           analytic, est.mean[i], est.std_error[i]));
        }
    }

    // stationary moments vs ergodic time-averages
    const ModelSpec stat = with_stationary_start(model);
    rep.burn_in = model_burn_in(stat);
    {
        Functional f;
        f.kind = Functional::Kind::TimeAverage;
        f.horizon = budgets.moment_horizon;
        f.grid_dt = budgets.moment_horizon / 100.0;
        const EnsembleEstimate est =
            ensemble_estimate(stat, f, budgets.moment_paths, derived_seed(seed, 2), n_threads);
        for (int k = 1; k <= 2; ++k) {
            double analytic = 0.0;
            std::string label = "stationary E[V^" + std::to_string(k) + "]";
            try {
                analytic = std::visit(
                    [&](const auto& spec) { return stationary_moment(spec, k).value; }, stat);
            } catch (const std::exception& e) {
                rep.notes += label + " skipped: " + e.what() + "\n";
                continue;
            }
            rep.rows.push_back(
                compare_row(label, analytic, est.mean[k - 1], est.std_error[k - 1]));
        }
    }

    // log-return structure from a stationary start
    {
        LogReturnMoments lr;
        bool have_lr = true;
        try {
            lr = std::visit(
                [&](const auto& spec) {
                    return logreturn_moments(spec, budgets.return_r, budgets.return_h,
                                             LogReturnInputs{});
                },
                stat);
        } catch (const std::exception& e) {
            have_lr = false;
            rep.notes += std::string("log-return rows skipped: ") + e.what() + "\n";
        }
        if (have_lr) {
            Functional f;
            f.kind = Functional::Kind::ReturnMoments;
            f.r = budgets.return_r;
            f.h = budgets.return_h;
            f.horizon = budgets.return_h + budgets.return_r;
            f.grid_dt = budgets.return_r;
            const EnsembleSlots slots =
                run_ensemble(stat, f.horizon, f.grid_dt, budgets.return_paths,
                             derived_seed(seed, 3), make_statistic(f), n_threads);
            const EnsembleEstimate est = summarize("returns", slots);
            rep.rows.push_back(compare_row("mean log-return, r = " + std::to_string(f.r), lr.mean,
                                           est.mean[0], est.std_error[0]));
            if (std::isfinite(lr.second_moment))
                rep.rows.push_back(compare_row("E[(G_r)^2], r = " + std::to_string(f.r),
                                               lr.second_moment, est.mean[1], est.std_error[1]));
            if (std::isfinite(lr.cov_disjoint)) {
                const CovEstimate cov = slot_covariance(slots, 0, 2);
                rep.rows.push_back(compare_row("disjoint-window return covariance",
                                               lr.cov_disjoint, cov.value, cov.se));
            }
        }
    }

    // compensated-eta martingale rows (MSBNS only)
    if (const auto* bns = std::get_if<MsbnsSpec>(&model)) {
        RandomStream mrng(derived_seed(seed, 4));
        const MartingaleCheckReport mart = compensator_martingale_check(
            *bns, budgets.martingale_horizon, budgets.martingale_paths, mrng);
        for (std::size_t i = 0; i < mart.times.size(); ++i)
            rep.rows.push_back(compare_row("E[eta~_t], t = " + std::to_string(mart.times[i]), 0.0,
                                           mart.estimate[i], mart.standard_error[i]));
    }

    return rep;
}

}  // namespace msvol
