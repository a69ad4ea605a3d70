#include "msvol/mscogarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "msvol/quadrature.hpp"

namespace msvol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double stationary_guess(const MscogarchSpec& spec) {
    try {
        const Vector m1 = solve(spec.psi_matrix(-1.0), spec.mean_source() * spec.stationary_regimes());
        const double mean = -sum(m1);
        if (std::isfinite(mean) && mean > 0.0) return mean;
    } catch (const std::exception&) {
    }
    // mean of the per-regime relaxation levels as a fallback
    const Vector pi = spec.stationary_regimes();
    double level = 0.0;
    for (int j = 0; j < spec.n_states(); ++j)
        level += pi[j] * spec.beta[j] / -std::log(spec.delta[j]);
    return level;
}

RegimePath shifted_regimes(const RegimePath& full, double start) {
    RegimePath out;
    out.n_states = full.n_states;
    out.horizon = full.horizon - start;
    out.initial_state = full.state_at(start);
    for (const auto& sw : full.switches)
        if (sw.time > start) out.switches.push_back({sw.time - start, sw.from, sw.to});
    return out;
}

// Walks the merged event/grid timeline.  Recording starts at absolute time
// `start` (the burn-in end); recorded times are shifted to [0, horizon].
PathBundle walk(const MscogarchSpec& spec, const MapPath& map, double v0, double grid_dt,
                double start, RandomStream& rng) {
    const int n = spec.n_states();
    const double horizon = map.regimes.horizon - start;
    Vector log_delta(n), v_inf(n), jump_coeff(n);
    for (int j = 0; j < n; ++j) {
        log_delta[j] = std::log(spec.delta[j]);
        v_inf[j] = -spec.beta[j] / log_delta[j];
        jump_coeff[j] = spec.lambda[j] / spec.delta[j];
    }

    const Vector rel_grid = make_grid(horizon, grid_dt);
    Vector abs_grid = rel_grid;
    for (double& t : abs_grid) t += start;

    PathBundle out;
    out.horizon = horizon;
    out.grid.reserve(abs_grid.size());
    out.v.reserve(abs_grid.size());
    out.g.reserve(abs_grid.size());
    out.j.reserve(abs_grid.size());
    out.events.reserve(map.events.size());
    out.regimes = start == 0.0 ? map.regimes : shifted_regimes(map.regimes, start);

    const bool g_drift = spec.driver.drift != 0.0;
    const bool g_brownian = spec.driver.brownian_sd != 0.0;

    const auto& events = map.events;
    double t = 0.0, v = v0, g = 0.0;
    int state = map.regimes.initial_state;
    bool recording = false;
    std::size_t ei = 0, gi = 0;

    while (gi < abs_grid.size() || ei < events.size()) {
        const double te = ei < events.size() ? events[ei].time : kInf;
        const double tg = gi < abs_grid.size() ? abs_grid[gi] : kInf;
        const double tb = std::min(te, tg);
        const double dt = tb - t;
        if (dt > 0.0) {
            const OuSegment seg{log_delta[state], v_inf[state]};
            if (recording) {
                out.integral_v += seg.integral(v, dt);
                out.integral_v_sq += seg.integral_sq(v, dt);
                if (g_drift) {
                    const double vs = v, vi = seg.v_inf, a = seg.a;
                    auto root = [vs, vi, a](double u) {
                        return std::sqrt(std::max(0.0, vi + (vs - vi) * std::exp(a * u)));
                    };
                    g += spec.driver.drift * integrate(root, 0.0, dt).value;
                }
                if (g_brownian)
                    g += rng.normal() * spec.driver.brownian_sd *
                         std::sqrt(std::max(0.0, seg.integral(v, dt)));
            }
            v = seg.value(v, dt);
            t = tb;
        }
        while (ei < events.size() && events[ei].time <= tb) {
            const MapEvent& ev = events[ei];
            double dv, dg;
            if (ev.kind == MapEventKind::Driver) {
                dv = jump_coeff[state] * v * ev.y * ev.y;
                dg = std::sqrt(v) * ev.y;
            } else {
                // e^{-dxi}(v + deta) - v, exact when dxi = 0
                dv = std::expm1(-ev.dxi) * v + std::exp(-ev.dxi) * ev.deta;
                dg = 0.0;
                state = ev.to;
            }
            if (recording) {
                out.events.push_back({ev.time - start, ev.kind, ev.from, ev.to, ev.y, ev.dxi,
                                      ev.deta, v, dv, dg});
                g += dg;
            }
            v += dv;
            ++ei;
        }
        while (gi < abs_grid.size() && abs_grid[gi] <= tb) {
            if (!recording) {
                recording = true;  // first sample time is the burn-in end
                g = 0.0;
            }
            out.grid.push_back(rel_grid[gi]);
            out.v.push_back(v);
            out.g.push_back(g);
            out.j.push_back(state);
            ++gi;
        }
    }
    return out;
}

}  // namespace

void MscogarchSpec::validate() const {
    const int n = q.size();
    if (static_cast<int>(beta.size()) != n || static_cast<int>(lambda.size()) != n ||
        static_cast<int>(delta.size()) != n)
        throw std::invalid_argument("MscogarchSpec: parameter vectors must have one entry per state");
    for (int j = 0; j < n; ++j) {
        if (!(beta[j] > 0.0))
            throw std::invalid_argument("MscogarchSpec: beta must be positive in state " +
                                        std::to_string(j + 1));
        if (!(lambda[j] >= 0.0))
            throw std::invalid_argument("MscogarchSpec: lambda must be >= 0 in state " +
                                        std::to_string(j + 1));
        if (!(delta[j] > 0.0 && delta[j] < 1.0))
            throw std::invalid_argument("MscogarchSpec: delta must lie in (0,1) in state " +
                                        std::to_string(j + 1));
    }
    driver.validate();
    if (driver.cp_intensity <= 0.0)
        throw std::invalid_argument("MscogarchSpec: driver needs a nonzero jump part");
    if (switch_jumps.n_states() != n)
        throw std::invalid_argument("MscogarchSpec: switch-jump table size mismatch");
    switch_jumps.require_nonnegative_eta();
    if (v0.kind == InitialLaw::Kind::Point && !(v0.value >= 0.0))
        throw std::invalid_argument("MscogarchSpec: initial squared volatility must be >= 0");
    if (initial_state < -1 || initial_state >= n)
        throw std::invalid_argument("MscogarchSpec: initial_state out of range");
}

std::vector<RegimePiece> MscogarchSpec::regime_pieces() const {
    std::vector<RegimePiece> pieces(n_states());
    for (int j = 0; j < n_states(); ++j) {
        RegimePiece& p = pieces[j];
        p.xi_drift = -std::log(delta[j]);
        p.eta_drift = beta[j];
        p.jump_intensity = driver.cp_intensity;
        p.mark = driver.jump_law;
        p.map = MarkMap::XiLogSquare;
        p.map_coeff = lambda[j] / delta[j];
    }
    return pieces;
}

Vector MscogarchSpec::psi_diag(double w) const {
    Vector psi(n_states());
    for (int j = 0; j < n_states(); ++j)
        psi[j] = cogarch_laplace_exponent(delta[j], lambda[j], driver, w);
    return psi;
}

Matrix MscogarchSpec::psi_matrix(double w) const {
    return matrix_exponent(psi_diag(w), q, switch_jumps, w);
}

Matrix MscogarchSpec::mean_source() const {
    Matrix m = hadamard_transposed(q.matrix(), f_matrix(q, switch_jumps, 1, 1));
    for (int j = 0; j < n_states(); ++j) m(j, j) += beta[j];
    return m;
}

double MscogarchSpec::burn_in_time() const {
    const double sa = spectral_abscissa(psi_matrix(-1.0));
    if (!(sa < 0.0))
        throw std::runtime_error(
            "MscogarchSpec: stationary start requires spectral_abscissa(Psi(-1)) < 0");
    return 20.0 / -sa;
}

PathBundle simulate(const MscogarchSpec& spec, double horizon, double grid_dt,
                    RandomStream& rng) {
    if (!(horizon > 0.0) || !(grid_dt > 0.0))
        throw std::invalid_argument("simulate: horizon and grid_dt must be positive");
    spec.validate();
    const int j0 = spec.initial_state >= 0 ? spec.initial_state
                                           : draw_state(spec.stationary_regimes(), rng);
    const auto pieces = spec.regime_pieces();
    if (spec.v0.kind == InitialLaw::Kind::Point) {
        const MapPath map = sample_map_path(spec.q, pieces, spec.switch_jumps, j0, horizon, rng);
        return walk(spec, map, spec.v0.value, grid_dt, 0.0, rng);
    }
    const double burn = spec.burn_in_time();
    const MapPath map =
        sample_map_path(spec.q, pieces, spec.switch_jumps, j0, burn + horizon, rng);
    return walk(spec, map, stationary_guess(spec), grid_dt, burn, rng);
}

PathBundle simulate_on(const MscogarchSpec& spec, const MapPath& map, double v0,
                       double grid_dt, RandomStream& rng) {
    spec.validate();
    if (!(v0 >= 0.0)) throw std::invalid_argument("simulate_on: v0 must be >= 0");
    if (!(grid_dt > 0.0)) throw std::invalid_argument("simulate_on: grid_dt must be positive");
    return walk(spec, map, v0, grid_dt, 0.0, rng);
}

UkPath uk_representation(const MscogarchSpec& spec, const MapPath& map) {
    spec.validate();
    UkPath uk;
    uk.regimes = map.regimes;
    const int n = spec.n_states();
    uk.u_drift.resize(n);
    for (int j = 0; j < n; ++j) uk.u_drift[j] = std::log(spec.delta[j]);
    uk.k_drift = spec.beta;
    uk.events.reserve(map.events.size());
    int state = map.regimes.initial_state;
    for (const auto& ev : map.events) {
        double du, dk;
        if (ev.kind == MapEventKind::Driver) {
            du = spec.lambda[state] / spec.delta[state] * ev.y * ev.y;
            dk = 0.0;
        } else {
            const double scale = std::exp(-ev.dxi);
            du = scale - 1.0;
            dk = scale * ev.deta;
            state = ev.to;
        }
        uk.events.push_back({ev.time, du, dk, state});
    }
    return uk;
}

double UkPath::u_at(double t) const {
    double u = 0.0, prev = 0.0;
    int state = regimes.initial_state;
    for (const auto& sw : regimes.switches) {
        if (sw.time >= t) break;
        u += u_drift[state] * (sw.time - prev);
        prev = sw.time;
        state = sw.to;
    }
    u += u_drift[state] * (t - prev);
    for (const auto& ev : events) {
        if (ev.time > t) break;
        u += ev.du;
    }
    return u;
}

double UkPath::k_at(double t) const {
    double k = 0.0, prev = 0.0;
    int state = regimes.initial_state;
    for (const auto& sw : regimes.switches) {
        if (sw.time >= t) break;
        k += k_drift[state] * (sw.time - prev);
        prev = sw.time;
        state = sw.to;
    }
    k += k_drift[state] * (t - prev);
    for (const auto& ev : events) {
        if (ev.time > t) break;
        k += ev.dk;
    }
    return k;
}

Vector uk_reconstruct(const UkPath& uk, double v0) {
    Vector out;
    out.reserve(uk.events.size());
    double v = v0, t = 0.0;
    int state = uk.regimes.initial_state;
    for (const auto& ev : uk.events) {
        const double a = uk.u_drift[state];
        const OuSegment seg{a, -uk.k_drift[state] / a};
        v = seg.value(v, ev.time - t);
        v += v * ev.du + ev.dk;
        state = ev.state_after;
        t = ev.time;
        out.push_back(v);
    }
    return out;
}

double kappa_xi(const MscogarchSpec& spec) {
    spec.validate();
    const Vector pi = spec.stationary_regimes();
    const Vector xr = xi_switch_mean_rates(spec.q, spec.switch_jumps);
    double kappa = 0.0;
    for (int j = 0; j < spec.n_states(); ++j) {
        const double log_integral = log1p_sq_moment(spec.lambda[j] / spec.delta[j], spec.driver);
        kappa += pi[j] * (-std::log(spec.delta[j]) - log_integral + xr[j]);
    }
    return kappa;
}

StationarityReport stationarity_check(const MscogarchSpec& spec, int mc_budget,
                                      RandomStream& rng) {
    spec.validate();
    bool any_lambda = false;
    for (double l : spec.lambda) any_lambda = any_lambda || l > 0.0;
    if (!any_lambda)
        throw std::invalid_argument(
            "stationarity_check: lambda identically zero is out of scope (volatility would be "
            "deterministic between switches)");

    StationarityReport rep;
    rep.kappa_xi = kappa_xi(spec);
    rep.kappa_positive = rep.kappa_xi > 0.0;
    // every supported switch-jump family has a finite log-moment
    rep.switch_log_moment_finite = true;

    const int n = spec.n_states();
    rep.cycle_log_moment.assign(n, 0.0);
    if (n > 1 && mc_budget > 0) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int cycle = 0; cycle < mc_budget; ++cycle) {
                double xi2 = 0.0, sup = 0.0;
                int s = j;
                do {
                    const int next = sample_next_state(spec.q, s, rng);
                    const SwitchJumpLaw& law = spec.switch_jumps.at(s, next);
                    xi2 += law.xi.sample(rng);
                    sup = std::max(sup, std::exp(-xi2) * law.eta.sample(rng));
                    s = next;
                } while (s != j);
                if (sup > 1.0) acc += std::log(sup);
            }
            rep.cycle_log_moment[j] = acc / mc_budget;
        }
    }
    rep.stationary = rep.kappa_positive && rep.switch_log_moment_finite;
    return rep;
}

ConditionReport stationary_conditions(const MscogarchSpec& spec, int k) {
    spec.validate();
    if (k < 1) throw std::invalid_argument("stationary_conditions: k >= 1 required");
    ConditionReport rep;
    rep.k = k;
    rep.exponent_dominated = true;
    rep.contraction = true;
    rep.spectral_negative = true;
    rep.jump_moments_finite = true;
    const int n = spec.n_states();
    rep.spectral_abscissa = -kInf;

    // the recursion inverts Psi(-level) for every level up to k
    for (int level = 1; level <= k; ++level) {
        const std::string lv = std::to_string(level);
        Vector psi;
        try {
            psi = spec.psi_diag(-level);
        } catch (const std::exception& e) {
            rep.jump_moments_finite = false;
            rep.failures.push_back("psi(-" + lv + ") diverges: " + e.what());
            continue;
        }
        for (int j = 0; j < n; ++j) {
            if (!(psi[j] < spec.q.exit_rate(j))) {
                rep.exponent_dominated = false;
                rep.failures.push_back("psi_" + std::to_string(j + 1) + "(-" + lv +
                                       ") >= |q_jj|");
            }
        }
        if (!rep.exponent_dominated) continue;
        const Matrix f0 = f_matrix(spec.q, spec.switch_jumps, level, 0);
        for (int j = 0; j < n && n > 1; ++j) {
            for (int i = 0; i < n; ++i) {
                if (i == j) continue;
                double cross = 0.0;
                for (int l = 0; l < n; ++l)
                    if (l != i && l != j) cross += spec.q.rate(i, l) * f0(i, l);
                const double ratio = cross / (spec.q.exit_rate(i) - psi[i]);
                rep.contraction_max = std::max(rep.contraction_max, ratio);
                if (!(ratio < 1.0)) {
                    rep.contraction = false;
                    rep.failures.push_back("contraction fails at pair (" + std::to_string(i + 1) +
                                           "," + std::to_string(j + 1) + ") for k=" + lv);
                }
            }
        }
        const double sa = spectral_abscissa(spec.psi_matrix(-level));
        rep.spectral_abscissa = std::max(rep.spectral_abscissa, sa);
        if (!(sa < 0.0)) {
            rep.spectral_negative = false;
            rep.failures.push_back("spectral abscissa of Psi(-" + lv + ") is " +
                                   std::to_string(sa));
        }
        // mixed switch moments E[e^{-level |x|} y^level] are finite for every
        // supported law family; nothing to flag
    }
    return rep;
}

StationaryMoment stationary_moment(const MscogarchSpec& spec, int k) {
    StationaryMoment sm;
    sm.conditions = stationary_conditions(spec, k);
    if (!sm.conditions.all_ok())
        throw std::runtime_error("stationary_moment: " + sm.conditions.summary());
    const int n = spec.n_states();
    std::vector<Vector> m(k + 1);
    m[0] = spec.stationary_regimes();
    for (int level = 1; level <= k; ++level) {
        Vector rhs(n, 0.0);
        for (int j = 0; j < n; ++j) rhs[j] = level * spec.beta[j] * m[level - 1][j];
        double binom = 1.0;
        for (int r = 1; r <= level; ++r) {
            binom = binom * (level - r + 1) / r;
            const Matrix source =
                hadamard_transposed(spec.q.matrix(), f_matrix(spec.q, spec.switch_jumps, level, r));
            const Vector sv = source * m[level - r];
            for (int j = 0; j < n; ++j) rhs[j] += binom * sv[j];
        }
        for (double& x : rhs) x = -x;
        m[level] = solve(spec.psi_matrix(-level), rhs);
    }
    sm.joint = m[k];
    sm.value = sum(m[k]);
    return sm;
}

double stationary_moment_product(const MscogarchSpec& spec, int k) {
    spec.validate();
    if (k < 1) throw std::invalid_argument("stationary_moment_product: k >= 1 required");
    if (!spec.switch_jumps.eta_all_zero())
        throw std::invalid_argument(
            "stationary_moment_product: requires switch jumps with zero eta component");
    const Vector pi = spec.stationary_regimes();
    const int n = spec.n_states();
    double factorial = 1.0, prod = 1.0;
    for (int level = 1; level <= k; ++level) {
        factorial *= level;
        Vector beta_pi(n);
        for (int j = 0; j < n; ++j) beta_pi[j] = spec.beta[j] * pi[j];
        prod *= -sum(solve(spec.psi_matrix(-level), beta_pi));
    }
    return factorial * prod;
}

AutocovResult mean_and_autocov(const MscogarchSpec& spec, int j0, double t, double s,
                               const AutocovInputs& inputs) {
    spec.validate();
    const int n = spec.n_states();
    if (j0 < 0 || j0 >= n) throw std::invalid_argument("mean_and_autocov: j0 out of range");
    if (!(s >= 0.0) || !(t >= s))
        throw std::invalid_argument("mean_and_autocov: need 0 <= s <= t");

    const Matrix psi = spec.psi_matrix(-1.0);
    const Matrix m = spec.mean_source();
    const Matrix qt = spec.q.transposed();

    AutocovResult out;
    const Matrix ep = expm(t * psi);
    const Matrix vl = van_loan_integral(psi, m, qt, t);
    for (int i = 0; i < n; ++i) out.mean += ep(i, j0) * inputs.e_v0 + vl(i, j0);

    if (!inputs.cov_ev_v.empty() || !inputs.cov_e_v.empty()) {
        if (static_cast<int>(inputs.cov_ev_v.size()) != n ||
            static_cast<int>(inputs.cov_e_v.size()) != n)
            throw std::invalid_argument("mean_and_autocov: covariance inputs must have length N");
        const double lag = t - s;
        out.cov_vector = expm(lag * qt) * inputs.cov_e_v;
        const Vector c1 = expm(lag * psi) * inputs.cov_ev_v;
        const Vector c2 = van_loan_integral(psi, m, qt, lag) * inputs.cov_e_v;
        out.cov = sum(c1) + sum(c2);
    }
    return out;
}

LogReturnMoments logreturn_moments(const MscogarchSpec& spec, double r, double h,
                                   const LogReturnInputs& inner) {
    spec.validate();
    if (!(r > 0.0) || !(h >= r))
        throw std::invalid_argument("logreturn_moments: need h >= r > 0");
    if (!spec.driver.pure_jump() || spec.driver.jump_law.mean() != 0.0)
        throw std::invalid_argument(
            "logreturn_moments: driver must be pure-jump with E[L_1] = 0");

    const int n = spec.n_states();
    const bool with_cov = !inner.g2v_e.empty() || !inner.g2_e.empty();
    // second moment needs k=1; the squared covariance needs k=2 as well
    const ConditionReport cond = stationary_conditions(spec, with_cov ? 2 : 1);
    if (!cond.all_ok()) throw std::runtime_error("logreturn_moments: " + cond.summary());

    const double el2 = levy_measure_moment(spec.driver, 2);
    const Matrix psi = spec.psi_matrix(-1.0);
    const Matrix m = spec.mean_source();
    const Matrix qt = spec.q.transposed();
    const Vector pi = spec.stationary_regimes();

    LogReturnMoments out;
    out.second_moment = -el2 * r * sum(solve(psi, m * pi));
    if (with_cov) {
        if (static_cast<int>(inner.g2v_e.size()) != n ||
            static_cast<int>(inner.g2_e.size()) != n)
            throw std::invalid_argument("logreturn_moments: inner expectations must have length N");
        const Matrix d1 = expm(h * psi) - expm((h - r) * psi);
        const Matrix k2 = van_loan_integral(psi, m, qt, h) -
                          van_loan_integral(psi, m, qt, h - r) -
                          m * (integral_expm(qt, h) - integral_expm(qt, h - r));
        const double term1 = sum(solve(psi, d1 * inner.g2v_e));
        const double term2 = sum(solve(psi, k2 * inner.g2_e));
        out.cov_squared = el2 * (term1 + term2) - out.second_moment * out.second_moment;
    } else {
        out.cov_squared = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace msvol
