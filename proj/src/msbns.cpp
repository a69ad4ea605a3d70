#include "msvol/msbns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace msvol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double stationary_guess(const MsbnsSpec& spec) {
    try {
        const Vector m1 = solve(spec.psi_matrix(-1.0), spec.mean_source() * spec.stationary_regimes());
        const double mean = -sum(m1);
        if (std::isfinite(mean) && mean > 0.0) return mean;
    } catch (const std::exception&) {
    }
    const Vector pi = spec.stationary_regimes();
    double level = 0.0;
    for (int j = 0; j < spec.n_states(); ++j)
        level += pi[j] * driver_moment(spec.subordinators[j], 1);
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

Vector occupation_until(const RegimePath& regimes, double t) {
    Vector occ(regimes.n_states, 0.0);
    double prev = 0.0;
    int state = regimes.initial_state;
    for (const auto& sw : regimes.switches) {
        if (sw.time >= t) break;
        occ[state] += sw.time - prev;
        prev = sw.time;
        state = sw.to;
    }
    occ[state] += t - prev;
    return occ;
}

PathBundle walk(const MsbnsSpec& spec, const MapPath& map, double v0, double grid_dt,
                double start, RandomStream& rng) {
    const int n = spec.n_states();
    const double horizon = map.regimes.horizon - start;
    Vector level(n);  // the OU relaxation level, lambda (b - V) dt between jumps
    for (int j = 0; j < n; ++j) level[j] = spec.subordinators[j].drift;
    const Vector rates = compensator(spec).rate_vector;
    Vector g_rate(n);  // continuous price drift: mu + rho (eta drift - compensator)
    for (int j = 0; j < n; ++j)
        g_rate[j] = spec.mu[j] + spec.rho[j] * (spec.lambda[j] * level[j] - rates[j]);

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
            const OuSegment seg{-spec.lambda[state], level[state]};
            if (recording) {
                const double iv = seg.integral(v, dt);
                out.integral_v += iv;
                out.integral_v_sq += seg.integral_sq(v, dt);
                g += g_rate[state] * dt + spec.beta[state] * iv;
                g += rng.normal() * std::sqrt(std::max(0.0, iv));
            }
            v = seg.value(v, dt);
            t = tb;
        }
        while (ei < events.size() && events[ei].time <= tb) {
            const MapEvent& ev = events[ei];
            double dv, dg;
            if (ev.kind == MapEventKind::Driver) {
                dv = ev.deta;
                dg = spec.rho[state] * ev.deta;
            } else {
                // e^{-dxi}(v + deta) - v, exact when dxi = 0
                dv = std::expm1(-ev.dxi) * v + std::exp(-ev.dxi) * ev.deta;
                dg = spec.rho[state] * ev.deta;  // left-limit regime
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

void MsbnsSpec::validate() const {
    const int n = q.size();
    if (static_cast<int>(lambda.size()) != n || static_cast<int>(mu.size()) != n ||
        static_cast<int>(beta.size()) != n || static_cast<int>(rho.size()) != n ||
        static_cast<int>(subordinators.size()) != n)
        throw std::invalid_argument("MsbnsSpec: parameter vectors must have one entry per state");
    for (int j = 0; j < n; ++j) {
        if (!(lambda[j] > 0.0))
            throw std::invalid_argument("MsbnsSpec: lambda must be positive in state " +
                                        std::to_string(j + 1));
        subordinators[j].validate();
        if (!subordinators[j].is_subordinator())
            throw std::invalid_argument("MsbnsSpec: driver in state " + std::to_string(j + 1) +
                                        " must be a subordinator (nonnegative drift and jumps, "
                                        "no Brownian part)");
    }
    if (switch_jumps.n_states() != n)
        throw std::invalid_argument("MsbnsSpec: switch-jump table size mismatch");
    switch_jumps.require_nonnegative_xi();
    switch_jumps.require_nonnegative_eta();
    if (v0.kind == InitialLaw::Kind::Point && !(v0.value >= 0.0))
        throw std::invalid_argument("MsbnsSpec: initial squared volatility must be >= 0");
    if (initial_state < -1 || initial_state >= n)
        throw std::invalid_argument("MsbnsSpec: initial_state out of range");
}

std::vector<RegimePiece> MsbnsSpec::regime_pieces() const {
    std::vector<RegimePiece> pieces(n_states());
    for (int j = 0; j < n_states(); ++j) {
        RegimePiece& p = pieces[j];
        p.xi_drift = lambda[j];
        p.eta_drift = lambda[j] * subordinators[j].drift;
        // the law of L^{(j)} run at speed lambda_j, generated directly
        p.jump_intensity = lambda[j] * subordinators[j].cp_intensity;
        p.mark = subordinators[j].jump_law;
        p.map = MarkMap::EtaAdditive;
    }
    return pieces;
}

Vector MsbnsSpec::psi_diag(double w) const {
    Vector psi(n_states());
    for (int j = 0; j < n_states(); ++j) psi[j] = w * lambda[j];
    return psi;
}

Matrix MsbnsSpec::psi_matrix(double w) const {
    return matrix_exponent(psi_diag(w), q, switch_jumps, w);
}

Matrix MsbnsSpec::mean_source() const {
    Matrix m = hadamard_transposed(q.matrix(), f_matrix(q, switch_jumps, 1, 1));
    for (int j = 0; j < n_states(); ++j) m(j, j) += lambda[j] * driver_moment(subordinators[j], 1);
    return m;
}

double MsbnsSpec::burn_in_time() const {
    const double sa = spectral_abscissa(psi_matrix(-1.0));
    if (!(sa < 0.0))
        throw std::runtime_error(
            "MsbnsSpec: stationary start requires spectral_abscissa(Psi(-1)) < 0");
    return 20.0 / -sa;
}

CompensatorSpec compensator(const MsbnsSpec& spec) {
    const Vector er = eta_switch_mean_rates(spec.q, spec.switch_jumps);
    CompensatorSpec comp;
    comp.rate_vector.resize(spec.n_states());
    for (int j = 0; j < spec.n_states(); ++j) {
        comp.rate_vector[j] = spec.lambda[j] * driver_moment(spec.subordinators[j], 1) + er[j];
        if (!std::isfinite(comp.rate_vector[j]))
            throw std::domain_error("compensator: rate diverges in state " + std::to_string(j + 1));
    }
    return comp;
}

PathBundle simulate(const MsbnsSpec& spec, double horizon, double grid_dt,
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

PathBundle simulate_on(const MsbnsSpec& spec, const MapPath& map, double v0,
                       double grid_dt, RandomStream& rng) {
    spec.validate();
    if (!(v0 >= 0.0)) throw std::invalid_argument("simulate_on: v0 must be >= 0");
    if (!(grid_dt > 0.0)) throw std::invalid_argument("simulate_on: grid_dt must be positive");
    return walk(spec, map, v0, grid_dt, 0.0, rng);
}

double eta_tilde(const MsbnsSpec& spec, const PathBundle& bundle, double t) {
    if (!(t >= 0.0) || t > bundle.horizon)
        throw std::invalid_argument("eta_tilde: t outside the recorded horizon");
    const Vector rates = compensator(spec).rate_vector;
    const Vector occ = occupation_until(bundle.regimes, t);
    double eta = 0.0;
    for (const auto& ev : bundle.events) {
        if (ev.time > t) break;
        eta += ev.deta;
    }
    for (int j = 0; j < spec.n_states(); ++j)
        eta += (spec.lambda[j] * spec.subordinators[j].drift - rates[j]) * occ[j];
    return eta;
}

DegenerateReport degenerate_check(const MsbnsSpec& spec) {
    spec.validate();
    DegenerateReport rep;
    const int n = spec.n_states();
    Vector c(n);
    for (int j = 0; j < n; ++j) {
        const LevyDriverSpec& sub = spec.subordinators[j];
        if (sub.cp_intensity > 0.0 && !sub.jump_law.is_zero()) return rep;
        c[j] = sub.drift;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j || spec.q.rate(i, j) <= 0.0) continue;
            const SwitchJumpLaw& law = spec.switch_jumps.at(i, j);
            if (law.xi.kind != JumpKind::Point || law.eta.kind != JumpKind::Point) return rep;
            const double after = std::exp(-law.xi.a) * (law.eta.a + c[i]);
            if (std::abs(after - c[j]) > 1e-12 * std::max(1.0, std::abs(c[j]))) return rep;
        }
    }
    rep.degenerate = true;
    rep.c = std::move(c);
    return rep;
}

MsbnsStationarityReport stationarity_check(const MsbnsSpec& spec, int mc_budget,
                                           RandomStream& rng) {
    spec.validate();
    if (degenerate_check(spec).degenerate)
        throw std::invalid_argument(
            "stationarity_check: spec admits the constant solution; see degenerate_check");

    MsbnsStationarityReport rep;
    const int n = spec.n_states();
    const Vector pi = spec.stationary_regimes();
    const Vector xr = xi_switch_mean_rates(spec.q, spec.switch_jumps);
    for (int j = 0; j < n; ++j) rep.kappa_xi += pi[j] * (spec.lambda[j] + xr[j]);
    rep.kappa_positive = rep.kappa_xi > 0.0;

    rep.driver_log_moment.resize(n);
    rep.driver_log_moment_finite = true;
    for (int j = 0; j < n; ++j) {
        const LogMoment lm = log_moment(spec.subordinators[j]);
        rep.driver_log_moment[j] = lm.value;
        rep.driver_log_moment_finite = rep.driver_log_moment_finite && lm.finite;
    }
    rep.switch_log_moment_finite = true;

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
    rep.stationary = rep.kappa_positive && rep.driver_log_moment_finite &&
                     rep.switch_log_moment_finite;
    return rep;
}

ConditionReport stationary_conditions(const MsbnsSpec& spec, int k) {
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

    for (int level = 1; level <= k; ++level) {
        const std::string lv = std::to_string(level);
        const Vector psi = spec.psi_diag(-level);  // -level lambda_j, always < 0
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
        for (int j = 0; j < n; ++j) {
            if (!std::isfinite(levy_measure_moment(spec.subordinators[j], level))) {
                rep.jump_moments_finite = false;
                rep.failures.push_back("driver moment " + lv + " diverges in state " +
                                       std::to_string(j + 1));
            }
        }
    }
    return rep;
}

StationaryMoment stationary_moment(const MsbnsSpec& spec, int k, MomentVariant variant) {
    StationaryMoment sm;
    sm.conditions = stationary_conditions(spec, k);
    if (!sm.conditions.all_ok())
        throw std::runtime_error("stationary_moment: " + sm.conditions.summary());
    const int n = spec.n_states();
    std::vector<Vector> m(k + 1);
    m[0] = spec.stationary_regimes();
    for (int level = 1; level <= k; ++level) {
        Vector rhs(n, 0.0);
        for (int j = 0; j < n; ++j)
            rhs[j] = level * spec.lambda[j] * spec.subordinators[j].drift * m[level - 1][j];
        double binom = 1.0;
        for (int r = 1; r <= level; ++r) {
            binom = binom * (level - r + 1) / r;
            const Matrix source =
                hadamard_transposed(spec.q.matrix(), f_matrix(spec.q, spec.switch_jumps, level, r));
            const Vector sv = source * m[level - r];
            for (int j = 0; j < n; ++j) {
                const LevyDriverSpec& sub = spec.subordinators[j];
                const double nu_moment = variant == MomentVariant::FullSupport
                                             ? levy_measure_moment(sub, r)
                                             : levy_measure_moment_above_one(sub, r);
                rhs[j] += binom * (spec.lambda[j] * nu_moment * m[level - r][j] + sv[j]);
            }
        }
        for (double& x : rhs) x = -x;
        m[level] = solve(spec.psi_matrix(-level), rhs);
    }
    sm.joint = m[k];
    sm.value = sum(m[k]);
    return sm;
}

AutocovResult mean_and_autocov(const MsbnsSpec& spec, int j0, double t, double s,
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

LogReturnMoments logreturn_moments(const MsbnsSpec& spec, double r, double h,
                                   const LogReturnInputs& inner) {
    spec.validate();
    if (!(r > 0.0) || !(h >= r))
        throw std::invalid_argument("logreturn_moments: need h >= r > 0");

    const int n = spec.n_states();
    bool zero_mbr = true;
    for (int j = 0; j < n; ++j)
        zero_mbr = zero_mbr && spec.mu[j] == 0.0 && spec.beta[j] == 0.0 && spec.rho[j] == 0.0;
    const bool with_cov = !inner.g2v_e.empty() || !inner.g2_e.empty();
    if (with_cov && !zero_mbr)
        throw std::invalid_argument(
            "logreturn_moments: the squared-return covariance needs mu = beta = rho = 0");

    const ConditionReport cond = stationary_conditions(spec, with_cov ? 2 : 1);
    if (!cond.all_ok()) throw std::runtime_error("logreturn_moments: " + cond.summary());

    const Matrix psi = spec.psi_matrix(-1.0);
    const Matrix m = spec.mean_source();
    const Matrix qt = spec.q.transposed();
    const Vector pi = spec.stationary_regimes();
    const Vector m1 = solve(psi, m * pi);  // -E_pi[V e_J]

    LogReturnMoments out;
    const Vector iq = integral_expm(qt, r) * pi;
    for (int j = 0; j < n; ++j) out.mean += spec.mu[j] * iq[j] - r * spec.beta[j] * m1[j];

    if (!zero_mbr) {
        out.second_moment = kNaN;
        out.cov_disjoint = kNaN;
        out.cov_squared = kNaN;
        return out;
    }
    out.second_moment = -r * sum(m1);
    out.cov_disjoint = 0.0;
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
        out.cov_squared = term1 + term2 - out.second_moment * out.second_moment;
    } else {
        out.cov_squared = kNaN;
    }
    return out;
}

MartingaleCheckReport compensator_martingale_check(const MsbnsSpec& spec, double horizon,
                                                   int n_paths, RandomStream& rng) {
    spec.validate();
    if (!(horizon > 0.0) || n_paths < 2)
        throw std::invalid_argument("compensator_martingale_check: need horizon > 0, n_paths >= 2");

    const Vector rates = compensator(spec).rate_vector;
    const auto pieces = spec.regime_pieces();
    const Vector pi = spec.stationary_regimes();
    const int n = spec.n_states();

    MartingaleCheckReport rep;
    rep.times = {horizon / 50.0, horizon / 5.0, horizon};
    const std::size_t nt = rep.times.size();
    Vector acc(nt, 0.0), acc_sq(nt, 0.0);

    for (int p = 0; p < n_paths; ++p) {
        const int j0 = spec.initial_state >= 0 ? spec.initial_state : draw_state(pi, rng);
        const MapPath map = sample_map_path(spec.q, pieces, spec.switch_jumps, j0, horizon, rng);
        std::size_t ei = 0;
        double jumps = 0.0;
        for (std::size_t ti = 0; ti < nt; ++ti) {
            const double t = rep.times[ti];
            for (; ei < map.events.size() && map.events[ei].time <= t; ++ei)
                jumps += map.events[ei].deta;
            const Vector occ = occupation_until(map.regimes, t);
            double value = jumps;
            for (int j = 0; j < n; ++j)
                value += (spec.lambda[j] * spec.subordinators[j].drift - rates[j]) * occ[j];
            acc[ti] += value;
            acc_sq[ti] += value * value;
        }
    }

    rep.estimate.resize(nt);
    rep.standard_error.resize(nt);
    rep.pass = true;
    for (std::size_t ti = 0; ti < nt; ++ti) {
        const double mean = acc[ti] / n_paths;
        const double var = std::max(0.0, acc_sq[ti] / n_paths - mean * mean);
        rep.estimate[ti] = mean;
        rep.standard_error[ti] = std::sqrt(var / (n_paths - 1));
        rep.pass = rep.pass && std::abs(mean) <= 3.0 * rep.standard_error[ti];
    }
    return rep;
}

}  // namespace msvol
