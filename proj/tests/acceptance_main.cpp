// End-to-end acceptance gates for the volatility engine. Every criterion
// prints one [PASS]/[FAIL] line (diagnostics indented above it) and the
// process exits nonzero if any gate fails.
//
//   argv[1]  directory holding figure1.json / figure2.json
//   argv[2]  msvol CLI binary, exercised by the determinism gate

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "msvol/config_io.hpp"

namespace fs = std::filesystem;
using namespace msvol;

namespace {

int g_failures = 0;

void note(const std::string& text) { std::cout << "    " << text << "\n"; }

void run_gate(int id, const std::string& label, const std::function<bool()>& body) {
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        note(std::string("exception: ") + e.what());
    }
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << label << "\n";
    if (!ok) ++g_failures;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

MscogarchSpec single_cogarch(double beta, double lambda, double delta) {
    MscogarchSpec spec{{beta}, {lambda}, {delta}, {}, GeneratorMatrix(Matrix(1, 1, 0.0)),
                       SwitchJumpTable(1), InitialLaw::point(1.0), 0};
    spec.driver.cp_intensity = 1.0;
    spec.driver.jump_law = JumpLaw::normal(0.0, 1.0);
    return spec;
}

MsbnsSpec single_bns(double lambda, const LevyDriverSpec& sub) {
    return MsbnsSpec{{lambda}, {0.0},
                     {0.0},    {0.0},
                     {sub},    GeneratorMatrix(Matrix(1, 1, 0.0)),
                     SwitchJumpTable(1), InitialLaw::point(1.0),
                     0};
}

// 1. With one state and no switch jumps the machinery must collapse to the
//    scalar theory: the stationarity verdict to the log-moment condition, the
//    moment recursion to the product formula, the BNS mean to E[L_1].
bool criterion_reductions() {
    bool ok = true;

    RandomStream rng(11);
    int agree = 0, total = 0;
    for (const double delta : {0.80, 0.90, 0.95, 0.97})
        for (const double lambda : {0.02, 0.05, 0.2, 0.5, 1.0, 2.0}) {
            const MscogarchSpec spec = single_cogarch(1.0, lambda, delta);
            const bool verdict = stationarity_check(spec, 200, rng).stationary;
            const bool scalar =
                log1p_sq_moment(lambda / delta, spec.driver) < -std::log(delta);
            ++total;
            if (verdict == scalar) ++agree;
        }
    note("(a) verdict vs scalar log-moment condition: " + std::to_string(agree) + "/" +
         std::to_string(total) + " sweep points agree");
    ok = ok && agree == total;

    const MscogarchSpec cog = single_cogarch(0.7, 0.042, 0.9);
    double worst_b = 0.0;
    for (int k = 1; k <= 4; ++k) {
        const double rec = stationary_moment(cog, k).value;
        const double prod = stationary_moment_product(cog, k);
        worst_b = std::max(worst_b, std::abs(rec - prod) / std::max(1.0, std::abs(rec)));
    }
    note("(b) recursion vs product formula, k <= 4: max rel gap " + fmt(worst_b));
    ok = ok && worst_b <= 1e-10;

    double worst_c = 0.0;
    LevyDriverSpec s1;
    s1.cp_intensity = 2.0;
    s1.jump_law = JumpLaw::exponential(0.1);
    LevyDriverSpec s2;
    s2.cp_intensity = 0.5;
    s2.jump_law = JumpLaw::point(1.5);
    LevyDriverSpec s3;
    s3.drift = 0.4;
    s3.cp_intensity = 1.0;
    s3.jump_law = JumpLaw::exponential(1.0);
    const double lams[] = {0.3, 1.7, 0.9};
    const LevyDriverSpec subs[] = {s1, s2, s3};
    for (int i = 0; i < 3; ++i) {
        const double mean = stationary_moment(single_bns(lams[i], subs[i]), 1).value;
        const double el1 = driver_moment(subs[i], 1);
        worst_c = std::max(worst_c, std::abs(mean - el1) / std::max(1.0, std::abs(el1)));
    }
    note("(c) E[V] vs E[L_1] across three subordinators: max rel gap " + fmt(worst_c));
    return ok && worst_c <= 1e-10;
}

// 2. Psi(0) must reproduce Q^T bit for bit on randomly generated valid specs,
//    and Q^T itself must have spectral abscissa 0.
bool criterion_matrix_exponent() {
    RandomStream rng(20260817);
    const JumpLaw xi_menu[] = {JumpLaw::zero(), JumpLaw::point(0.3), JumpLaw::exponential(2.0),
                               JumpLaw::normal(0.1, 0.2)};
    const JumpLaw eta_menu[] = {JumpLaw::zero(), JumpLaw::point(0.5), JumpLaw::exponential(1.5)};

    int pass = 0;
    double worst_sa = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + trial % 4;
        Matrix qm(n, n, 0.0);
        for (int i = 0; i < n; ++i) {
            double off = 0.0;
            for (int j = 0; j < n; ++j)
                if (i != j) off += qm(i, j) = 0.01 + 0.99 * rng.uniform();
            qm(i, i) = -off;
        }
        const GeneratorMatrix q(qm);
        const bool is_bns = trial % 2 == 1;

        SwitchJumpTable table(n);
        int pick = trial;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                // BNS confines the xi coordinate to [0, inf)
                const int n_xi = is_bns ? 3 : 4;
                table.set(i, j, {xi_menu[pick % n_xi], eta_menu[(pick / 3) % 3]});
                ++pick;
            }

        ModelSpec model = [&]() -> ModelSpec {
            if (is_bns) {
                MsbnsSpec spec{Vector(n), Vector(n), Vector(n), Vector(n),
                               {},        q,         table,     InitialLaw::point(1.0),
                               0};
                for (int i = 0; i < n; ++i) {
                    spec.lambda[i] = 0.1 + 0.9 * rng.uniform();
                    spec.mu[i] = -0.2 + 0.4 * rng.uniform();
                    spec.beta[i] = -0.1 + 0.2 * rng.uniform();
                    spec.rho[i] = -0.4 * rng.uniform();
                    LevyDriverSpec sub;
                    sub.drift = i % 3 == 2 ? 0.3 * rng.uniform() : 0.0;
                    sub.cp_intensity = 0.5 + 2.5 * rng.uniform();
                    sub.jump_law = JumpLaw::exponential(0.5 + 2.5 * rng.uniform());
                    spec.subordinators.push_back(sub);
                }
                return spec;
            }
            MscogarchSpec spec{Vector(n), Vector(n), Vector(n), {}, q, table,
                               InitialLaw::point(1.0), 0};
            for (int i = 0; i < n; ++i) {
                spec.beta[i] = 0.5 + 1.5 * rng.uniform();
                spec.lambda[i] = 0.1 * rng.uniform();
                spec.delta[i] = 0.85 + 0.1 * rng.uniform();
            }
            spec.driver.cp_intensity = 1.0;
            spec.driver.jump_law = JumpLaw::normal(0.0, 1.0);
            return spec;
        }();

        std::visit([](const auto& spec) { spec.validate(); }, model);
        const Matrix psi0 =
            std::visit([](const auto& spec) { return spec.psi_matrix(0.0); }, model);
        const Matrix qt = q.transposed();
        bool exact = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) exact = exact && psi0(i, j) == qt(i, j);
        const double sa = std::abs(spectral_abscissa(qt));
        worst_sa = std::max(worst_sa, sa);
        if (exact && sa <= 1e-9) ++pass;
    }
    note(std::to_string(pass) + "/50 random specs have Psi(0) == Q^T bitwise; worst |sa(Q^T)| " +
         fmt(worst_sa));
    return pass == 50;
}

// 3. The direct event walk and the (U, K) reconstruction must agree on V at
//    every event of every path.
bool criterion_uk_consistency(const MscogarchSpec& cog) {
    double worst = 0.0;
    std::size_t n_events = 0;
    for (int p = 0; p < 100; ++p) {
        RandomStream map_rng = RandomStream::substream(7, static_cast<std::uint64_t>(p));
        const MapPath map = sample_map_path(cog.q, cog.regime_pieces(), cog.switch_jumps,
                                            p % cog.n_states(), 50.0, map_rng);
        RandomStream price_rng = RandomStream::substream(1007, static_cast<std::uint64_t>(p));
        const PathBundle direct = simulate_on(cog, map, 20.0, 1.0, price_rng);
        const UkPath uk = uk_representation(cog, map);
        const Vector recon = uk_reconstruct(uk, 20.0);
        if (recon.size() != direct.events.size()) {
            note("path " + std::to_string(p) + ": event count mismatch");
            return false;
        }
        for (std::size_t e = 0; e < recon.size(); ++e) {
            const double ref = direct.events[e].v_before + direct.events[e].dv;
            worst = std::max(worst, std::abs(recon[e] - ref));
        }
        n_events += recon.size();
    }
    note("100 paths, " + std::to_string(n_events) + " events, max |V_direct - V_uk| = " +
         fmt(worst));
    return worst <= 1e-9;
}

// 4. Transient mean from a pinned start vs 10^4-path ensembles.
bool criterion_mean(const ModelSpec& model, const std::string& name, std::uint64_t seed) {
    const ModelSpec point = with_point_start(model, 1.0, 0);
    Functional f;
    f.kind = Functional::Kind::MeanAtTimes;
    f.times = {1.0, 5.0, 20.0};
    f.horizon = 20.0;
    f.grid_dt = 0.25;
    const EnsembleEstimate est = ensemble_estimate(point, f, 10000, seed);
    bool ok = true;
    for (std::size_t i = 0; i < f.times.size(); ++i) {
        AutocovInputs in;
        in.e_v0 = 1.0;
        const double analytic = std::visit(
            [&](const auto& spec) { return mean_and_autocov(spec, 0, f.times[i], f.times[i], in).mean; },
            point);
        const double z = (est.mean[i] - analytic) / est.std_error[i];
        note(name + " E_1[V_t] at t = " + fmt(f.times[i]) + ": analytic " + fmt(analytic) +
             ", MC " + fmt(est.mean[i]) + ", z = " + fmt(z));
        ok = ok && std::abs(z) < 3.0;
    }
    return ok;
}

// 5. Stationary moments vs long-horizon ergodic averages, plus the truncated
//    vs full-support arbitration of the MSBNS moment source integral.
bool criterion_stationary_moments(const ModelSpec& fig1, const ModelSpec& fig2) {
    bool ok = true;
    const std::pair<const ModelSpec*, std::string> scen[] = {{&fig1, "figure1"},
                                                             {&fig2, "figure2"}};
    std::uint64_t seed = 505051;
    for (const auto& [model, name] : scen) {
        const ModelSpec stat = with_stationary_start(*model);
        Functional f;
        f.kind = Functional::Kind::TimeAverage;
        f.horizon = 10000.0;
        f.grid_dt = 100.0;
        const EnsembleEstimate est = ensemble_estimate(stat, f, 16, seed++);
        for (int k = 1; k <= 2; ++k) {
            const double analytic = std::visit(
                [&](const auto& spec) { return stationary_moment(spec, k).value; }, stat);
            const double z = (est.mean[k - 1] - analytic) / est.std_error[k - 1];
            note(name + " E[V^" + std::to_string(k) + "]: analytic " + fmt(analytic) + ", MC " +
                 fmt(est.mean[k - 1]) + ", z = " + fmt(z));
            ok = ok && std::abs(z) < 3.0;
        }
    }

    // arbitration: the two candidate source integrals disagree at k = 2 for a
    // single-state subordinator with mass below 1; exactly one matches MC
    LevyDriverSpec sub;
    sub.cp_intensity = 4.0;
    sub.jump_law = JumpLaw::exponential(2.0);
    const MsbnsSpec arb = single_bns(1.0, sub);
    const double e2_full = stationary_moment(arb, 2, MomentVariant::FullSupport).value;
    const double e2_trunc = stationary_moment(arb, 2, MomentVariant::AboveOne).value;

    const ModelSpec stat = with_stationary_start(ModelSpec(arb));
    Functional f;
    f.kind = Functional::Kind::TimeAverage;
    f.horizon = 2000.0;
    f.grid_dt = 100.0;
    const EnsembleEstimate est = ensemble_estimate(stat, f, 32, 505053);
    const double z_full = (est.mean[1] - e2_full) / est.std_error[1];
    const double z_trunc = (est.mean[1] - e2_trunc) / est.std_error[1];
    const bool full_pass = std::abs(z_full) < 3.0;
    const bool trunc_pass = std::abs(z_trunc) < 3.0;
    note("arbitration MC E[V^2] = " + fmt(est.mean[1]) + " +- " + fmt(est.std_error[1]));
    note("arbitration full-support value " + fmt(e2_full) + " (z = " + fmt(z_full) +
         "), truncated value " + fmt(e2_trunc) + " (z = " + fmt(z_trunc) + ")");
    if (full_pass != trunc_pass)
        note(std::string("arbitration verdict: the ") +
             (full_pass ? "full-support" : "truncated") + " integral matches the simulation");
    return ok && (full_pass != trunc_pass);
}

// 6. Log-return structure: centered returns, vanishing disjoint-window
//    covariance, the second-moment formula, and (MSCOGARCH) the squared-return
//    covariance with MC-supplied inner expectations.
bool criterion_returns(const MscogarchSpec& cog, const MsbnsSpec& bns) {
    bool ok = true;
    {
        const ModelSpec stat = with_stationary_start(ModelSpec(cog));
        Functional fr;
        fr.kind = Functional::Kind::ReturnMoments;
        fr.r = 1.0;
        fr.h = 2.0;
        Functional fi;
        fi.kind = Functional::Kind::InnerExpectations;
        fi.r = 1.0;
        const PathStatistic sret = make_statistic(fr);
        const PathStatistic sinner = make_statistic(fi);
        const PathStatistic combo = [sret, sinner](const PathBundle& b) {
            Vector out = sret(b);
            const Vector w = sinner(b);
            out.insert(out.end(), w.begin(), w.end());
            return out;
        };
        const EnsembleSlots slots = run_ensemble(stat, 3.0, 1.0, 100000, 606066, combo);
        const EnsembleEstimate est = summarize("fig1 returns", slots);

        const int n = cog.n_states();
        LogReturnInputs inner;
        inner.g2v_e.assign(est.mean.begin() + 6, est.mean.begin() + 6 + n);
        inner.g2_e.assign(est.mean.begin() + 6 + n, est.mean.begin() + 6 + 2 * n);
        const LogReturnMoments lr = logreturn_moments(cog, fr.r, fr.h, inner);

        const bool mean_ok = std::abs(est.mean[0]) <= 1.96 * est.std_error[0];
        note("figure1 mean return " + fmt(est.mean[0]) + " +- " + fmt(est.std_error[0]) +
             (mean_ok ? " (inside" : " (outside") + " the 95% band around 0)");
        const CovEstimate dis = slot_covariance(slots, 0, 2);
        const bool dis_ok = std::abs(dis.value) <= 1.96 * dis.se;
        note("figure1 disjoint-window covariance " + fmt(dis.value) + " +- " + fmt(dis.se) +
             (dis_ok ? " (inside" : " (outside") + " the 95% band around 0)");
        const double z2 = (est.mean[1] - lr.second_moment) / est.std_error[1];
        note("figure1 E[(G_r)^2]: analytic " + fmt(lr.second_moment) + ", MC " + fmt(est.mean[1]) +
             ", z = " + fmt(z2));
        const CovEstimate sq = slot_covariance(slots, 1, 3);
        const double zsq = (sq.value - lr.cov_squared) / sq.se;
        note("figure1 squared-return covariance: analytic " + fmt(lr.cov_squared) + ", MC " +
             fmt(sq.value) + ", z = " + fmt(zsq));
        ok = ok && mean_ok && dis_ok && std::abs(z2) < 3.0 && std::abs(zsq) < 3.0;
    }
    {
        MsbnsSpec flat = bns;  // mu = beta = rho = 0 makes the formulas exact
        flat.mu.assign(flat.mu.size(), 0.0);
        flat.beta.assign(flat.beta.size(), 0.0);
        flat.rho.assign(flat.rho.size(), 0.0);
        const ModelSpec stat = with_stationary_start(ModelSpec(flat));
        Functional fr;
        fr.kind = Functional::Kind::ReturnMoments;
        fr.r = 1.0;
        fr.h = 2.0;
        const EnsembleSlots slots = run_ensemble(stat, 3.0, 1.0, 20000, 606062, make_statistic(fr));
        const EnsembleEstimate est = summarize("fig2 returns", slots);
        const LogReturnMoments lr = logreturn_moments(flat, fr.r, fr.h, LogReturnInputs{});

        const bool mean_ok = std::abs(est.mean[0]) <= 1.96 * est.std_error[0];
        note("figure2 mean return " + fmt(est.mean[0]) + " +- " + fmt(est.std_error[0]) +
             (mean_ok ? " (inside" : " (outside") + " the 95% band around 0)");
        const CovEstimate dis = slot_covariance(slots, 0, 2);
        const bool dis_ok = std::abs(dis.value) <= 1.96 * dis.se;
        note("figure2 disjoint-window covariance " + fmt(dis.value) + " +- " + fmt(dis.se) +
             (dis_ok ? " (inside" : " (outside") + " the 95% band around 0)");
        const double z2 = (est.mean[1] - lr.second_moment) / est.std_error[1];
        note("figure2 E[(G_r)^2]: analytic " + fmt(lr.second_moment) + ", MC " + fmt(est.mean[1]) +
             ", z = " + fmt(z2));
        ok = ok && mean_ok && dis_ok && std::abs(z2) < 3.0;
    }
    return ok;
}

// 7. The compensated eta process must behave as a mean-zero martingale.
bool criterion_martingale(const MsbnsSpec& bns) {
    RandomStream rng(707);
    const MartingaleCheckReport rep = compensator_martingale_check(bns, 50.0, 10000, rng);
    for (std::size_t i = 0; i < rep.times.size(); ++i)
        note("t = " + fmt(rep.times[i]) + ": E[eta~_t] = " + fmt(rep.estimate[i]) + " +- " +
             fmt(rep.standard_error[i]));
    return rep.pass;
}

// 8. The stationary autocovariance must decay at the rate set by the
//    spectral abscissa of Psi(-1): regression slope within 10%.
bool criterion_decay(const ModelSpec& model, const std::string& name, int maxlag, int lag_lo,
                     int lag_hi, std::uint64_t seed) {
    const double sa = std::visit(
        [](const auto& spec) { return spectral_abscissa(spec.psi_matrix(-1.0)); }, model);

    const ModelSpec stat = with_stationary_start(model);
    const PathStatistic corr = [maxlag](const PathBundle& b) {
        const std::size_t n = b.v.size();
        Vector out(static_cast<std::size_t>(maxlag) + 2, 0.0);
        for (int l = 0; l <= maxlag; ++l) {
            double s = 0.0;
            const std::size_t ll = static_cast<std::size_t>(l);
            for (std::size_t t = 0; t + ll < n; ++t) s += b.v[t] * b.v[t + ll];
            out[ll] = s / static_cast<double>(n - ll);
        }
        double m = 0.0;
        for (const double v : b.v) m += v;
        out[static_cast<std::size_t>(maxlag) + 1] = m / static_cast<double>(n);
        return out;
    };
    const EnsembleSlots slots = run_ensemble(stat, 2000.0, 1.0, 800, seed, corr);
    const EnsembleEstimate est = summarize("autocov", slots);
    const double mean_sq = est.mean[static_cast<std::size_t>(maxlag) + 1] *
                           est.mean[static_cast<std::size_t>(maxlag) + 1];

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int cnt = 0;
    for (int l = lag_lo; l <= lag_hi; ++l) {
        const double cov = est.mean[static_cast<std::size_t>(l)] - mean_sq;
        if (cov <= 0.0) continue;
        const double x = static_cast<double>(l), y = std::log(cov);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++cnt;
    }
    if (cnt < 10) {
        note(name + ": only " + std::to_string(cnt) + " usable lags in the window");
        return false;
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double gap = std::abs(slope - sa) / std::abs(sa);
    note(name + " lags [" + std::to_string(lag_lo) + ", " + std::to_string(lag_hi) +
         "]: slope " + fmt(slope) + " vs sa(Psi(-1)) " + fmt(sa) + ", rel gap " + fmt(gap));
    return gap <= 0.10;
}

// 9. The validate subcommand must be byte-deterministic in the seed,
//    including across worker counts.
bool criterion_cli(const std::string& cli, const fs::path& configs) {
    if (cli.empty()) {
        note("CLI binary path not supplied");
        return false;
    }
    const fs::path base = fs::temp_directory_path() / "msvol_acceptance";
    std::error_code ec;
    fs::remove_all(base, ec);
    fs::create_directories(base);

    bool ok = true;
    for (const std::string name : {"figure1", "figure2"}) {
        const fs::path cfg = configs / (name + ".json");
        const int threads[] = {1, 1, 4};
        std::vector<std::string> outputs;
        for (int run = 0; run < 3; ++run) {
            const fs::path dir = base / (name + "_run" + std::to_string(run));
            std::ostringstream cmd;
            cmd << '"' << cli << "\" validate --config \"" << cfg.string()
                << "\" --seed 777 --paths 2000 --threads " << threads[run] << " --out \""
                << dir.string() << "\" > /dev/null";
            const int rc = std::system(cmd.str().c_str());
            if (rc != 0) {
                note(name + " run " + std::to_string(run) + " exited with status " +
                     std::to_string(rc));
                ok = false;
            }
            std::ifstream is(dir / "validation.json", std::ios::binary);
            std::ostringstream buf;
            buf << is.rdbuf();
            outputs.push_back(buf.str());
        }
        const bool identical = !outputs[0].empty() && outputs[0] == outputs[1] &&
                               outputs[1] == outputs[2];
        note(name + ": " + std::to_string(outputs[0].size()) +
             " report bytes, identical across reruns and threads {1, 1, 4}: " +
             (identical ? "yes" : "no"));
        ok = ok && identical;
    }
    fs::remove_all(base, ec);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <configs-dir> [cli-binary]\n";
        return 2;
    }
    const fs::path configs = argv[1];
    const std::string cli = argc > 2 ? argv[2] : "";

    const auto load_or_die = [](const fs::path& path) -> RunConfig {
        try {
            return load_config(path.string());
        } catch (const std::exception& e) {
            std::cerr << "cannot load " << path << ": " << e.what() << "\n";
            std::exit(2);
        }
    };
    const RunConfig cfg1 = load_or_die(configs / "figure1.json");
    const RunConfig cfg2 = load_or_die(configs / "figure2.json");
    const MscogarchSpec& cog = std::get<MscogarchSpec>(cfg1.model);
    const MsbnsSpec& bns = std::get<MsbnsSpec>(cfg2.model);

    run_gate(1, "single-state reduction identities", criterion_reductions);
    run_gate(2, "Psi(0) = Q^T and sa(Q^T) = 0 on 50 random specs", criterion_matrix_exponent);
    run_gate(3, "(U, K) reconstruction matches the direct walk",
             [&] { return criterion_uk_consistency(cog); });
    run_gate(4, "transient mean vs 10^4-path ensembles", [&] {
        const bool a = criterion_mean(cfg1.model, "figure1", 404041);
        const bool b = criterion_mean(cfg2.model, "figure2", 404042);
        return a && b;
    });
    run_gate(5, "stationary moments vs ergodic averages, with source-integral arbitration",
             [&] { return criterion_stationary_moments(cfg1.model, cfg2.model); });
    run_gate(6, "log-return moment and covariance structure",
             [&] { return criterion_returns(cog, bns); });
    run_gate(7, "compensated eta martingale", [&] { return criterion_martingale(bns); });
    run_gate(8, "autocovariance decay rate", [&] {
        const bool a = criterion_decay(cfg1.model, "figure1", 80, 30, 80, 808081);
        const bool b = criterion_decay(cfg2.model, "figure2", 130, 40, 130, 808082);
        return a && b;
    });
    run_gate(9, "validate subcommand byte-determinism",
             [&] { return criterion_cli(cli, configs); });

    if (g_failures == 0) {
        std::cout << "acceptance: all 9 criteria passed\n";
        return 0;
    }
    std::cout << "acceptance: " << g_failures << " criterion(s) failed\n";
    return 1;
}
