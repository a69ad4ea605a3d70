#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "msvol/mscogarch.hpp"

using namespace msvol;

namespace {

Matrix fig_q_matrix() {
    Matrix q(3, 3);
    q(0, 0) = -0.10; q(0, 1) = 0.06; q(0, 2) = 0.04;
    q(1, 0) = 0.05;  q(1, 1) = -0.11; q(1, 2) = 0.06;
    q(2, 0) = 0.04;  q(2, 1) = 0.05;  q(2, 2) = -0.09;
    return q;
}

// the 3-state scenario shipped as configs/figure1.json
MscogarchSpec fig1_spec() {
    MscogarchSpec spec{
        {0.7, 2.0, 1.0},
        {0.042, 0.047, 0.044},
        {0.9, 0.93, 0.92},
        {},
        GeneratorMatrix(fig_q_matrix()),
        SwitchJumpTable(3),
        InitialLaw::stationary(),
        -1};
    spec.driver.cp_intensity = 1.0;
    spec.driver.jump_law = JumpLaw::normal(0.0, 1.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) spec.switch_jumps.set(i, j, {JumpLaw::zero(), JumpLaw::exponential(1.0)});
    return spec;
}

MscogarchSpec single_state_spec() {
    MscogarchSpec spec{{0.7}, {0.042}, {0.9}, {}, GeneratorMatrix(Matrix(1, 1, 0.0)),
                       SwitchJumpTable(1), InitialLaw::point(5.0), 0};
    spec.driver.cp_intensity = 1.0;
    spec.driver.jump_law = JumpLaw::normal(0.0, 1.0);
    return spec;
}

}  // namespace

TEST_CASE("mscogarch: spec validation") {
    MscogarchSpec spec = fig1_spec();
    spec.validate();

    MscogarchSpec bad = fig1_spec();
    bad.beta[1] = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = fig1_spec();
    bad.delta[0] = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = fig1_spec();
    bad.lambda[2] = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = fig1_spec();
    bad.driver.cp_intensity = 0.0;  // the feedback needs driver jumps
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = fig1_spec();
    bad.switch_jumps.set(0, 1, {JumpLaw::zero(), JumpLaw::normal(0.0, 1.0)});
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // eta must be >= 0

    bad = fig1_spec();
    bad.initial_state = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = fig1_spec();
    bad.v0 = InitialLaw::point(-1.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("mscogarch: laplace exponents and kappa against frozen values") {
    MscogarchSpec spec = fig1_spec();

    Vector psi1 = spec.psi_diag(-1.0);
    CHECK(psi1[0] == doctest::Approx(-0.05869384899115961).epsilon(1e-12));
    CHECK(psi1[1] == doctest::Approx(-0.022033058426233224).epsilon(1e-12));
    CHECK(psi1[2] == doctest::Approx(-0.03555552198252928).epsilon(1e-12));

    Vector psi0 = spec.psi_diag(0.0);
    for (double p : psi0) CHECK(p == 0.0);

    CHECK(kappa_xi(spec) == doctest::Approx(0.041281893567582856).epsilon(1e-10));
    CHECK(kappa_xi(single_state_spec()) ==
          doctest::Approx(0.06154703682153115).epsilon(1e-10));
}

TEST_CASE("mscogarch: psi matrix at zero reproduces the generator transpose") {
    MscogarchSpec spec = fig1_spec();
    Matrix psi = spec.psi_matrix(0.0);
    Matrix qt = spec.q.transposed();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(psi(i, j) == qt(i, j));
}

TEST_CASE("mscogarch: stationary conditions and burn-in") {
    MscogarchSpec spec = fig1_spec();
    ConditionReport c1 = stationary_conditions(spec, 1);
    CHECK(c1.all_ok());
    CHECK(c1.spectral_abscissa == doctest::Approx(-0.036885228271697434).epsilon(1e-9));
    CHECK(c1.contraction_max < 1.0);

    ConditionReport c2 = stationary_conditions(spec, 2);
    CHECK(c2.all_ok());
    // the report keeps the largest abscissa across levels 1..k (the binding
    // margin); level 2 alone sits lower
    CHECK(c2.spectral_abscissa == doctest::Approx(-0.036885228271697434).epsilon(1e-9));
    CHECK(spectral_abscissa(spec.psi_matrix(-2.0)) ==
          doctest::Approx(-0.06419824082260295).epsilon(1e-9));

    CHECK(spec.burn_in_time() == doctest::Approx(542.2224813868469).epsilon(1e-9));

    // betas do not enter the conditions; a huge feedback lambda breaks them
    MscogarchSpec unstable = fig1_spec();
    unstable.lambda = {5.0, 5.0, 5.0};
    unstable.delta = {0.5, 0.5, 0.5};
    ConditionReport bad = stationary_conditions(unstable, 1);
    CHECK_FALSE(bad.all_ok());
    CHECK(bad.summary().find("psi") != std::string::npos);
    CHECK_THROWS_AS(stationary_moment(unstable, 1), std::runtime_error);
}

TEST_CASE("mscogarch: stationary moments against frozen values") {
    MscogarchSpec spec = fig1_spec();

    StationaryMoment m1 = stationary_moment(spec, 1);
    CHECK(m1.value == doctest::Approx(37.04203865524031).epsilon(1e-10));
    CHECK(sum(m1.joint) == doctest::Approx(m1.value).epsilon(1e-13));
    REQUIRE(m1.joint.size() == 3);
    CHECK(m1.joint[0] == doctest::Approx(9.43465483).epsilon(1e-7));
    CHECK(m1.joint[1] == doctest::Approx(14.53927037).epsilon(1e-7));
    CHECK(m1.joint[2] == doctest::Approx(13.06811345).epsilon(1e-7));
    CHECK(m1.conditions.all_ok());

    StationaryMoment m2 = stationary_moment(spec, 2);
    CHECK(m2.value == doctest::Approx(1701.6754571991146).epsilon(1e-10));
}

TEST_CASE("mscogarch: product form of the moments") {
    // single state: the scalar product form equals the recursion at every order
    MscogarchSpec one = single_state_spec();
    for (int k = 1; k <= 4; ++k) {
        double rec = stationary_moment(one, k).value;
        double prod = stationary_moment_product(one, k);
        CHECK(prod == doctest::Approx(rec).epsilon(1e-10));
    }
    CHECK(stationary_moment(one, 1).value ==
          doctest::Approx(11.926292312256315).epsilon(1e-10));

    // several states, eta jumps off: the recursion collapses to the ordered
    // product of resolvents, which the scalar form misorders beyond k = 1
    MscogarchSpec plain = fig1_spec();
    plain.switch_jumps = SwitchJumpTable(3);
    const Vector pi = plain.stationary_regimes();

    Vector m_prev = pi;
    double factorial = 1.0;
    for (int k = 1; k <= 4; ++k) {
        factorial *= k;
        Vector rhs(3);
        for (int j = 0; j < 3; ++j) rhs[j] = -k * plain.beta[j] * m_prev[j];
        m_prev = solve(plain.psi_matrix(-double(k)), rhs);
        CHECK(stationary_moment(plain, k).value ==
              doctest::Approx(sum(m_prev)).epsilon(1e-10));
    }
    CHECK(stationary_moment(plain, 1).value == doctest::Approx(34.350156).epsilon(1e-6));
    CHECK(stationary_moment(plain, 2).value == doctest::Approx(1474.392946).epsilon(1e-6));

    CHECK(stationary_moment_product(plain, 1) ==
          doctest::Approx(stationary_moment(plain, 1).value).epsilon(1e-10));
    CHECK(stationary_moment_product(plain, 2) == doctest::Approx(1364.591275).epsilon(1e-6));
    CHECK(std::abs(stationary_moment_product(plain, 2) -
                   stationary_moment(plain, 2).value) > 1.0);

    CHECK_THROWS_AS(stationary_moment_product(fig1_spec(), 2), std::invalid_argument);
}

TEST_CASE("mscogarch: conditional mean against the scalar closed form") {
    MscogarchSpec spec = single_state_spec();
    const double psi = spec.psi_diag(-1.0)[0];
    const double beta = spec.beta[0];
    for (double t : {0.0, 1.0, 4.0, 15.0}) {
        AutocovInputs in;
        in.e_v0 = 5.0;
        AutocovResult r = mean_and_autocov(spec, 0, t, t, in);
        const double expected = std::exp(psi * t) * 5.0 + beta * std::expm1(psi * t) / psi;
        CHECK(r.mean == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("mscogarch: autocovariance propagation") {
    MscogarchSpec spec = single_state_spec();
    const double psi = spec.psi_diag(-1.0)[0];
    const double beta = spec.beta[0];

    AutocovInputs in;
    in.e_v0 = 5.0;
    in.cov_ev_v = {2.0};
    in.cov_e_v = {0.3};

    const double s = 3.0, t = 7.5, lag = t - s;
    AutocovResult r = mean_and_autocov(spec, 0, t, s, in);
    const double expected =
        std::exp(psi * lag) * 2.0 + beta * std::expm1(psi * lag) / psi * 0.3;
    CHECK(r.cov == doctest::Approx(expected).epsilon(1e-12));
    REQUIRE(r.cov_vector.size() == 1);
    CHECK(r.cov_vector[0] == doctest::Approx(0.3).epsilon(1e-12));  // e^{0 lag}

    // lag zero returns the supplied covariance unchanged
    AutocovResult same = mean_and_autocov(spec, 0, s, s, in);
    CHECK(same.cov == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(mean_and_autocov(spec, 1, t, s, in), std::invalid_argument);
    CHECK_THROWS_AS(mean_and_autocov(spec, 0, s, t, in), std::invalid_argument);
}

TEST_CASE("mscogarch: log-return moments") {
    MscogarchSpec spec = fig1_spec();
    LogReturnMoments lr = logreturn_moments(spec, 1.0, 2.0, {});
    CHECK(lr.mean == 0.0);
    CHECK(lr.cov_disjoint == 0.0);
    // E[(G_r)^2] = E[L_1^2] r E_pi[V] for the centered pure-jump driver
    CHECK(lr.second_moment == doctest::Approx(37.04203865524031).epsilon(1e-10));
    CHECK(std::isnan(lr.cov_squared));

    LogReturnInputs inner;
    inner.g2v_e = {1.0, 1.0, 1.0};
    inner.g2_e = {0.1, 0.1, 0.1};
    LogReturnMoments full = logreturn_moments(spec, 1.0, 2.0, inner);
    CHECK(std::isfinite(full.cov_squared));
    CHECK(full.second_moment == doctest::Approx(lr.second_moment).epsilon(1e-13));

    MscogarchSpec shifted = fig1_spec();
    shifted.driver.jump_law = JumpLaw::normal(0.5, 1.0);
    CHECK_THROWS_AS(logreturn_moments(shifted, 1.0, 2.0, {}), std::invalid_argument);

    CHECK_THROWS_AS(logreturn_moments(spec, 2.0, 1.0, {}), std::invalid_argument);
}

TEST_CASE("mscogarch: simulated paths satisfy the structural invariants") {
    MscogarchSpec spec = fig1_spec();
    spec.v0 = InitialLaw::point(10.0);
    spec.initial_state = 1;

    RandomStream rng(99u);
    PathBundle b = simulate(spec, 50.0, 0.5, rng);

    REQUIRE(!b.grid.empty());
    CHECK(b.grid.front() == 0.0);
    CHECK(b.grid.back() == 50.0);
    CHECK(b.v.size() == b.grid.size());
    CHECK(b.g.size() == b.grid.size());
    CHECK(b.j.size() == b.grid.size());
    CHECK(b.v.front() == 10.0);
    CHECK(b.g.front() == 0.0);
    CHECK(b.j.front() == 1);
    for (std::size_t i = 0; i < b.v.size(); ++i) {
        CHECK(b.v[i] >= 0.0);
        CHECK(b.j[i] == b.regimes.state_at(b.grid[i]));
    }
    CHECK(b.integral_v > 0.0);
    CHECK(b.integral_v_sq > 0.0);

    double prev = 0.0;
    for (const auto& ev : b.events) {
        CHECK(ev.time >= prev);
        prev = ev.time;
        CHECK(ev.v_before >= 0.0);
        CHECK(ev.v_before + ev.dv >= 0.0);
        if (ev.kind == MapEventKind::Driver) {
            CHECK(ev.dv >= 0.0);  // squared marks only push up
            CHECK(ev.dg == doctest::Approx(std::sqrt(ev.v_before) * ev.y).epsilon(1e-12));
        } else {
            CHECK(ev.dg == 0.0);
            CHECK(ev.dv == doctest::Approx(ev.deta).epsilon(1e-12));  // xi jumps are zero here
        }
    }

    // pure-jump driver: G moves only at events
    double g_sum = 0.0;
    for (const auto& ev : b.events) g_sum += ev.dg;
    CHECK(std::abs(b.g.back() - g_sum) < 1e-9);
}

TEST_CASE("mscogarch: uk representation reconstructs the direct walk") {
    MscogarchSpec spec = fig1_spec();

    for (int p = 0; p < 5; ++p) {
        RandomStream map_rng = RandomStream::substream(404u, p);
        MapPath map =
            sample_map_path(spec.q, spec.regime_pieces(), spec.switch_jumps, 0, 30.0, map_rng);

        RandomStream walk_rng(1u);  // unused: fig1 driver is pure-jump
        PathBundle direct = simulate_on(spec, map, 20.0, 1.0, walk_rng);

        UkPath uk = uk_representation(spec, map);
        Vector recon = uk_reconstruct(uk, 20.0);

        REQUIRE(recon.size() == direct.events.size());
        for (std::size_t e = 0; e < recon.size(); ++e) {
            const double direct_after = direct.events[e].v_before + direct.events[e].dv;
            CHECK(std::abs(recon[e] - direct_after) < 1e-9);
        }

        // drifts: u decays by log(delta), k grows by beta
        CHECK(uk.u_drift[0] == doctest::Approx(std::log(0.9)).epsilon(1e-14));
        CHECK(uk.k_drift[1] == 2.0);

        // u and k accessors stay finite and monotone where they should
        CHECK(std::isfinite(uk.u_at(30.0)));
        CHECK(uk.k_at(30.0) >= 0.0);
    }
}

TEST_CASE("mscogarch: stationarity verdict") {
    MscogarchSpec spec = fig1_spec();
    RandomStream rng(7u);
    StationarityReport rep = stationarity_check(spec, 2000, rng);
    CHECK(rep.kappa_xi == doctest::Approx(0.041281893567582856).epsilon(1e-10));
    CHECK(rep.kappa_positive);
    CHECK(rep.switch_log_moment_finite);
    CHECK(rep.stationary);
    REQUIRE(rep.cycle_log_moment.size() == 3);

    MscogarchSpec lam0 = fig1_spec();
    lam0.lambda = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(stationarity_check(lam0, 100, rng), std::invalid_argument);
}
