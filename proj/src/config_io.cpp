#include "msvol/config_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace msvol {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config error at " + where + ": " + what);
}

const Json& require(const Json& node, const std::string& key, const std::string& where) {
    if (!node.is_object() || !node.contains(key)) fail(where + "/" + key, "missing field");
    return node.at(key);
}

double get_number(const Json& node, const std::string& where) {
    if (!node.is_number()) fail(where, "expected a number");
    return node.get<double>();
}

double opt_number(const Json& node, const std::string& key, const std::string& where,
                  double fallback) {
    if (!node.is_object() || !node.contains(key)) return fallback;
    return get_number(node.at(key), where + "/" + key);
}

int opt_int(const Json& node, const std::string& key, const std::string& where, int fallback) {
    if (!node.is_object() || !node.contains(key)) return fallback;
    const Json& v = node.at(key);
    if (!v.is_number_integer()) fail(where + "/" + key, "expected an integer");
    return v.get<int>();
}

Vector get_vector(const Json& node, const std::string& where) {
    if (!node.is_array()) fail(where, "expected an array of numbers");
    Vector out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i)
        out.push_back(get_number(node.at(i), where + "/" + std::to_string(i)));
    return out;
}

Matrix get_matrix(const Json& node, const std::string& where) {
    if (!node.is_array() || node.empty()) fail(where, "expected an array of rows");
    const std::size_t n = node.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Json& row = node.at(i);
        if (!row.is_array() || row.size() != n)
            fail(where + "/" + std::to_string(i), "expected a square matrix row");
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = get_number(row.at(j), where + "/" + std::to_string(i) + "/" +
                                                std::to_string(j));
    }
    return m;
}

SwitchJumpTable parse_switch_jumps(const Json& node, int n, const std::string& where) {
    SwitchJumpTable table(n);
    if (node.is_null()) return table;
    if (!node.is_object()) fail(where, "expected an object keyed by \"i->j\"");
    for (const auto& [key, value] : node.items()) {
        const std::string kwhere = where + "/" + key;
        const auto arrow = key.find("->");
        if (arrow == std::string::npos) fail(kwhere, "key must look like \"1->2\"");
        int from = 0, to = 0;
        try {
            from = std::stoi(key.substr(0, arrow));
            to = std::stoi(key.substr(arrow + 2));
        } catch (const std::exception&) {
            fail(kwhere, "key must look like \"1->2\"");
        }
        if (from < 1 || from > n || to < 1 || to > n || from == to)
            fail(kwhere, "states must be distinct and within 1.." + std::to_string(n));
        SwitchJumpLaw law;
        if (value.contains("xi")) law.xi = parse_jump_law(value.at("xi"), kwhere + "/xi");
        if (value.contains("eta")) law.eta = parse_jump_law(value.at("eta"), kwhere + "/eta");
        table.set(from - 1, to - 1, law);
    }
    return table;
}

InitialLaw parse_v0(const Json& node, const std::string& where) {
    if (node.is_string()) {
        if (node.get<std::string>() != "stationary")
            fail(where, "expected a number or \"stationary\"");
        return InitialLaw::stationary();
    }
    return InitialLaw::point(get_number(node, where));
}

int parse_initial_state(const Json& node, int n, const std::string& where) {
    const int j = opt_int(node, "initial_state", where, 0);
    if (j == 0) return -1;  // absent: draw J_0 from the stationary law
    if (j < 1 || j > n) fail(where + "/initial_state", "state out of range");
    return j - 1;
}

ModelSpec parse_mscogarch(const Json& node, const std::string& where) {
    const Vector beta = get_vector(require(node, "beta", where), where + "/beta");
    const int n = static_cast<int>(beta.size());
    MscogarchSpec spec{
        beta,
        get_vector(require(node, "lambda", where), where + "/lambda"),
        get_vector(require(node, "delta", where), where + "/delta"),
        parse_driver(require(node, "driver", where), where + "/driver"),
        GeneratorMatrix(get_matrix(require(node, "Q", where), where + "/Q")),
        parse_switch_jumps(node.contains("switch_jumps") ? node.at("switch_jumps") : Json(),
                           n, where + "/switch_jumps"),
        parse_v0(require(node, "v0", where), where + "/v0"),
        parse_initial_state(node, n, where),
    };
    spec.validate();
    return spec;
}

ModelSpec parse_msbns(const Json& node, const std::string& where) {
    const Vector lambda = get_vector(require(node, "lambda", where), where + "/lambda");
    const int n = static_cast<int>(lambda.size());
    const Json& subs = require(node, "subordinators", where);
    if (!subs.is_array() || static_cast<int>(subs.size()) != n)
        fail(where + "/subordinators", "expected one driver per state");
    std::vector<LevyDriverSpec> drivers;
    drivers.reserve(n);
    for (int j = 0; j < n; ++j)
        drivers.push_back(
            parse_driver(subs.at(j), where + "/subordinators/" + std::to_string(j)));
    MsbnsSpec spec{
        lambda,
        get_vector(require(node, "mu", where), where + "/mu"),
        get_vector(require(node, "beta", where), where + "/beta"),
        get_vector(require(node, "rho", where), where + "/rho"),
        std::move(drivers),
        GeneratorMatrix(get_matrix(require(node, "Q", where), where + "/Q")),
        parse_switch_jumps(node.contains("switch_jumps") ? node.at("switch_jumps") : Json(),
                           n, where + "/switch_jumps"),
        parse_v0(require(node, "v0", where), where + "/v0"),
        parse_initial_state(node, n, where),
    };
    spec.validate();
    return spec;
}

ValidationBudgets parse_budgets(const Json& node, const std::string& where) {
    ValidationBudgets b;
    if (node.is_null()) return b;
    if (!node.is_object()) fail(where, "expected an object");
    b.mean_paths = opt_int(node, "mean_paths", where, b.mean_paths);
    b.mean_horizon = opt_number(node, "mean_horizon", where, b.mean_horizon);
    b.mean_grid_dt = opt_number(node, "mean_grid_dt", where, b.mean_grid_dt);
    b.moment_paths = opt_int(node, "moment_paths", where, b.moment_paths);
    b.moment_horizon = opt_number(node, "moment_horizon", where, b.moment_horizon);
    b.return_paths = opt_int(node, "return_paths", where, b.return_paths);
    b.return_r = opt_number(node, "return_r", where, b.return_r);
    b.return_h = opt_number(node, "return_h", where, b.return_h);
    b.martingale_paths = opt_int(node, "martingale_paths", where, b.martingale_paths);
    b.martingale_horizon = opt_number(node, "martingale_horizon", where, b.martingale_horizon);
    return b;
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (int i = 0; i < static_cast<int>(m.rows()); ++i) {
        Json row = Json::array();
        for (int j = 0; j < static_cast<int>(m.cols()); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

Json conditions_json(const ConditionReport& c) {
    return {{"k", c.k},
            {"exponent_dominated", c.exponent_dominated},
            {"contraction", c.contraction},
            {"contraction_max", c.contraction_max},
            {"spectral_abscissa", c.spectral_abscissa},
            {"spectral_negative", c.spectral_negative},
            {"jump_moments_finite", c.jump_moments_finite},
            {"failures", c.failures}};
}

}  // namespace

JumpLaw parse_jump_law(const Json& node, const std::string& where) {
    if (!node.is_object() || !node.contains("type")) fail(where, "expected {\"type\": ...}");
    const std::string type = node.at("type").get<std::string>();
    if (type == "zero") return JumpLaw::zero();
    if (type == "point") return JumpLaw::point(get_number(require(node, "value", where), where + "/value"));
    if (type == "exponential")
        return JumpLaw::exponential(get_number(require(node, "rate", where), where + "/rate"));
    if (type == "normal")
        return JumpLaw::normal(get_number(require(node, "mean", where), where + "/mean"),
                               get_number(require(node, "sd", where), where + "/sd"));
    fail(where + "/type", "unknown law \"" + type + "\"");
}

LevyDriverSpec parse_driver(const Json& node, const std::string& where) {
    if (!node.is_object()) fail(where, "expected a driver object");
    LevyDriverSpec spec;
    spec.drift = opt_number(node, "drift", where, 0.0);
    spec.brownian_sd = opt_number(node, "brownian_sd", where, 0.0);
    spec.cp_intensity = opt_number(node, "cp_intensity", where, 0.0);
    if (node.contains("jump")) spec.jump_law = parse_jump_law(node.at("jump"), where + "/jump");
    spec.validate();
    return spec;
}

RunConfig parse_config(const Json& root) {
    const std::string name = require(root, "model", "").get<std::string>();
    ModelSpec model = [&]() -> ModelSpec {
        if (name == "mscogarch") return parse_mscogarch(require(root, "mscogarch", ""), "/mscogarch");
        if (name == "msbns") return parse_msbns(require(root, "msbns", ""), "/msbns");
        fail("/model", "expected \"mscogarch\" or \"msbns\"");
    }();
    return RunConfig{name, std::move(model),
                     parse_budgets(root.contains("validation") ? root.at("validation") : Json(),
                                   "/validation"),
                     root};
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    Json root;
    try {
        root = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("cannot parse " + path + ": " + e.what());
    }
    return parse_config(root);
}

void write_paths_csv(std::ostream& os, const PathBundle& bundle) {
    os << "t,J,V,G\n" << std::setprecision(17);
    for (std::size_t i = 0; i < bundle.grid.size(); ++i)
        os << bundle.grid[i] << ',' << bundle.j[i] + 1 << ',' << bundle.v[i] << ','
           << bundle.g[i] << '\n';
}

Json events_json(const PathBundle& bundle) {
    Json events = Json::array();
    for (const auto& ev : bundle.events)
        events.push_back({{"time", ev.time},
                          {"kind", ev.kind == MapEventKind::Driver ? "driver" : "switch"},
                          {"from", ev.from + 1},
                          {"to", ev.to + 1},
                          {"y", ev.y},
                          {"dxi", ev.dxi},
                          {"deta", ev.deta},
                          {"v_before", ev.v_before},
                          {"dv", ev.dv},
                          {"dg", ev.dg}});
    return events;
}

Json report_json(const ValidationReport& report, const Json& config_echo) {
    Json rows = Json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"quantity", r.quantity},
                        {"analytic", r.analytic},
                        {"estimate", r.estimate},
                        {"std_error", r.std_error},
                        {"z", r.z},
                        {"deterministic", r.deterministic},
                        {"pass", r.pass}});
    return {{"seed", report.seed},
            {"burn_in", report.burn_in},
            {"all_pass", report.all_pass()},
            {"notes", report.notes},
            {"rows", rows},
            {"config", config_echo}};
}

Json moments_json(const ModelSpec& model, int k_max) {
    Json out;
    out["model"] = std::holds_alternative<MscogarchSpec>(model) ? "mscogarch" : "msbns";
    out["psi"] = Json::object();
    for (int k = 1; k <= k_max; ++k) {
        const Matrix psi = std::visit(
            [&](const auto& spec) { return spec.psi_matrix(-static_cast<double>(k)); }, model);
        out["psi"]["-" + std::to_string(k)] = matrix_json(psi);
    }

    out["stationary_moments"] = Json::array();
    std::vector<Vector> joints;
    for (int k = 1; k <= k_max; ++k) {
        Json entry{{"k", k}};
        try {
            const StationaryMoment sm = std::visit(
                [&](const auto& spec) { return stationary_moment(spec, k); }, model);
            entry["value"] = sm.value;
            entry["joint"] = sm.joint;
            entry["conditions"] = conditions_json(sm.conditions);
            joints.push_back(sm.joint);
        } catch (const std::exception& e) {
            entry["error"] = e.what();
        }
        out["stationary_moments"].push_back(entry);
    }

    // transient mean from every start, normalized to E[V_0] = 1
    Json mean{{"e_v0", 1.0}, {"t", {1.0, 5.0, 20.0}}, {"by_start", Json::array()}};
    const int n = std::visit([](const auto& spec) { return spec.n_states(); }, model);
    for (int j0 = 0; j0 < n; ++j0) {
        Json row = Json::array();
        for (const double t : {1.0, 5.0, 20.0}) {
            AutocovInputs in;
            in.e_v0 = 1.0;
            row.push_back(std::visit(
                [&](const auto& spec) { return mean_and_autocov(spec, j0, t, t, in).mean; },
                model));
        }
        mean["by_start"].push_back(row);
    }
    out["mean"] = mean;

    // stationary autocovariance from the joint first and second moments
    if (joints.size() >= 2) {
        const Vector& m1 = joints[0];
        const Vector& m2 = joints[1];
        const Vector pi = std::visit([](const auto& spec) { return spec.stationary_regimes(); },
                                     model);
        const double ev = sum(m1);
        Vector c1(n), c2(n);
        for (int i = 0; i < n; ++i) {
            c1[i] = m2[i] - m1[i] * ev;
            c2[i] = m1[i] - pi[i] * ev;
        }
        Json lags = Json::array(), values = Json::array();
        for (const double lag : {0.0, 5.0, 10.0, 20.0, 40.0, 80.0}) {
            AutocovInputs in;
            in.e_v0 = ev;
            in.cov_ev_v = c1;
            in.cov_e_v = c2;
            const double cov = std::visit(
                [&](const auto& spec) { return mean_and_autocov(spec, 0, lag, 0.0, in).cov; },
                model);
            lags.push_back(lag);
            values.push_back(cov);
        }
        out["stationary_autocov"] = {{"lag", lags}, {"value", values}};
    }
    return out;
}

Json stationarity_json(const ModelSpec& model, int mc_budget, std::uint64_t seed) {
    RandomStream rng(seed);
    if (const auto* cog = std::get_if<MscogarchSpec>(&model)) {
        const StationarityReport rep = stationarity_check(*cog, mc_budget, rng);
        return {{"model", "mscogarch"},
                {"kappa_xi", rep.kappa_xi},
                {"kappa_positive", rep.kappa_positive},
                {"switch_log_moment_finite", rep.switch_log_moment_finite},
                {"cycle_log_moment", rep.cycle_log_moment},
                {"stationary", rep.stationary}};
    }
    const auto& bns = std::get<MsbnsSpec>(model);
    const DegenerateReport deg = degenerate_check(bns);
    if (deg.degenerate)
        return {{"model", "msbns"}, {"degenerate", true}, {"c", deg.c}};
    const MsbnsStationarityReport rep = stationarity_check(bns, mc_budget, rng);
    return {{"model", "msbns"},
            {"degenerate", false},
            {"kappa_xi", rep.kappa_xi},
            {"kappa_positive", rep.kappa_positive},
            {"driver_log_moment", rep.driver_log_moment},
            {"driver_log_moment_finite", rep.driver_log_moment_finite},
            {"cycle_log_moment", rep.cycle_log_moment},
            {"switch_log_moment_finite", rep.switch_log_moment_finite},
            {"stationary", rep.stationary}};
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace msvol
