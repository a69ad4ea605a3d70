#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>

#include "msvol/config_io.hpp"

namespace py = pybind11;
using namespace msvol;

namespace {

RunConfig config_from_string(const std::string& text) {
    return parse_config(Json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_msvol, m) {
    m.doc() = "Regime-switching stochastic volatility models: exact simulation and "
              "closed-form moments";

    m.def(
        "simulate",
        [](const std::string& config, double horizon, double grid_dt, std::uint64_t seed) {
            const RunConfig cfg = config_from_string(config);
            RandomStream rng(seed);
            const PathBundle b = simulate_model(cfg.model, horizon, grid_dt, rng);
            py::dict out;
            out["t"] = b.grid;
            out["v"] = b.v;
            out["g"] = b.g;
            out["j"] = b.j;
            out["n_events"] = b.events.size();
            out["integral_v"] = b.integral_v;
            out["integral_v_sq"] = b.integral_v_sq;
            return out;
        },
        py::arg("config"), py::arg("horizon"), py::arg("grid_dt"), py::arg("seed"),
        "Simulate one path of the configured model; returns grid arrays.");

    m.def(
        "stationary_moment",
        [](const std::string& config, int k) {
            const RunConfig cfg = config_from_string(config);
            return std::visit([k](const auto& spec) { return stationary_moment(spec, k).value; },
                              cfg.model);
        },
        py::arg("config"), py::arg("k"), "Stationary k-th moment of the squared volatility.");

    m.def(
        "kappa_xi",
        [](const std::string& config) {
            const RunConfig cfg = config_from_string(config);
            if (const auto* cog = std::get_if<MscogarchSpec>(&cfg.model)) return kappa_xi(*cog);
            RandomStream rng(0u);
            return stationarity_check(std::get<MsbnsSpec>(cfg.model), 0, rng).kappa_xi;
        },
        py::arg("config"), "Mean drift rate of the exponent process.");

    m.def(
        "moments_report",
        [](const std::string& config, int k_max) {
            const RunConfig cfg = config_from_string(config);
            return dump_json(moments_json(cfg.model, k_max));
        },
        py::arg("config"), py::arg("k_max") = 2, "JSON moment report, as `msvol moments`.");

    m.def(
        "stationarity_report",
        [](const std::string& config, int mc_budget, std::uint64_t seed) {
            const RunConfig cfg = config_from_string(config);
            return dump_json(stationarity_json(cfg.model, mc_budget, seed));
        },
        py::arg("config"), py::arg("mc_budget") = 2000, py::arg("seed") = 12345,
        "JSON stationarity report, as `msvol stationarity`.");

    m.def(
        "validate",
        [](const std::string& config, std::uint64_t seed, int n_threads) {
            const RunConfig cfg = config_from_string(config);
            const ValidationReport rep = run_validation(cfg.model, cfg.budgets, seed, n_threads);
            return py::make_tuple(rep.all_pass(), dump_json(report_json(rep, cfg.echo)));
        },
        py::arg("config"), py::arg("seed") = 12345, py::arg("n_threads") = 1,
        "Run the analytic-vs-MC validation suite; returns (all_pass, report_json).");
}
