#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "msvol/config_io.hpp"

namespace {

using namespace msvol;

std::string pad3(int p) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", p);
    return buf;
}

// stdout when no --out, otherwise a file under the output directory
void emit(const Json& j, const std::string& out_dir, const std::string& name) {
    const std::string text = dump_json(j);
    if (out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(out_dir);
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream os(path);
    os << text;
    std::cout << "wrote " << path.string() << "\n";
}

int run_simulate(const RunConfig& cfg, std::uint64_t seed, int n_paths, double horizon,
                 double grid_dt, const std::string& out_dir) {
    const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    for (int p = 0; p < n_paths; ++p) {
        RandomStream rng = RandomStream::substream(seed, static_cast<std::uint64_t>(p));
        const PathBundle bundle = simulate_model(cfg.model, horizon, grid_dt, rng);
        const std::string base = n_paths == 1 ? "path" : "path_" + pad3(p);
        std::ofstream csv(dir / (base + ".csv"));
        write_paths_csv(csv, bundle);
        std::ofstream ev(dir / (base + "_events.json"));
        ev << dump_json(events_json(bundle));
        std::cout << "wrote " << (dir / (base + ".csv")).string() << " ("
                  << bundle.events.size() << " events)\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regime-switching volatility models: simulation and analytics"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed_flag = 0;
    int paths_flag = 0, threads = 1, k_max_flag = 0, mc_budget = 20000;
    double horizon_flag = 0.0, grid_dt_flag = 0.0;

    // existence is checked by load_config so every config error exits 2
    app.add_option("--config", config_path, "model config JSON");
    app.add_option("--seed", seed_flag, "master seed");
    app.add_option("--paths", paths_flag, "number of paths / headline MC budget");
    app.add_option("--horizon", horizon_flag, "simulation horizon");
    app.add_option("--grid-dt", grid_dt_flag, "sample grid spacing");
    app.add_option("--out", out_dir, "output directory (default: stdout for reports)");
    app.add_option("--threads", threads, "worker threads for ensembles");
    app.add_option("--k-max", k_max_flag, "highest stationary moment");
    app.add_option("--budget", mc_budget, "MC cycles for stationarity diagnostics");

    auto* sim = app.add_subcommand("simulate", "write per-path CSV trajectories + event logs");
    auto* mom = app.add_subcommand("moments", "matrix exponents, moments, mean/autocov tables");
    auto* stat = app.add_subcommand("stationarity", "stationarity diagnostics");
    auto* val = app.add_subcommand("validate", "analytic-vs-MC validation report");
    for (auto* s : {sim, mom, stat, val}) s->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (config_path.empty()) throw std::runtime_error("--config is required");
        const RunConfig cfg = load_config(config_path);

        // flags override config fields, config fields override defaults
        const std::uint64_t seed =
            app.count("--seed") ? seed_flag : cfg.echo.value("seed", std::uint64_t{12345});
        const double horizon =
            app.count("--horizon") ? horizon_flag : cfg.echo.value("horizon", 100.0);
        const double grid_dt =
            app.count("--grid-dt") ? grid_dt_flag : cfg.echo.value("grid_dt", 0.1);
        const int n_paths = app.count("--paths") ? paths_flag : cfg.echo.value("n_paths", 1);
        const int k_max = app.count("--k-max") ? k_max_flag : cfg.echo.value("k_max", 2);

        if (app.got_subcommand(sim))
            return run_simulate(cfg, seed, n_paths, horizon, grid_dt, out_dir);

        if (app.got_subcommand(mom)) {
            Json j = moments_json(cfg.model, k_max);
            j["config"] = cfg.echo;
            emit(j, out_dir, "moments.json");
            return 0;
        }

        if (app.got_subcommand(stat)) {
            Json j = stationarity_json(cfg.model, mc_budget, seed);
            j["config"] = cfg.echo;
            emit(j, out_dir, "stationarity.json");
            return 0;
        }

        // validate
        ValidationBudgets budgets = cfg.budgets;
        budgets.return_r = cfg.echo.value("r", budgets.return_r);
        budgets.return_h = cfg.echo.value("h", budgets.return_h);
        if (app.count("--paths")) {
            budgets.mean_paths = paths_flag;
            budgets.return_paths = paths_flag;
            budgets.martingale_paths = paths_flag;
        }
        const ValidationReport report = run_validation(cfg.model, budgets, seed, threads);
        emit(report_json(report, cfg.echo), out_dir, "validation.json");
        return report.all_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
