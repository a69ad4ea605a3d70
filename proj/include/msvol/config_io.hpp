#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "msvol/montecarlo.hpp"

namespace msvol {

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string model_name;  // "mscogarch" | "msbns"
    ModelSpec model;
    ValidationBudgets budgets;
    Json echo;  // parsed config, copied into every report
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const Json& root);

// Law / driver descriptors; `where` prefixes error messages with the JSON
// pointer of the offending node.
JumpLaw parse_jump_law(const Json& node, const std::string& where);
LevyDriverSpec parse_driver(const Json& node, const std::string& where);

void write_paths_csv(std::ostream& os, const PathBundle& bundle);

Json events_json(const PathBundle& bundle);
Json report_json(const ValidationReport& report, const Json& config_echo);
Json moments_json(const ModelSpec& model, int k_max);
Json stationarity_json(const ModelSpec& model, int mc_budget, std::uint64_t seed);

// Pretty print with a trailing newline; byte-stable for identical input.
std::string dump_json(const Json& j);

}  // namespace msvol
