#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gritquit/boundary.hpp"
#include "gritquit/simulate.hpp"
#include "gritquit/sweeps.hpp"

namespace gq {

/// Shortest-17-significant-digit decimal, '.' separator, locale-independent.
std::string format_double(double x);

struct RunConfig {
    ModelParams params;
    ProfitSpec profit;
};

/// Built-in parameter set used when no config file is given.
RunConfig benchmark_config();

nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json profit_to_json(const ProfitSpec& profit);
ProfitSpec profit_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config_file(const std::string& path);

nlohmann::json boundary_to_json(const Boundary& b);
Boundary boundary_from_json(const nlohmann::json& j);

void write_boundary_csv(const Boundary& b, std::ostream& os);
void write_value_csv(const Boundary& b, int m_res, int z_res, std::ostream& os);
void write_paths_csv(const std::vector<PathRow>& rows, std::ostream& os);
nlohmann::json stats_to_json(const SimStats& stats, const SimConfig& cfg);
nlohmann::json sweep_to_json(const SweepReport& rep);
void write_sweep_csv(const SweepReport& rep, std::ostream& os);

}  // namespace gq
