#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "vt/distribution.hpp"
#include "vt/equilibrium.hpp"
#include "vt/groupwide.hpp"
#include "vt/simulator.hpp"
#include "vt/welfare.hpp"

namespace vt {

const char* mode_name(TradeMode mode);
TradeMode mode_from_name(const std::string& name);

// Distribution spec files: {"family": ..., "params": {...}}. Relative csv
// paths inside kde params resolve against base_dir.
JointUtilityDistribution distribution_from_json(const nlohmann::json& spec,
                                                const std::string& base_dir);
JointUtilityDistribution load_distribution_spec(const std::string& path);

nlohmann::json kde_spec_json(const std::string& csv_path, SurveyScale scale, double bandwidth);

// Solution files carry the angles both as radians and slopes plus a mass
// table snapshot (with the effective probabilities in groupwide mode).
nlohmann::json solution_to_json(const EquilibriumSolution& sol, const RegionMassTable& table);

struct LoadedSolution {
    StrategyProfile theta;
    int n = 11;
    TradeMode mode = TradeMode::Myopic;
};
LoadedSolution solution_from_json(const nlohmann::json& j);

nlohmann::json welfare_report_to_json(const WelfareReport& rep, const WelfareBoundarySet& set);
nlohmann::json simulation_report_to_json(const SimulationReport& rep);
nlohmann::json validation_report_to_json(const ValidationReport& rep);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

// Grid CSVs: metadata comment lines, then "x,y,value" rows over cell
// centers, row-major from y=-1 upward.
void export_density_grid(const JointUtilityDistribution& dist, int resolution,
                         const std::string& path);
// value = bitmask, bit i-1 set when the point lies in wedge R_i
void export_region_mask_grid(const StrategyProfile& theta, int resolution,
                             const std::string& path);
// value bits: 1 player-1 offer, 2 player-2 offer, 4 group-beneficial for the
// point's player-1 trade type, 8 beneficial for its player-2 type
void export_welfare_mask_grid(const StrategyProfile& theta, const WelfareBoundarySet& set,
                              int resolution, const std::string& path);

}  // namespace vt
