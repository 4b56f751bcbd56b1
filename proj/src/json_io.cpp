#include "vt/json_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "vt/errors.hpp"

namespace vt {

using nlohmann::json;

const char* mode_name(TradeMode mode) {
    return mode == TradeMode::Myopic ? "myopic" : "groupwide";
}

TradeMode mode_from_name(const std::string& name) {
    if (name == "myopic") return TradeMode::Myopic;
    if (name == "groupwide") return TradeMode::Groupwide;
    throw domain_error("mode must be 'myopic' or 'groupwide', got '" + name + "'");
}

namespace {

template <class T>
T require(const json& j, const char* key) {
    if (!j.contains(key)) throw construction_error(key, "missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw construction_error(key, e.what());
    }
}

std::array<double, 8> octet(const json& j, const char* key) {
    const auto v = require<std::vector<double>>(j, key);
    if (v.size() != 8) throw construction_error(key, "expected 8 values");
    std::array<double, 8> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
}

}  // namespace

JointUtilityDistribution distribution_from_json(const json& spec, const std::string& base_dir) {
    const auto family = require<std::string>(spec, "family");
    const json params = spec.value("params", json::object());
    if (family == "uniform") return JointUtilityDistribution::uniform();
    if (family == "quadrant_constant") {
        const auto w = require<std::vector<double>>(params, "weights");
        if (w.size() != 4) throw construction_error("weights", "expected 4 quadrant weights");
        return JointUtilityDistribution::quadrant_constant({w[0], w[1], w[2], w[3]});
    }
    if (family == "product_power")
        return JointUtilityDistribution::product_power(require<int>(params, "alpha"));
    if (family == "product_tent") return JointUtilityDistribution::product_tent();
    if (family == "product_vee") return JointUtilityDistribution::product_vee();
    if (family == "kde") {
        const auto csv = require<std::string>(params, "csv");
        const auto scale_arr = require<std::vector<int>>(params, "scale");
        if (scale_arr.size() != 2) throw construction_error("scale", "expected [lo, hi]");
        const SurveyScale scale{scale_arr[0], scale_arr[1]};
        std::optional<double> bandwidth;
        if (params.contains("bandwidth")) bandwidth = params.at("bandwidth").get<double>();
        std::filesystem::path p(csv);
        if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
        const auto records = parse_survey_csv(p.string(), scale);
        return kde_from_survey(records, scale, bandwidth);
    }
    if (family == "grid") {
        const auto rows = require<std::vector<std::vector<double>>>(params, "values");
        if (rows.empty()) throw construction_error("values", "empty grid");
        const int ny = static_cast<int>(rows.size());
        const int nx = static_cast<int>(rows.front().size());
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(nx) * ny);
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != nx)
                throw construction_error("values", "ragged rows");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return JointUtilityDistribution::grid(flat, nx, ny, params.value("normalize", true));
    }
    throw construction_error("family", "unknown family '" + family + "'");
}

JointUtilityDistribution load_distribution_spec(const std::string& path) {
    return distribution_from_json(read_json_file(path),
                                  std::filesystem::path(path).parent_path().string());
}

json kde_spec_json(const std::string& csv_path, SurveyScale scale, double bandwidth) {
    return json{{"family", "kde"},
                {"params",
                 {{"csv", csv_path}, {"scale", {scale.lo, scale.hi}}, {"bandwidth", bandwidth}}}};
}

json solution_to_json(const EquilibriumSolution& sol, const RegionMassTable& table) {
    json tans = json::array();
    for (int i = 0; i < 8; ++i) {
        const double t = sol.theta_star.tan_of(i);
        tans.push_back(std::isinf(t) ? json() : json(t));
    }
    json j{
        {"kind", "equilibrium_solution"},
        {"mode", mode_name(sol.mode)},
        {"n", sol.n},
        {"theta", sol.theta_star.theta},
        {"tan_theta", tans},
        {"residual", sol.residual},
        {"iterations", sol.iterations},
        {"converged", sol.converged},
        {"defined", sol.defined},
    };
    json mt{
        {"region_mass", table.region_mass},
        {"player1_sum", table.player1_sum},
        {"player2_sum", table.player2_sum},
        {"q",
         {{"q1_plus", table.half.q1_plus},
          {"q1_minus", table.half.q1_minus},
          {"q2_plus", table.half.q2_plus},
          {"q2_minus", table.half.q2_minus}}},
        {"half_moments",
         {{"x_pos", table.half.moment_x_pos},
          {"x_neg", table.half.moment_x_neg},
          {"y_pos", table.half.moment_y_pos},
          {"y_neg", table.half.moment_y_neg}}},
        {"overlap_mass", table.overlap_mass},
        {"moment_x", table.moment_x},
        {"moment_y", table.moment_y},
    };
    const EffectiveQSet eq = effective_q_from(table.region_mass, table.half, sol.n);
    mt["effective_q"] = {{"q1_plus", eq.q1_plus},
                         {"q1_minus", eq.q1_minus},
                         {"q2_plus", eq.q2_plus},
                         {"q2_minus", eq.q2_minus}};
    j["mass_table"] = std::move(mt);
    return j;
}

LoadedSolution solution_from_json(const json& j) {
    LoadedSolution out;
    out.theta.theta = octet(j, "theta");
    out.n = require<int>(j, "n");
    out.mode = mode_from_name(require<std::string>(j, "mode"));
    return out;
}

json welfare_report_to_json(const WelfareReport& rep, const WelfareBoundarySet& set) {
    json coeff{{"a", json::array()}, {"b", json::array()}, {"c", json::array()},
               {"d", json::array()}, {"slope", json::array()}, {"offset", json::array()},
               {"defined", json::array()}};
    for (int i = 0; i < 8; ++i) {
        const WelfareBoundary& w = set.boundary[i];
        coeff["a"].push_back(w.a);
        coeff["b"].push_back(w.b());
        coeff["c"].push_back(w.c);
        coeff["d"].push_back(w.d());
        coeff["slope"].push_back(w.slope());
        // boundary offset a b / c - d of the quadrant inequalities
        coeff["offset"].push_back(w.c != 0.0 ? (w.ab / w.c - w.cd / w.c)
                                             : std::numeric_limits<double>::quiet_NaN());
        coeff["defined"].push_back(w.a_defined && w.c_defined);
    }
    return json{
        {"kind", "welfare_report"},
        {"n", rep.n},
        {"mode", mode_name(rep.mode)},
        {"beneficial_probability", rep.beneficial_probability},
        {"beneficial_mass", rep.beneficial_mass},
        {"offered_mass", rep.offered_mass},
        {"per_type_beneficial", rep.per_type_beneficial},
        {"per_type_offered", rep.per_type_offered},
        {"expected_group_value_per_offer", rep.expected_group_value_per_offer},
        {"profile_residual", rep.profile_residual},
        {"defined", rep.defined},
        {"overlap_weighting",
         "pairs offerable in both directions contribute half their mass to each direction"},
        {"coefficients", coeff},
    };
}

json simulation_report_to_json(const SimulationReport& rep) {
    auto est = [](const Estimate& e) {
        return json{{"mean", e.mean}, {"std_error", e.std_error}, {"count", e.count}};
    };
    return json{
        {"kind", "simulation_report"},
        {"n", rep.n},
        {"mode", rep.mode == SimMode::SingleTrade ? "single-trade" : "all-pairs"},
        {"seed", rep.seed},
        {"trials", rep.trials},
        {"trades_executed", rep.trades_executed},
        {"trader_value_per_trade", est(rep.trader_value_per_trade)},
        {"group_delta_per_trial", est(rep.group_delta_per_trial)},
        {"positive_realized_fraction", est(rep.positive_realized_fraction)},
        {"beneficial_expected_fraction", est(rep.beneficial_expected_fraction)},
        {"flip_rate_t1", rep.flip_rate_t1},
        {"flip_rate_t2", rep.flip_rate_t2},
    };
}

json validation_report_to_json(const ValidationReport& rep) {
    return json{
        {"kind", "validation_report"},
        {"total_mass", rep.total_mass},
        {"min_sampled_density", rep.min_sampled_density},
        {"quadrant_masses", rep.quadrant_masses},
        {"tol", rep.tol},
        {"pass", rep.pass},
    };
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw io_error("malformed json in " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write failed: " + path);
}

namespace {

struct GridWriter {
    std::ofstream out;
    GridWriter(const std::string& path, int resolution, const char* kind) : out(path) {
        if (!out) throw io_error("cannot write " + path);
        out << "# kind=" << kind << " resolution=" << resolution
            << " bounds=-1,1,-1,1 layout=row-major-cell-centers\n";
        out << "x,y,value\n";
        out.precision(12);
    }
};

template <class F>
void write_grid(const std::string& path, int resolution, const char* kind, const F& value) {
    if (resolution < 2) throw domain_error("grid resolution must be >= 2");
    GridWriter w(path, resolution, kind);
    const double h = 2.0 / resolution;
    for (int j = 0; j < resolution; ++j) {
        const double y = -1.0 + h * (j + 0.5);
        for (int i = 0; i < resolution; ++i) {
            const double x = -1.0 + h * (i + 0.5);
            w.out << x << ',' << y << ',' << value(x, y) << '\n';
        }
    }
    if (!w.out) throw io_error("write failed: " + path);
}

}  // namespace

void export_density_grid(const JointUtilityDistribution& dist, int resolution,
                         const std::string& path) {
    write_grid(path, resolution, "density",
               [&](double x, double y) { return dist.density(x, y); });
}

void export_region_mask_grid(const StrategyProfile& theta, int resolution,
                             const std::string& path) {
    write_grid(path, resolution, "region-mask", [&](double x, double y) {
        int mask = 0;
        for (int type = 1; type <= 8; ++type)
            if (offers_trade(theta, type, {x, y})) mask |= 1 << (type - 1);
        return mask;
    });
}

void export_welfare_mask_grid(const StrategyProfile& theta, const WelfareBoundarySet& set,
                              int resolution, const std::string& path) {
    write_grid(path, resolution, "welfare-mask", [&](double x, double y) {
        const UtilityPair u{x, y};
        const int q = u.quadrant();
        int mask = 0;
        if (offers_trade(theta, q, u)) mask |= 1;
        if (offers_trade(theta, q + 4, u)) mask |= 2;
        double alpha, beta, gamma;
        set.beneficial_line(q, alpha, beta, gamma);
        if (alpha * x + beta * y + gamma >= 0.0) mask |= 4;
        set.beneficial_line(q + 4, alpha, beta, gamma);
        if (alpha * x + beta * y + gamma >= 0.0) mask |= 8;
        return mask;
    });
}

}  // namespace vt
