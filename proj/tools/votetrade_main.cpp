// votetrade: Nash equilibria and group-welfare analysis of the two-issue
// vote-trading game, plus a Monte Carlo committee simulator.
//
// Subcommands: solve, welfare, simulate, ingest, export-grid.
// Exit codes: 0 success, 1 usage/invalid input, 2 numerical
// non-convergence, 3 I/O failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vt/errors.hpp"
#include "vt/json_io.hpp"
#include "vt/rng.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
    std::string dist_path;
    int n = 11;
    std::string mode = "myopic";
    double tol = 0.0;  // 0 = distribution default
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool dist_required = true) {
    auto* d = cmd->add_option("--dist", args.dist_path, "distribution spec (json)");
    if (dist_required) d->required();
    cmd->add_option("--n", args.n, "odd committee size")->check(CLI::PositiveNumber);
    cmd->add_option("--mode", args.mode, "myopic or groupwide")
        ->check(CLI::IsMember({"myopic", "groupwide"}));
    cmd->add_option("--tol", args.tol, "integration tolerance (0 = family default)");
    cmd->add_option("--seed", args.seed, "rng seed");
}

vt::SolverOptions solver_options(const CommonArgs& c, double solver_tol, int max_iter,
                                 int starts) {
    vt::SolverOptions opts;
    opts.n = c.n;
    opts.tolerance = solver_tol;
    opts.max_iterations = max_iter;
    opts.starts = starts;
    opts.seed = c.seed;
    opts.integration_tol = c.tol;
    return opts;
}

// theta either from a solution file (exact round-trip) or an inline solve
struct Profile {
    vt::StrategyProfile theta;
    int n;
    vt::TradeMode mode;
};

Profile resolve_profile(const CommonArgs& c, const vt::JointUtilityDistribution& dist,
                        const std::string& solution_path, bool naive, double solver_tol,
                        int max_iter) {
    const vt::TradeMode mode = vt::mode_from_name(c.mode);
    if (!solution_path.empty()) {
        const vt::LoadedSolution loaded = vt::solution_from_json(vt::read_json_file(solution_path));
        return {loaded.theta, loaded.n, loaded.mode};
    }
    if (naive) return {vt::StrategyProfile::naive(), c.n, mode};
    const vt::EquilibriumSolution sol =
        vt::solve_equilibrium(dist, solver_options(c, solver_tol, max_iter, 1), mode);
    return {sol.theta_star, c.n, mode};
}

int run(int argc, char** argv) {
    CLI::App app{"vote-trading equilibrium and welfare engine"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "find a non-trivial Nash equilibrium");
    CommonArgs sa;
    add_common(solve, sa);
    std::string solve_out;
    double solver_tol = 1e-7;
    int max_iter = 300;
    int starts = 1;
    solve->add_option("--out", solve_out, "solution json path")->required();
    solve->add_option("--solver-tol", solver_tol, "fixed-point residual target");
    solve->add_option("--max-iter", max_iter, "iteration budget")->check(CLI::PositiveNumber);
    solve->add_option("--starts", starts, "multi-start count")->check(CLI::PositiveNumber);

    // ---- welfare ----
    auto* welfare = app.add_subcommand("welfare", "group-welfare report at an equilibrium");
    CommonArgs wa;
    add_common(welfare, wa);
    std::string welfare_out, welfare_solution, welfare_grid_prefix;
    int welfare_grid = 0;
    welfare->add_option("--out", welfare_out, "report json path")->required();
    welfare->add_option("--solution", welfare_solution, "reuse a solve output (bit-exact)");
    welfare->add_option("--grid", welfare_grid, "also export mask grids at this resolution");
    welfare->add_option("--grid-out", welfare_grid_prefix, "mask grid path prefix");

    // ---- simulate ----
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo committee simulation");
    CommonArgs ma;
    add_common(simulate, ma);
    std::string sim_out, sim_solution, sim_dump;
    long trials = 100000;
    long dump_cap = 1000;
    bool sim_naive = false;
    simulate->add_option("--out", sim_out, "report json path")->required();
    simulate->add_option("--trials", trials, "number of committees")->check(CLI::PositiveNumber);
    simulate->add_option("--solution", sim_solution, "profile from a solve output");
    simulate->add_flag("--naive", sim_naive, "use the naive profile instead of solving");
    simulate->add_option("--dump-trials", sim_dump, "per-trial csv for debugging");
    simulate->add_option("--dump-cap", dump_cap, "max rows in the trial dump")
        ->check(CLI::PositiveNumber);

    // ---- ingest ----
    auto* ingest = app.add_subcommand("ingest", "survey csv -> kde distribution spec");
    std::string ingest_csv, ingest_out, ingest_report, ingest_grid_out;
    std::vector<int> scale_bounds{1, 7};
    std::optional<double> bandwidth;
    double ingest_tol = 1e-6;
    int ingest_grid = 0;
    ingest->add_option("--csv", ingest_csv, "survey csv (header + two int columns)")->required();
    ingest->add_option("--out", ingest_out, "distribution spec json path")->required();
    ingest->add_option("--scale", scale_bounds, "ordinal scale bounds lo hi")->expected(2);
    ingest->add_option("--bandwidth", bandwidth, "kernel bandwidth (default: Scott's rule)");
    ingest->add_option("--report", ingest_report, "validation report json path");
    ingest->add_option("--tol", ingest_tol, "validation mass tolerance");
    ingest->add_option("--grid", ingest_grid, "density heatmap resolution");
    ingest->add_option("--grid-out", ingest_grid_out, "density heatmap csv path");

    // ---- export-grid ----
    auto* exportg = app.add_subcommand("export-grid", "plot-ready grid csv");
    CommonArgs ga;
    add_common(exportg, ga);
    std::string grid_out, grid_kind = "density", grid_solution;
    int grid_res = 256;
    bool grid_naive = false;
    exportg->add_option("--out", grid_out, "grid csv path")->required();
    exportg->add_option("--kind", grid_kind, "density, regions or welfare")
        ->check(CLI::IsMember({"density", "regions", "welfare"}));
    exportg->add_option("--grid", grid_res, "resolution")->check(CLI::PositiveNumber);
    exportg->add_option("--solution", grid_solution, "profile from a solve output");
    exportg->add_flag("--naive", grid_naive, "use the naive profile instead of solving");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems exit 1; --help exits 0
    }

    if (solve->parsed()) {
        const auto dist = vt::load_distribution_spec(sa.dist_path);
        const vt::SolverOptions opts = solver_options(sa, solver_tol, max_iter, starts);
        const vt::TradeMode mode = vt::mode_from_name(sa.mode);
        if (starts == 1) {
            const vt::EquilibriumSolution sol = vt::solve_equilibrium(dist, opts, mode);
            const auto table = vt::mass_table(dist, sol.theta_star, sa.tol);
            vt::write_json_file(solve_out, vt::solution_to_json(sol, table));
            std::cout << "converged in " << sol.iterations << " iterations, residual "
                      << sol.residual << "\n";
        } else {
            const vt::MultiStartResult multi = vt::find_equilibria(dist, opts, mode);
            json out{{"kind", "equilibrium_solutions"},
                     {"starts_attempted", multi.starts_attempted},
                     {"starts_converged", multi.starts_converged},
                     {"distinct_count", multi.solutions.size()},
                     {"solutions", json::array()}};
            for (const auto& sol : multi.solutions) {
                const auto table = vt::mass_table(dist, sol.theta_star, sa.tol);
                out["solutions"].push_back(vt::solution_to_json(sol, table));
            }
            vt::write_json_file(solve_out, out);
            std::cout << multi.solutions.size() << " distinct solution(s) from "
                      << multi.starts_attempted << " starts\n";
            if (multi.solutions.empty()) throw vt::nonconvergence_error("no start converged", {}, {});
        }
        return 0;
    }

    if (welfare->parsed()) {
        const auto dist = vt::load_distribution_spec(wa.dist_path);
        const Profile prof = resolve_profile(wa, dist, welfare_solution, false, 1e-7, 300);
        const vt::WelfareReport rep =
            vt::beneficial_trade_probability(dist, prof.theta, prof.n, prof.mode, wa.tol);
        const vt::WelfareBoundarySet set =
            vt::welfare_coefficients(dist, prof.theta, prof.n, prof.mode, wa.tol);
        if (rep.profile_residual > 1e-4)
            std::cerr << "warning: profile residual " << rep.profile_residual
                      << " - not an equilibrium\n";
        vt::write_json_file(welfare_out, vt::welfare_report_to_json(rep, set));
        if (welfare_grid > 0) {
            const std::string prefix =
                welfare_grid_prefix.empty() ? welfare_out + ".grid" : welfare_grid_prefix;
            vt::export_welfare_mask_grid(prof.theta, set, welfare_grid, prefix + ".welfare.csv");
            vt::export_region_mask_grid(prof.theta, welfare_grid, prefix + ".regions.csv");
        }
        std::cout << "beneficial probability " << rep.beneficial_probability
                  << " (unconditional mass " << rep.beneficial_mass << ")\n";
        return 0;
    }

    if (simulate->parsed()) {
        const auto dist = vt::load_distribution_spec(ma.dist_path);
        const Profile prof = resolve_profile(ma, dist, sim_solution, sim_naive, 1e-7, 300);
        const vt::SimMode sim_mode = vt::mode_from_name(ma.mode) == vt::TradeMode::Myopic
                                         ? vt::SimMode::SingleTrade
                                         : vt::SimMode::AllPairs;
        const vt::SimulationReport rep =
            vt::simulate(dist, prof.theta, prof.n, sim_mode, trials, ma.seed);
        vt::write_json_file(sim_out, vt::simulation_report_to_json(rep));
        if (!sim_dump.empty()) {
            std::ofstream dump(sim_dump);
            if (!dump) throw vt::io_error("cannot write " + sim_dump);
            dump << "trial,outcome_t1,outcome_t2,counterfactual_t1,counterfactual_t2,"
                    "trades,group_delta\n";
            dump.precision(12);
            const long rows = std::min(trials, dump_cap);
            for (long trial = 0; trial < rows; ++trial) {
                vt::RngStream rng(ma.seed, static_cast<std::uint64_t>(trial));
                const vt::TrialRecord rec =
                    vt::play_committee(dist, prof.theta, prof.n, sim_mode, rng);
                dump << trial << ',' << rec.outcome_t1 << ',' << rec.outcome_t2 << ','
                     << rec.counterfactual_t1 << ',' << rec.counterfactual_t2 << ','
                     << rec.trades.size() << ',' << rec.group_delta << '\n';
            }
        }
        std::cout << rep.trades_executed << " trades over " << rep.trials << " trials\n";
        return 0;
    }

    if (ingest->parsed()) {
        const vt::SurveyScale scale{scale_bounds[0], scale_bounds[1]};
        const auto records = vt::parse_survey_csv(ingest_csv, scale);
        const vt::KdeParameters par = vt::kde_parameters(records, scale, bandwidth);
        const auto dist = vt::kde_from_survey(records, scale, bandwidth);
        const vt::ValidationReport rep = vt::validate(dist, ingest_tol);
        // bandwidth written resolved so downstream runs see identical values
        vt::write_json_file(ingest_out,
                            vt::kde_spec_json(ingest_csv, scale, par.bandwidth_x));
        if (!ingest_report.empty())
            vt::write_json_file(ingest_report, vt::validation_report_to_json(rep));
        if (ingest_grid > 0) {
            const std::string path =
                ingest_grid_out.empty() ? ingest_out + ".density.csv" : ingest_grid_out;
            vt::export_density_grid(dist, ingest_grid, path);
        }
        std::cout << records.size() << " records, mass " << rep.total_mass
                  << (rep.pass ? " (valid)" : " (FAILED validation)") << "\n";
        return rep.pass ? 0 : 1;
    }

    if (exportg->parsed()) {
        const auto dist = vt::load_distribution_spec(ga.dist_path);
        if (grid_kind == "density") {
            vt::export_density_grid(dist, grid_res, grid_out);
        } else {
            const Profile prof = resolve_profile(ga, dist, grid_solution, grid_naive, 1e-7, 300);
            if (grid_kind == "regions") {
                vt::export_region_mask_grid(prof.theta, grid_res, grid_out);
            } else {
                const vt::WelfareBoundarySet set =
                    vt::welfare_coefficients(dist, prof.theta, prof.n, prof.mode, ga.tol);
                vt::export_welfare_mask_grid(prof.theta, set, grid_res, grid_out);
            }
        }
        std::cout << "wrote " << grid_out << "\n";
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const vt::nonconvergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (!e.residual_history.empty())
            std::cerr << "last residual: " << e.residual_history.back() << " after "
                      << e.residual_history.size() << " iterations\n";
        return 2;
    } catch (const vt::quadrature_error& e) {
        std::cerr << "error: " << e.what() << " (estimate " << e.estimate << ", bound "
                  << e.error_bound << ")\n";
        return 2;
    } catch (const vt::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const vt::construction_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const vt::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
