#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cmmpath/config.hpp"
#include "cmmpath/io_util.hpp"
#include "cmmpath/pipeline.hpp"
#include "cmmpath/scene.hpp"
#include "cmmpath/timing.hpp"
#include "cmmpath/tsp.hpp"

namespace {

using namespace cmmpath;

SolverKind parse_solver(const std::string& name) {
    if (name == "nn") return SolverKind::NearestNeighbor;
    if (name == "sa") return SolverKind::SimulatedAnnealing;
    if (name == "ga") return SolverKind::Genetic;
    if (name == "aco") return SolverKind::AntColony;
    if (name == "brute") return SolverKind::BruteForce;
    throw CLI::ValidationError("--solver", "unknown solver '" + name + "'");
}

PlanConfig config_or_default(const std::string& path) {
    return path.empty() ? PlanConfig{} : load_config(path);
}

NodeFormat format_from(const std::string& name) {
    if (name == "csv") return NodeFormat::Csv;
    if (name == "json") return NodeFormat::Json;
    throw CLI::ValidationError("--nodes-format", "expected csv or json");
}

void print_tour(const Tour& tour, const TimeMatrix& T) {
    std::cout << "solver=" << to_string(tour.solver) << " seed=" << tour.seed
              << " iterations=" << tour.iterations << "\n";
    std::cout << "total_time_s=" << format_double(tour.total_time)
              << (tour.tainted ? " (TAINTED: contains inaccessible legs)" : "") << "\n";
    std::cout << "order:";
    for (int idx : tour.order) std::cout << " " << T.label(idx);
    std::cout << "\n";
}

void save_tour_json(const Tour& tour, const TimeMatrix& T, const std::string& path) {
    std::vector<std::string> ids;
    ids.reserve(tour.order.size());
    for (int idx : tour.order) ids.push_back(T.label(idx));
    nlohmann::json doc{
        {"order", tour.order},       {"ids", ids},
        {"total_time", tour.total_time}, {"tainted", tour.tainted},
        {"solver", to_string(tour.solver)}, {"seed", tour.seed},
        {"iterations", tour.iterations},
    };
    write_file(path, doc.dump(2) + "\n");
}

int run(int argc, char** argv) {
    CLI::App app{"Collision-free, time-minimal probe inspection tour planner"};
    app.require_subcommand(1);

    // gen-scene -------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-scene", "Sample a synthetic scene into node/MP files");
    std::string gen_spec, gen_nodes = "nodes.csv", gen_mps = "mps.csv", gen_cfg;
    std::uint64_t gen_seed = 0;
    gen->add_option("--spec", gen_spec, "scene spec JSON")->required();
    gen->add_option("--out-nodes", gen_nodes, "output node CSV");
    gen->add_option("--out-mps", gen_mps, "output MP CSV");
    gen->add_option("--config", gen_cfg, "planner config JSON");
    gen->add_option("--seed", gen_seed, "override config seed");

    // matrix ----------------------------------------------------------------
    auto* mat = app.add_subcommand("matrix", "Build the inspection time matrix");
    std::string mat_nodes, mat_mps, mat_cfg, mat_out = "matrix.csv", mat_fmt = "csv";
    bool mat_serial = false;
    mat->add_option("--nodes", mat_nodes, "node cloud file")->required();
    mat->add_option("--nodes-format", mat_fmt, "csv|json");
    mat->add_option("--mps", mat_mps, "MP CSV")->required();
    mat->add_option("--config", mat_cfg, "planner config JSON");
    mat->add_option("--out", mat_out, "output matrix CSV");
    mat->add_flag("--serial", mat_serial, "use the single-threaded reference builder");

    // solve -----------------------------------------------------------------
    auto* sol = app.add_subcommand("solve", "Solve a tour over an existing matrix CSV");
    std::string sol_matrix, sol_solver = "sa", sol_out;
    std::uint64_t sol_seed = 1;
    sol->add_option("--matrix", sol_matrix, "matrix CSV")->required();
    sol->add_option("--solver", sol_solver, "nn|sa|ga|aco|brute");
    sol->add_option("--seed", sol_seed, "solver seed");
    sol->add_option("--out", sol_out, "tour JSON output");

    // plan ------------------------------------------------------------------
    auto* plan = app.add_subcommand("plan", "Full pipeline: scene -> matrix -> tour -> program");
    std::string plan_scene, plan_nodes, plan_mps, plan_cfg, plan_fmt = "csv";
    std::string plan_solver = "sa";
    std::string plan_report = "report.json", plan_program, plan_obj, plan_matrix;
    std::uint64_t plan_seed = 0;
    bool plan_compare = false;
    plan->add_option("--scene", plan_scene, "scene spec JSON (alternative to --nodes/--mps)");
    plan->add_option("--nodes", plan_nodes, "node cloud file");
    plan->add_option("--nodes-format", plan_fmt, "csv|json");
    plan->add_option("--mps", plan_mps, "MP CSV");
    plan->add_option("--config", plan_cfg, "planner config JSON");
    plan->add_option("--solver", plan_solver, "nn|sa|ga|aco|brute");
    plan->add_option("--seed", plan_seed, "override config seed");
    plan->add_option("--out-report", plan_report, "plan report JSON");
    plan->add_option("--out-program", plan_program, "waypoint program CSV");
    plan->add_option("--out-obj", plan_obj, "trajectory OBJ polyline");
    plan->add_option("--out-matrix", plan_matrix, "also dump the time matrix CSV");
    plan->add_flag("--compare", plan_compare, "append a solver comparison table");

    // compare ---------------------------------------------------------------
    auto* cmp = app.add_subcommand("compare", "Compare sa/ga/aco/nn on a matrix CSV");
    std::string cmp_matrix;
    int cmp_seeds = 5;
    cmp->add_option("--matrix", cmp_matrix, "matrix CSV")->required();
    cmp->add_option("--seeds", cmp_seeds, "number of seeds (1..N)")->check(CLI::PositiveNumber);

    // export ----------------------------------------------------------------
    auto* exp = app.add_subcommand("export", "Re-export a saved report JSON");
    std::string exp_report, exp_format = "csv", exp_out;
    exp->add_option("--report", exp_report, "plan report JSON")->required();
    exp->add_option("--format", exp_format, "csv|obj|json");
    exp->add_option("--out", exp_out, "output file")->required();

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        PlanConfig cfg = config_or_default(gen_cfg);
        if (gen->count("--seed") > 0) cfg.seed = gen_seed;
        const SceneSpec spec = load_scene_spec(gen_spec);
        auto [cloud, mps] = generate_scene(spec, cfg.seed, cfg);
        save_nodes_csv(cloud.nodes(), gen_nodes);
        save_mps_csv(mps, gen_mps);
        std::cout << "scene: " << cloud.size() << " nodes, " << mps.size() << " MPs (seed "
                  << cfg.seed << ")\n";
        return 0;
    }

    if (mat->parsed()) {
        const PlanConfig cfg = config_or_default(mat_cfg);
        const NodeCloud cloud = load_nodes(mat_nodes, format_from(mat_fmt), cfg);
        const auto mps = load_mps(mat_mps);
        const auto t0 = std::chrono::steady_clock::now();
        const TimeMatrix T =
            mat_serial ? build_time_matrix_serial(mps, cloud, cfg) : build_time_matrix(mps, cloud, cfg);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        save_matrix_csv(T, mat_out);
        std::cout << "matrix: " << T.order() << "x" << T.order() << " built in " << ms
                  << " ms -> " << mat_out << "\n";
        return 0;
    }

    if (sol->parsed()) {
        const TimeMatrix T = load_matrix_csv(sol_matrix);
        const SolverKind kind = parse_solver(sol_solver);
        PlanOptions opts;
        opts.solver = kind;
        opts.params.seed = sol_seed;
        Tour tour;
        switch (kind) {
            case SolverKind::NearestNeighbor: tour = nearest_neighbor(T); break;
            case SolverKind::BruteForce: tour = brute_force(T); break;
            case SolverKind::SimulatedAnnealing: tour = solve_sa(T, opts.params.sa, sol_seed); break;
            case SolverKind::Genetic: tour = solve_ga(T, opts.params.ga, sol_seed); break;
            case SolverKind::AntColony: tour = solve_aco(T, opts.params.aco, sol_seed); break;
        }
        print_tour(tour, T);
        if (!sol_out.empty()) save_tour_json(tour, T, sol_out);
        return 0;
    }

    if (plan->parsed()) {
        PlanConfig cfg = config_or_default(plan_cfg);
        if (plan->count("--seed") > 0) cfg.seed = plan_seed;
        NodeCloud cloud;
        std::vector<MeasurementPoint> mps;
        if (!plan_scene.empty()) {
            const SceneSpec spec = load_scene_spec(plan_scene);
            std::tie(cloud, mps) = generate_scene(spec, cfg.seed, cfg);
        } else if (!plan_nodes.empty() && !plan_mps.empty()) {
            cloud = load_nodes(plan_nodes, format_from(plan_fmt), cfg);
            mps = load_mps(plan_mps);
        } else {
            throw std::runtime_error("plan: need --scene or both --nodes and --mps");
        }
        PlanOptions opts;
        opts.solver = parse_solver(plan_solver);
        opts.params.seed = cfg.seed;
        opts.compare = plan_compare;
        opts.matrix_csv_path = plan_matrix;
        const PlanReport report = run_plan(mps, cloud, cfg, opts);
        export_report_json(report, plan_report);
        if (!plan_program.empty()) export_program_csv(report, plan_program);
        if (!plan_obj.empty()) export_trajectory_obj(report, plan_obj);
        std::cout << "matrix build: " << report.matrix_wall_ms << " ms, solve: "
                  << report.solve_wall_ms << " ms\n";
        std::cout << "tour (" << to_string(report.tour.solver) << "): "
                  << format_double(report.total_s) << " s over " << report.tour.order.size()
                  << " MPs";
        if (!report.inaccessible_ids.empty()) {
            std::cout << "; inaccessible:";
            for (const auto& id : report.inaccessible_ids) std::cout << " " << id;
        }
        std::cout << "\n";
        std::cout << "counts: " << report.smp_count << " SMPs, " << report.rotation_count
                  << " rotations, " << report.segment_count << " translation segments\n";
        for (const auto& row : report.comparison)
            std::cout << "  " << row.solver << ": best " << format_double(row.best_cost)
                      << " s, median " << format_double(row.median_cost) << " s, mean "
                      << row.mean_wall_ms << " ms\n";
        std::cout << "report -> " << plan_report << "\n";
        return 0;
    }

    if (cmp->parsed()) {
        const TimeMatrix T = load_matrix_csv(cmp_matrix);
        std::vector<std::uint64_t> seeds;
        for (int s = 1; s <= cmp_seeds; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
        const auto rows = compare_solvers(T, SolverParams{}, seeds);
        std::cout << "solver  best_s      median_s    mean_wall_ms\n";
        for (const auto& row : rows)
            std::cout << row.solver << "\t" << format_double(row.best_cost) << "\t"
                      << format_double(row.median_cost) << "\t" << row.mean_wall_ms << "\n";
        return 0;
    }

    if (exp->parsed()) {
        const PlanReport report = import_report_json(exp_report);
        if (exp_format == "csv")
            export_program_csv(report, exp_out);
        else if (exp_format == "obj")
            export_trajectory_obj(report, exp_out);
        else if (exp_format == "json")
            export_report_json(report, exp_out);
        else
            throw std::runtime_error("export: unknown format '" + exp_format + "'");
        std::cout << "exported " << exp_format << " -> " << exp_out << "\n";
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
