#include "cmmpath/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cmmpath/collision.hpp"
#include "cmmpath/io_util.hpp"
#include "cmmpath/localpath.hpp"
#include "json.hpp"

namespace cmmpath {

const char* to_string(StepKind kind) {
    switch (kind) {
        case StepKind::Origin: return "ORIGIN";
        case StepKind::Ap: return "AP";
        case StepKind::Mp: return "MP";
        case StepKind::Smp: return "SMP";
        case StepKind::Rotate: return "ROTATE";
    }
    return "ORIGIN";
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

TimeMatrix submatrix(const TimeMatrix& T, const std::vector<int>& kept) {
    TimeMatrix sub(static_cast<int>(kept.size()), T.a_inf());
    std::vector<std::string> labels;
    labels.reserve(kept.size());
    for (int idx : kept) labels.push_back(T.label(idx));
    sub.set_labels(std::move(labels));
    for (int i = 0; i <= sub.mp_count(); ++i)
        for (int q = 0; q <= sub.mp_count(); ++q)
            sub.set(i, q, T.at(i == 0 ? 0 : kept[i - 1], q == 0 ? 0 : kept[q - 1]));
    return sub;
}

Tour dispatch_solver(const TimeMatrix& T, const PlanOptions& opts) {
    switch (opts.solver) {
        case SolverKind::NearestNeighbor: return nearest_neighbor(T);
        case SolverKind::BruteForce: return brute_force(T);
        case SolverKind::SimulatedAnnealing:
            return solve_sa(T, opts.params.sa, opts.params.seed);
        case SolverKind::Genetic: return solve_ga(T, opts.params.ga, opts.params.seed);
        case SolverKind::AntColony: return solve_aco(T, opts.params.aco, opts.params.seed);
    }
    return nearest_neighbor(T);
}

// Picks which MP to shed from a tainted tour: among the MPs touching an
// A_inf leg, the one with the fewest finite row entries is the most
// isolated one (an island member, not its healthy neighbor on the tour).
// Ties go to the lowest matrix index.
int pick_shed_mp(const Tour& tour, const TimeMatrix& T) {
    std::map<int, int> candidates;  // mp -> finite off-diagonal row entries
    int prev = 0;
    for (std::size_t i = 0; i <= tour.order.size(); ++i) {
        const int next = i < tour.order.size() ? tour.order[i] : 0;
        if (T.is_inf(prev, next)) {
            for (int mp : {prev, next}) {
                if (mp == 0 || candidates.count(mp)) continue;
                int finite = 0;
                for (int q = 0; q <= T.mp_count(); ++q)
                    if (q != mp && !T.is_inf(mp, q)) ++finite;
                candidates[mp] = finite;
            }
        }
        prev = next;
    }
    int worst = -1;
    for (auto [mp, finite] : candidates)  // std::map: ascending mp order
        if (worst < 0 || finite < candidates[worst]) worst = mp;
    return worst;
}

struct LegTraversal {
    std::vector<Point3> intermediate;  // SMP positions in travel order
    double transition_s = 0.0;
    double rotation_s = 0.0;
};

LegTraversal traverse_leg(const TimeMatrix& T, int from, int to) {
    const LegProvenance* leg = T.leg(from, to);
    if (!leg) throw std::logic_error("time matrix has no path provenance for leg");
    LegTraversal out;
    out.transition_s = leg->transition_s;
    out.rotation_s = leg->rotation_s;
    std::vector<Point3> smps;
    for (const Waypoint& w : leg->path.waypoints)
        if (w.kind == WaypointKind::Smp) smps.push_back(w.position);
    // Provenance stores the cheaper direction; flip it when traversing the
    // other way.
    const std::string from_id = from == 0 ? kOriginId : T.label(from);
    if (leg->path.from_mp != from_id) std::reverse(smps.begin(), smps.end());
    out.intermediate = std::move(smps);
    return out;
}

}  // namespace

PlanReport run_plan(std::span<const MeasurementPoint> mps, const NodeCloud& cloud,
                    const PlanConfig& cfg, const PlanOptions& opts) {
    PlanReport report;
    report.config = cfg;

    auto t0 = Clock::now();
    const TimeMatrix T = build_time_matrix(mps, cloud, cfg);
    report.matrix_wall_ms = ms_since(t0);
    if (!opts.matrix_csv_path.empty()) save_matrix_csv(T, opts.matrix_csv_path);

    // Solve, shedding MPs that can only be reached through A_inf legs.
    t0 = Clock::now();
    std::vector<int> kept(mps.size());
    for (std::size_t i = 0; i < mps.size(); ++i) kept[i] = static_cast<int>(i) + 1;
    Tour sub_tour;
    std::vector<int> final_kept;
    while (true) {
        const TimeMatrix sub = submatrix(T, kept);
        PreprocessResult pre = preprocess_inaccessible(sub);
        for (auto& id : pre.excluded_ids) report.inaccessible_ids.push_back(std::move(id));
        std::vector<int> pre_kept;
        pre_kept.reserve(pre.kept.size());
        for (int idx : pre.kept) pre_kept.push_back(kept[idx - 1]);
        kept = std::move(pre_kept);
        if (kept.empty()) {
            final_kept.clear();
            sub_tour = Tour{};
            sub_tour.solver = opts.solver;
            break;
        }
        sub_tour = dispatch_solver(pre.reduced, opts);
        if (!sub_tour.tainted) {
            final_kept = kept;
            break;
        }
        const int worst = pick_shed_mp(sub_tour, pre.reduced);
        if (worst < 0) {  // tainted but no MP-adjacent inf leg; give up cleanly
            final_kept = kept;
            break;
        }
        report.inaccessible_ids.push_back(pre.reduced.label(worst));
        kept.erase(kept.begin() + (worst - 1));
    }
    report.solve_wall_ms = ms_since(t0);

    // Lift the tour back onto full-matrix indices.
    report.tour = sub_tour;
    report.tour.order.clear();
    for (int reduced_idx : sub_tour.order)
        report.tour.order.push_back(final_kept[reduced_idx - 1]);
    if (!report.tour.order.empty()) {
        const TourCost cost = tour_time(report.tour.order, T);
        report.tour.total_time = cost.seconds;
        report.tour.tainted = cost.tainted;
    } else {
        report.tour.total_time = 0.0;
        report.tour.tainted = false;
    }
    for (int idx : report.tour.order) report.tour_ids.push_back(T.label(idx));

    // Expand the executable waypoint program:
    //   ORIGIN -> [SMPs] -> Q -> M -> Q -> [rotate] -> [SMPs] -> Q -> ... -> ORIGIN
    std::vector<std::optional<StylusOrientation>> orientations;
    orientations.reserve(mps.size());
    for (const auto& mp : mps) orientations.push_back(required_orientation(mp, cfg));

    double cum = 0.0;
    double a_now = 0.0, b_now = 0.0;
    if (!report.tour.order.empty()) {
        const auto& first = orientations[report.tour.order.front() - 1];
        if (first) {
            a_now = first->a_deg;
            b_now = first->b_deg;
        }
    }
    auto push = [&](StepKind kind, const Point3& pos, const std::string& mp_id = {}) {
        report.program.push_back({kind, pos, a_now, b_now, cum, mp_id});
    };
    push(StepKind::Origin, cfg.origin);

    int prev = 0;
    for (std::size_t leg_no = 0; leg_no <= report.tour.order.size(); ++leg_no) {
        if (report.tour.order.empty()) break;
        const int next = leg_no < report.tour.order.size() ? report.tour.order[leg_no] : 0;
        const LegTraversal leg = traverse_leg(T, prev, next);
        if (leg.rotation_s > 0.0 && next != 0) {
            cum += leg.rotation_s;
            const auto& target = orientations[next - 1];
            if (target) {
                a_now = target->a_deg;
                b_now = target->b_deg;
            }
            push(StepKind::Rotate, report.program.back().position);
            report.rotation_s += leg.rotation_s;
        }
        const double travel_start = cum;
        Point3 from_pos = report.program.back().position;
        double partial = 0.0;
        for (const Point3& smp : leg.intermediate) {
            partial += (smp - from_pos).norm();
            from_pos = smp;
            cum = travel_start + partial / cfg.speed_mm_s;
            push(StepKind::Smp, smp);
        }
        // Arrival row carries the exact per-leg transition time so that the
        // final cumulative value matches the tour total.
        cum = travel_start + leg.transition_s;
        report.transition_s += leg.transition_s;
        if (next != 0) {
            const MeasurementPoint& mp = mps[next - 1];
            const Point3 ap = approach_point(mp, cfg.approach_dist);
            push(StepKind::Ap, ap, mp.id);
            push(StepKind::Mp, mp.position, mp.id);  // slow dip, untimed
            push(StepKind::Ap, ap, mp.id);
        } else {
            push(StepKind::Origin, cfg.origin);
        }
        prev = next;
    }

    report.total_s = report.tour.total_time;
    for (const auto& step : report.program) {
        if (step.kind == StepKind::Smp) ++report.smp_count;
        if (step.kind == StepKind::Rotate) ++report.rotation_count;
    }
    int translation_rows = 0;
    for (const auto& step : report.program)
        if (step.kind != StepKind::Rotate) ++translation_rows;
    report.segment_count = std::max(0, translation_rows - 1);

    if (opts.compare && T.mp_count() >= 2) {
        const TimeMatrix sub = submatrix(T, final_kept);
        report.comparison = compare_solvers(sub, opts.params, opts.compare_seeds);
    }

    const auto bad = verify_program(report, cloud, cfg);
    if (!bad.empty())
        throw std::logic_error("planned program failed collision re-verification at step " +
                               std::to_string(bad.front()));
    return report;
}

std::vector<std::size_t> verify_program(const PlanReport& report, const NodeCloud& cloud,
                                        const PlanConfig& cfg) {
    std::vector<std::size_t> bad;
    const auto& prog = report.program;
    std::size_t prev = static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < prog.size(); ++i) {
        if (prog[i].kind == StepKind::Rotate) continue;
        if (prev != static_cast<std::size_t>(-1)) {
            const bool dip = prog[prev].kind == StepKind::Mp || prog[i].kind == StepKind::Mp;
            if (!dip) {
                const auto res = segment_collides(cloud, prog[prev].position, prog[i].position,
                                                  cfg.eps(), cfg.clearance);
                if (res.collides) bad.push_back(prev);
            }
        }
        prev = i;
    }
    return bad;
}

std::vector<SolverComparisonRow> compare_solvers(const TimeMatrix& T, const SolverParams& params,
                                                 std::span<const std::uint64_t> seeds) {
    if (seeds.empty()) throw std::invalid_argument("compare_solvers: need at least one seed");
    std::vector<SolverComparisonRow> rows;
    auto run = [&](const std::string& name, auto&& solve_fn, bool seeded) {
        std::vector<double> costs;
        double wall_ms = 0.0;
        const std::size_t runs = seeded ? seeds.size() : 1;
        for (std::size_t s = 0; s < runs; ++s) {
            const auto t0 = Clock::now();
            const Tour tour = solve_fn(seeded ? seeds[s] : 0);
            wall_ms += ms_since(t0);
            costs.push_back(tour.total_time);
        }
        std::sort(costs.begin(), costs.end());
        SolverComparisonRow row;
        row.solver = name;
        row.best_cost = costs.front();
        row.median_cost = costs[costs.size() / 2];
        row.mean_wall_ms = wall_ms / static_cast<double>(runs);
        rows.push_back(row);
    };
    run("sa", [&](std::uint64_t s) { return solve_sa(T, params.sa, s); }, true);
    run("ga", [&](std::uint64_t s) { return solve_ga(T, params.ga, s); }, true);
    run("aco", [&](std::uint64_t s) { return solve_aco(T, params.aco, s); }, true);
    run("nn", [&](std::uint64_t) { return nearest_neighbor(T); }, false);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.best_cost < b.best_cost; });
    return rows;
}

// ---------------------------------------------------------------------------
// Exports

namespace {

nlohmann::json point_json(const Point3& p) { return nlohmann::json{p.x, p.y, p.z}; }

Point3 point_from(const nlohmann::json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

nlohmann::json config_json(const PlanConfig& c) {
    return nlohmann::json{
        {"l", c.element_size},          {"D0", c.clearance},
        {"d", c.approach_dist},         {"h", c.step_len},
        {"k0", c.max_steps},            {"omega", c.omega_deg_s},
        {"t_s", c.pause_s},             {"v", c.speed_mm_s},
        {"eps", c.search_margin},       {"A_inf", c.time_inf},
        {"theta_max", c.theta_max_deg}, {"local_time_cap", c.time_cap_s},
        {"origin", point_json(c.origin)}, {"seed", c.seed},
    };
}

PlanConfig config_from(const nlohmann::json& j) {
    PlanConfig c;
    c.element_size = j.at("l").get<double>();
    c.clearance = j.at("D0").get<double>();
    c.approach_dist = j.at("d").get<double>();
    c.step_len = j.at("h").get<double>();
    c.max_steps = j.at("k0").get<int>();
    c.omega_deg_s = j.at("omega").get<double>();
    c.pause_s = j.at("t_s").get<double>();
    c.speed_mm_s = j.at("v").get<double>();
    c.search_margin = j.at("eps").get<double>();
    c.time_inf = j.at("A_inf").get<double>();
    c.theta_max_deg = j.at("theta_max").get<double>();
    c.time_cap_s = j.at("local_time_cap").get<double>();
    c.origin = point_from(j.at("origin"));
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

StepKind step_kind_from(const std::string& s) {
    if (s == "ORIGIN") return StepKind::Origin;
    if (s == "AP") return StepKind::Ap;
    if (s == "MP") return StepKind::Mp;
    if (s == "SMP") return StepKind::Smp;
    if (s == "ROTATE") return StepKind::Rotate;
    throw std::runtime_error("unknown program step kind '" + s + "'");
}

SolverKind solver_kind_from(const std::string& s) {
    if (s == "nn") return SolverKind::NearestNeighbor;
    if (s == "sa") return SolverKind::SimulatedAnnealing;
    if (s == "ga") return SolverKind::Genetic;
    if (s == "aco") return SolverKind::AntColony;
    if (s == "brute") return SolverKind::BruteForce;
    throw std::runtime_error("unknown solver '" + s + "'");
}

}  // namespace

void export_report_json(const PlanReport& report, const std::string& path) {
    nlohmann::json doc;
    doc["config"] = config_json(report.config);
    doc["tour"] = {
        {"order", report.tour.order},     {"ids", report.tour_ids},
        {"total_time", report.tour.total_time}, {"tainted", report.tour.tainted},
        {"solver", to_string(report.tour.solver)}, {"seed", report.tour.seed},
        {"iterations", report.tour.iterations},
    };
    doc["totals"] = {{"transition_s", report.transition_s},
                     {"rotation_s", report.rotation_s},
                     {"total_s", report.total_s}};
    doc["counts"] = {{"smps", report.smp_count},
                     {"rotations", report.rotation_count},
                     {"segments", report.segment_count}};
    doc["inaccessible"] = report.inaccessible_ids;
    doc["timing_ms"] = {{"matrix", report.matrix_wall_ms}, {"solve", report.solve_wall_ms}};
    auto steps = nlohmann::json::array();
    for (const auto& s : report.program) {
        steps.push_back({{"kind", to_string(s.kind)},
                         {"position", point_json(s.position)},
                         {"A", s.a_deg},
                         {"B", s.b_deg},
                         {"t", s.cumulative_s},
                         {"mp", s.mp_id}});
    }
    doc["program"] = std::move(steps);
    if (!report.comparison.empty()) {
        auto rows = nlohmann::json::array();
        for (const auto& r : report.comparison)
            rows.push_back({{"solver", r.solver},
                            {"best", r.best_cost},
                            {"median", r.median_cost},
                            {"mean_wall_ms", r.mean_wall_ms}});
        doc["comparison"] = std::move(rows);
    }
    write_file(path, doc.dump(2) + "\n");
}

PlanReport import_report_json(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    PlanReport r;
    try {
        r.config = config_from(doc.at("config"));
        const auto& t = doc.at("tour");
        r.tour.order = t.at("order").get<std::vector<int>>();
        r.tour_ids = t.at("ids").get<std::vector<std::string>>();
        r.tour.total_time = t.at("total_time").get<double>();
        r.tour.tainted = t.at("tainted").get<bool>();
        r.tour.solver = solver_kind_from(t.at("solver").get<std::string>());
        r.tour.seed = t.at("seed").get<std::uint64_t>();
        r.tour.iterations = t.at("iterations").get<long>();
        r.transition_s = doc.at("totals").at("transition_s").get<double>();
        r.rotation_s = doc.at("totals").at("rotation_s").get<double>();
        r.total_s = doc.at("totals").at("total_s").get<double>();
        r.smp_count = doc.at("counts").at("smps").get<int>();
        r.rotation_count = doc.at("counts").at("rotations").get<int>();
        r.segment_count = doc.at("counts").at("segments").get<int>();
        r.inaccessible_ids = doc.at("inaccessible").get<std::vector<std::string>>();
        for (const auto& s : doc.at("program")) {
            ProgramStep step;
            step.kind = step_kind_from(s.at("kind").get<std::string>());
            step.position = point_from(s.at("position"));
            step.a_deg = s.at("A").get<double>();
            step.b_deg = s.at("B").get<double>();
            step.cumulative_s = s.at("t").get<double>();
            step.mp_id = s.at("mp").get<std::string>();
            r.program.push_back(std::move(step));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return r;
}

void export_program_csv(const PlanReport& report, const std::string& path) {
    std::string out = "index,kind,x,y,z,A,B,cumulative_time\n";
    for (std::size_t i = 0; i < report.program.size(); ++i) {
        const auto& s = report.program[i];
        out += std::to_string(i);
        out += ',';
        out += to_string(s.kind);
        for (double v : {s.position.x, s.position.y, s.position.z, s.a_deg, s.b_deg,
                         s.cumulative_s}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file(path, out);
}

void export_trajectory_obj(const PlanReport& report, const std::string& path) {
    std::string out = "# probe trajectory polyline\n";
    std::size_t count = 0;
    for (const auto& s : report.program) {
        if (s.kind == StepKind::Rotate) continue;
        out += "v " + format_double(s.position.x) + " " + format_double(s.position.y) + " " +
               format_double(s.position.z) + "\n";
        ++count;
    }
    for (std::size_t i = 1; i < count; ++i)
        out += "l " + std::to_string(i) + " " + std::to_string(i + 1) + "\n";
    write_file(path, out);
}

}  // namespace cmmpath
