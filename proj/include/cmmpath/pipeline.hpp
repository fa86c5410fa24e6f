#ifndef CMMPATH_PIPELINE_HPP
#define CMMPATH_PIPELINE_HPP

#include <span>
#include <string>
#include <vector>

#include "cmmpath/config.hpp"
#include "cmmpath/scene.hpp"
#include "cmmpath/timing.hpp"
#include "cmmpath/tsp.hpp"

namespace cmmpath {

enum class StepKind { Origin, Ap, Mp, Smp, Rotate };

const char* to_string(StepKind kind);

// One row of the executable waypoint program. Rotate rows are events at the
// current position; every other row is a translation target. a/b carry the
// head pose in effect at (or after) the step.
struct ProgramStep {
    StepKind kind = StepKind::Origin;
    Point3 position;
    double a_deg = 0.0;
    double b_deg = 0.0;
    double cumulative_s = 0.0;
    std::string mp_id;  // owning MP for Ap/Mp rows
};

struct SolverComparisonRow {
    std::string solver;
    double best_cost = 0.0;
    double median_cost = 0.0;
    double mean_wall_ms = 0.0;
};

struct PlanReport {
    PlanConfig config;
    Tour tour;  // order over the full matrix indices (1..m)
    std::vector<std::string> tour_ids;
    std::vector<ProgramStep> program;
    double transition_s = 0.0;
    double rotation_s = 0.0;
    double total_s = 0.0;
    int smp_count = 0;
    int rotation_count = 0;
    int segment_count = 0;
    std::vector<std::string> inaccessible_ids;
    std::vector<SolverComparisonRow> comparison;  // filled only on request
    double matrix_wall_ms = 0.0;
    double solve_wall_ms = 0.0;
};

struct PlanOptions {
    SolverKind solver = SolverKind::SimulatedAnnealing;
    SolverParams params;
    bool compare = false;
    std::vector<std::uint64_t> compare_seeds = {1, 2, 3, 4, 5};
    std::string matrix_csv_path;  // non-empty: dump the built matrix here
};

// Full pipeline: time matrix -> inaccessibility preprocessing -> tour solve
// (re-solving after dropping MPs that force A_inf legs) -> executable
// program expansion -> end-to-end collision re-verification.
// An all-inaccessible MP set produces an empty-tour report, not an error.
PlanReport run_plan(std::span<const MeasurementPoint> mps, const NodeCloud& cloud,
                    const PlanConfig& cfg, const PlanOptions& opts);

// Re-checks every AP-to-AP translation segment of the program against the
// cloud (the slow AP<->MP dips are excluded by design). Returns the ids of
// offending segment start rows; empty means the program is collision-free.
std::vector<std::size_t> verify_program(const PlanReport& report, const NodeCloud& cloud,
                                        const PlanConfig& cfg);

// Runs sa/ga/aco (plus the nn baseline) over the seed set; rows are sorted
// by best cost ascending. Costs are deterministic per seed.
std::vector<SolverComparisonRow> compare_solvers(const TimeMatrix& T, const SolverParams& params,
                                                 std::span<const std::uint64_t> seeds);

void export_report_json(const PlanReport& report, const std::string& path);
PlanReport import_report_json(const std::string& path);
void export_program_csv(const PlanReport& report, const std::string& path);
void export_trajectory_obj(const PlanReport& report, const std::string& path);

}  // namespace cmmpath

#endif
