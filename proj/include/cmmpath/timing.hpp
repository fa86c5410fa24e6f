#ifndef CMMPATH_TIMING_HPP
#define CMMPATH_TIMING_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmmpath/config.hpp"
#include "cmmpath/geometry.hpp"
#include "cmmpath/localpath.hpp"
#include "cmmpath/scene.hpp"

namespace cmmpath {

// Matrix node 0 (the probe park position) uses this id in path provenance.
inline constexpr const char* kOriginId = "__origin";

// Indexing-head pose. A tilts away from straight-down, B swivels about the
// quill: direction = (sin A cos B, sin A sin B, -cos A). Poses snap to the
// 7.5 deg index grid, A in [0, 105], B in (-180, 180].
struct StylusOrientation {
    double a_deg = 0.0;
    double b_deg = 0.0;

    UnitVec3 direction() const;
};

constexpr double kOrientationGridDeg = 7.5;
constexpr double kMaxTiltDeg = 105.0;

// Head pose whose stylus points against the surface normal, snapped to the
// index grid. Infeasible (nullopt) when the snapped tilt exceeds 105 deg or
// the snapped direction misses the theta_max cone around -normal.
std::optional<StylusOrientation> required_orientation(const MeasurementPoint& mp,
                                                      const PlanConfig& cfg);

// Polyline length over speed; A_inf for infeasible paths.
double transition_time(const LocalPath& path, double v, double a_inf);

// Zero when `from` already points within theta_max of -target_normal;
// otherwise sequential A+B axis motion plus the settle pause.
double rotation_time(const StylusOrientation& from, const StylusOrientation& to,
                     const UnitVec3& target_normal, const PlanConfig& cfg);

// Chosen local path and its per-leg time split, kept per unordered pair for
// the plan report.
struct LegProvenance {
    LocalPath path;            // stored in the cheaper direction
    double transition_s = 0.0;
    double rotation_s = 0.0;
};

// Symmetric (m+1)x(m+1) inspection time matrix; row/col 0 is the probe
// origin (depot). Entries are seconds; values >= a_inf mean inaccessible.
class TimeMatrix {
public:
    TimeMatrix() = default;
    TimeMatrix(int mp_count, double a_inf);

    int mp_count() const { return m_; }
    int order() const { return m_ + 1; }
    double a_inf() const { return a_inf_; }

    double at(int i, int q) const { return t_[idx(i, q)]; }
    void set(int i, int q, double v) { t_[idx(i, q)] = v; }
    bool is_inf(int i, int q) const { return at(i, q) >= a_inf_; }

    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);
    const std::string& label(int mp_index) const { return labels_[mp_index - 1]; }

    // Provenance for the unordered pair {i, q}; nullptr when absent
    // (imported matrices carry no paths).
    const LegProvenance* leg(int i, int q) const;
    void set_leg(int i, int q, LegProvenance leg);

private:
    std::size_t idx(int i, int q) const { return static_cast<std::size_t>(i) * order() + q; }
    std::size_t pair_idx(int i, int q) const;

    int m_ = 0;
    double a_inf_ = 1e6;
    std::vector<double> t_;
    std::vector<std::string> labels_;
    std::vector<std::optional<LegProvenance>> legs_;
};

// Plans every ordered pair (plus depot legs from cfg.origin), adds rotation
// time, caps slow legs to A_inf, then symmetrizes by path inversion: both
// directions keep the cheaper one. OpenMP-parallel over legs; results are
// independent of scheduling because every leg is computed in isolation.
TimeMatrix build_time_matrix(std::span<const MeasurementPoint> mps, const NodeCloud& cloud,
                             const PlanConfig& cfg);

// Single-threaded reference of the same computation, kept for testing and
// benchmarking against the parallel kernel.
TimeMatrix build_time_matrix_serial(std::span<const MeasurementPoint> mps,
                                    const NodeCloud& cloud, const PlanConfig& cfg);

struct TourCost {
    double seconds = 0.0;
    bool tainted = false;  // some leg was A_inf
};

// Closed-tour cost: depot -> order[0] -> ... -> order[m-1] -> depot.
// `order` holds matrix MP indices (1-based); each must appear exactly once.
TourCost tour_time(std::span<const int> order, const TimeMatrix& T);

// CSV exchange format: order x order numeric rows, comma separated,
// inaccessible entries written as the literal `inf`.
void save_matrix_csv(const TimeMatrix& T, const std::string& path);
TimeMatrix load_matrix_csv(const std::string& path, double a_inf = 1e6);

}  // namespace cmmpath

#endif
