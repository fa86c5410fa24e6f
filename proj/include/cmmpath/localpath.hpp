#ifndef CMMPATH_LOCALPATH_HPP
#define CMMPATH_LOCALPATH_HPP

#include <span>
#include <string>
#include <vector>

#include "cmmpath/collision.hpp"
#include "cmmpath/config.hpp"
#include "cmmpath/geometry.hpp"
#include "cmmpath/scene.hpp"

namespace cmmpath {

enum class WaypointKind { Ap, Smp };

struct Waypoint {
    Point3 position;
    WaypointKind kind = WaypointKind::Ap;
};

enum class PathRule { None, Direct, Rule1, Rule2, Scenario2 };

const char* to_string(PathRule rule);

// Collision-free (or provably not) waypoint sequence between the APs of two
// MPs. Waypoints always start and end with the APs; SMPs sit in between.
// Infeasible paths carry transition_time == A_inf and keep just the two APs.
struct LocalPath {
    std::string from_mp;
    std::string to_mp;
    std::vector<Waypoint> waypoints;
    bool feasible = false;
    int smp_count = 0;
    PathRule rule = PathRule::None;
    int scenario2_direction = -1;  // index into perpendicular_directions, Scenario2 only
    double transition_time = 0.0;  // seconds at cfg speed; A_inf when infeasible
    int iterations_used = 0;       // SMP-generation iterations consumed (<= k0)
};

double polyline_length(std::span<const Waypoint> waypoints);

// A leg endpoint: the AP the probe actually travels through plus the normal
// steering SMP generation. For real MPs the AP is approach_point(mp, d);
// the tour depot passes its park position directly with the peer's normal
// (the depot has no surface of its own).
struct PathEndpoint {
    Point3 ap;
    UnitVec3 normal;
    std::string id;
};

PathEndpoint endpoint_of(const MeasurementPoint& mp, const PlanConfig& cfg);

LocalPath plan_between(const PathEndpoint& from, const PathEndpoint& to,
                       const NodeCloud& cloud, const PlanConfig& cfg);

// Scenario 1, rule 1: one SMP, seeded at the AP midpoint, pushed along the
// normalized normal sum in steps of h until Q_i -> P -> Q_j clears or the
// budget runs out.
LocalPath rule1_scenario1(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                          const NodeCloud& cloud, const PlanConfig& cfg);

// Scenario 1, rule 2: two SMPs seeded at the APs, stepped alternately
// (departure side first) along the normal sum; Q_i -> P_i -> P_j -> Q_j is
// retested after every step.
LocalPath rule2_scenario1(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                          const NodeCloud& cloud, const PlanConfig& cfg);

// Scenario 2 (opposite normals): both SMPs slide together along each of the
// sideways directions perpendicular to mp_i's normal; the fastest feasible
// direction wins.
LocalPath scenario2(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                    const NodeCloud& cloud, const PlanConfig& cfg);

// Full dispatch: direct segment if clear, otherwise rule 1 + rule 2 (normals
// not opposite) or scenario 2 (opposite), keeping the fastest feasible
// candidate. Infeasibility is a value, not an error.
LocalPath plan_local_path(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                          const NodeCloud& cloud, const PlanConfig& cfg);

}  // namespace cmmpath

#endif
