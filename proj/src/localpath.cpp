#include "cmmpath/localpath.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmmpath {

const char* to_string(PathRule rule) {
    switch (rule) {
        case PathRule::None: return "none";
        case PathRule::Direct: return "direct";
        case PathRule::Rule1: return "rule1";
        case PathRule::Rule2: return "rule2";
        case PathRule::Scenario2: return "scenario2";
    }
    return "none";
}

double polyline_length(std::span<const Waypoint> waypoints) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        len += (waypoints[i + 1].position - waypoints[i].position).norm();
    return len;
}

PathEndpoint endpoint_of(const MeasurementPoint& mp, const PlanConfig& cfg) {
    return {approach_point(mp, cfg.approach_dist), mp.normal, mp.id};
}

namespace {

bool polyline_clear(const NodeCloud& cloud, std::span<const Point3> pts, const PlanConfig& cfg) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (segment_collides(cloud, pts[i], pts[i + 1], cfg.eps(), cfg.clearance).collides)
            return false;
    }
    return true;
}

LocalPath make_feasible(const PathEndpoint& from, const PathEndpoint& to,
                        std::vector<Waypoint> waypoints, PathRule rule, int iterations,
                        const PlanConfig& cfg) {
    LocalPath p;
    p.from_mp = from.id;
    p.to_mp = to.id;
    p.waypoints = std::move(waypoints);
    p.feasible = true;
    p.smp_count = static_cast<int>(p.waypoints.size()) - 2;
    p.rule = rule;
    p.iterations_used = iterations;
    p.transition_time = polyline_length(p.waypoints) / cfg.speed_mm_s;
    return p;
}

LocalPath make_infeasible(const PathEndpoint& from, const PathEndpoint& to, PathRule rule,
                          const PlanConfig& cfg) {
    LocalPath p;
    p.from_mp = from.id;
    p.to_mp = to.id;
    p.waypoints = {{from.ap, WaypointKind::Ap}, {to.ap, WaypointKind::Ap}};
    p.feasible = false;
    p.rule = rule;
    p.iterations_used = cfg.max_steps;
    p.transition_time = cfg.time_inf;
    return p;
}

UnitVec3 scenario1_direction(const PathEndpoint& from, const PathEndpoint& to) {
    auto dir = normal_sum_direction(from.normal, to.normal);
    if (!dir) throw std::invalid_argument("scenario-1 rule called with opposite normals");
    return *dir;
}

LocalPath rule1_impl(const PathEndpoint& from, const PathEndpoint& to, const NodeCloud& cloud,
                     const PlanConfig& cfg) {
    const Vec3 step = scenario1_direction(from, to).vec() * cfg.step_len;
    const Point3 midpoint = (from.ap + to.ap) * 0.5;

    for (int k = 0; k <= cfg.max_steps; ++k) {
        const Point3 smp = midpoint + static_cast<double>(k) * step;
        const Point3 pts[3] = {from.ap, smp, to.ap};
        if (polyline_clear(cloud, pts, cfg)) {
            return make_feasible(from, to,
                                 {{from.ap, WaypointKind::Ap},
                                  {smp, WaypointKind::Smp},
                                  {to.ap, WaypointKind::Ap}},
                                 PathRule::Rule1, k, cfg);
        }
    }
    return make_infeasible(from, to, PathRule::Rule1, cfg);
}

LocalPath rule2_impl(const PathEndpoint& from, const PathEndpoint& to, const NodeCloud& cloud,
                     const PlanConfig& cfg) {
    const Vec3 step = scenario1_direction(from, to).vec() * cfg.step_len;

    // steps[0] lifts the SMP above the departure AP, steps[1] the arrival
    // one; the departure side moves first.
    int steps[2] = {0, 0};
    auto attempt = [&]() -> bool {
        const Point3 p_i = from.ap + static_cast<double>(steps[0]) * step;
        const Point3 p_j = to.ap + static_cast<double>(steps[1]) * step;
        const Point3 pts[4] = {from.ap, p_i, p_j, to.ap};
        return polyline_clear(cloud, pts, cfg);
    };
    auto finish = [&]() -> LocalPath {
        std::vector<Waypoint> wps;
        wps.push_back({from.ap, WaypointKind::Ap});
        // SMPs still sitting on their AP would only add zero-length segments.
        if (steps[0] > 0)
            wps.push_back({from.ap + static_cast<double>(steps[0]) * step, WaypointKind::Smp});
        if (steps[1] > 0)
            wps.push_back({to.ap + static_cast<double>(steps[1]) * step, WaypointKind::Smp});
        wps.push_back({to.ap, WaypointKind::Ap});
        const PathRule rule =
            (steps[0] == 0 && steps[1] == 0) ? PathRule::Direct : PathRule::Rule2;
        return make_feasible(from, to, std::move(wps), rule, std::max(steps[0], steps[1]), cfg);
    };

    if (attempt()) return finish();
    while (steps[0] < cfg.max_steps || steps[1] < cfg.max_steps) {
        for (int side = 0; side < 2; ++side) {
            if (steps[side] >= cfg.max_steps) continue;
            ++steps[side];
            if (attempt()) return finish();
        }
    }
    return make_infeasible(from, to, PathRule::Rule2, cfg);
}

LocalPath scenario2_impl(const PathEndpoint& from, const PathEndpoint& to,
                         const NodeCloud& cloud, const PlanConfig& cfg) {
    const auto dirs = perpendicular_directions(from.normal);

    LocalPath best = make_infeasible(from, to, PathRule::Scenario2, cfg);
    for (std::size_t u = 0; u < dirs.size(); ++u) {
        const Vec3 step = dirs[u].vec() * cfg.step_len;
        for (int k = 1; k <= cfg.max_steps; ++k) {
            const Point3 p_i = from.ap + static_cast<double>(k) * step;
            const Point3 p_j = to.ap + static_cast<double>(k) * step;
            const Point3 pts[4] = {from.ap, p_i, p_j, to.ap};
            if (!polyline_clear(cloud, pts, cfg)) continue;
            LocalPath cand = make_feasible(from, to,
                                           {{from.ap, WaypointKind::Ap},
                                            {p_i, WaypointKind::Smp},
                                            {p_j, WaypointKind::Smp},
                                            {to.ap, WaypointKind::Ap}},
                                           PathRule::Scenario2, k, cfg);
            cand.scenario2_direction = static_cast<int>(u);
            if (!best.feasible || cand.transition_time < best.transition_time)
                best = std::move(cand);
            break;  // larger offsets along the same direction only get longer
        }
    }
    return best;
}

}  // namespace

LocalPath rule1_scenario1(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                          const NodeCloud& cloud, const PlanConfig& cfg) {
    return rule1_impl(endpoint_of(mp_i, cfg), endpoint_of(mp_j, cfg), cloud, cfg);
}

LocalPath rule2_scenario1(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                          const NodeCloud& cloud, const PlanConfig& cfg) {
    return rule2_impl(endpoint_of(mp_i, cfg), endpoint_of(mp_j, cfg), cloud, cfg);
}

LocalPath scenario2(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                    const NodeCloud& cloud, const PlanConfig& cfg) {
    return scenario2_impl(endpoint_of(mp_i, cfg), endpoint_of(mp_j, cfg), cloud, cfg);
}

LocalPath plan_between(const PathEndpoint& from, const PathEndpoint& to, const NodeCloud& cloud,
                       const PlanConfig& cfg) {
    if (from.id == to.id) throw std::invalid_argument("plan_between: identical endpoints");

    if (!segment_collides(cloud, from.ap, to.ap, cfg.eps(), cfg.clearance).collides) {
        return make_feasible(from, to,
                             {{from.ap, WaypointKind::Ap}, {to.ap, WaypointKind::Ap}},
                             PathRule::Direct, 0, cfg);
    }

    LocalPath best;
    if (!normal_sum_direction(from.normal, to.normal)) {
        best = scenario2_impl(from, to, cloud, cfg);
    } else {
        best = rule1_impl(from, to, cloud, cfg);
        LocalPath alt = rule2_impl(from, to, cloud, cfg);
        if (alt.feasible && (!best.feasible || alt.transition_time < best.transition_time))
            best = std::move(alt);
    }
    if (!best.feasible) best = make_infeasible(from, to, PathRule::None, cfg);
    return best;
}

LocalPath plan_local_path(const MeasurementPoint& mp_i, const MeasurementPoint& mp_j,
                          const NodeCloud& cloud, const PlanConfig& cfg) {
    return plan_between(endpoint_of(mp_i, cfg), endpoint_of(mp_j, cfg), cloud, cfg);
}

}  // namespace cmmpath
