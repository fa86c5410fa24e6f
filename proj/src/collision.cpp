#include "cmmpath/collision.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace cmmpath {

namespace {

struct Box {
    Vec3 lo, hi;
    bool contains(const Point3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
               p.z <= hi.z;
    }
};

Box volume_box(const Point3& a, const Point3& b, double eps) {
    return {{std::min(a.x, b.x) - eps, std::min(a.y, b.y) - eps, std::min(a.z, b.z) - eps},
            {std::max(a.x, b.x) + eps, std::max(a.y, b.y) + eps, std::max(a.z, b.z) + eps}};
}

CollisionResult scan_candidates(const NodeCloud& cloud, const Point3& a, const Point3& b,
                                double d0, std::span<const std::uint32_t> candidates) {
    CollisionResult r;
    r.nodes_checked = candidates.size();
    const auto& nodes = cloud.nodes();
    for (std::uint32_t idx : candidates) {
        const double dist = point_segment_distance(nodes[idx], a, b);
        if (dist < r.min_distance) {
            r.min_distance = dist;
            r.nearest_node = nodes[idx];
        }
    }
    r.collides = r.min_distance <= d0;
    return r;
}

}  // namespace

std::vector<std::uint32_t> searching_volume(const NodeCloud& cloud, const Point3& a,
                                            const Point3& b, double eps) {
    if (eps < 0.0) throw std::invalid_argument("searching_volume: eps must be >= 0");
    const Box box = volume_box(a, b, eps);
    return cloud.grid().query_box(cloud.nodes(), box.lo, box.hi);
}

CollisionResult segment_collides(const NodeCloud& cloud, const Point3& a, const Point3& b,
                                 double eps, double d0) {
    if (!(d0 > 0.0)) throw std::invalid_argument("segment_collides: d0 must be > 0");
    const auto candidates = searching_volume(cloud, a, b, std::max(eps, d0));
    return scan_candidates(cloud, a, b, d0, candidates);
}

CollisionResult segment_collides_reference(const NodeCloud& cloud, const Point3& a,
                                           const Point3& b, double eps, double d0) {
    if (!(d0 > 0.0)) throw std::invalid_argument("segment_collides_reference: d0 must be > 0");
    const Box box = volume_box(a, b, std::max(eps, d0));
    std::vector<std::uint32_t> candidates;
    const auto& nodes = cloud.nodes();
    for (std::uint32_t i = 0; i < nodes.size(); ++i)
        if (box.contains(nodes[i])) candidates.push_back(i);
    return scan_candidates(cloud, a, b, d0, candidates);
}

std::vector<CollisionResult> polyline_collides(const NodeCloud& cloud,
                                               std::span<const Point3> waypoints, double eps,
                                               double d0) {
    if (waypoints.size() < 2)
        throw std::invalid_argument("polyline_collides: need at least 2 waypoints");
    std::vector<CollisionResult> out;
    out.reserve(waypoints.size() - 1);
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
        out.push_back(segment_collides(cloud, waypoints[i], waypoints[i + 1], eps, d0));
    return out;
}

}  // namespace cmmpath
