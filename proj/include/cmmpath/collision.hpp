#ifndef CMMPATH_COLLISION_HPP
#define CMMPATH_COLLISION_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cmmpath/geometry.hpp"
#include "cmmpath/scene.hpp"

namespace cmmpath {

struct CollisionResult {
    bool collides = false;
    // Minimum distance from the segment to any node inside the searching
    // volume; +inf when the volume is empty.
    double min_distance = std::numeric_limits<double>::infinity();
    std::optional<Point3> nearest_node;
    std::size_t nodes_checked = 0;
};

// Node indices inside the axis-aligned box spanned by a and b, inflated by
// eps on every side (bounds inclusive).
std::vector<std::uint32_t> searching_volume(const NodeCloud& cloud, const Point3& a,
                                            const Point3& b, double eps);

// Distance test of segment [a,b] against the nodes in its searching volume.
// A move collides when some node is within d0 of the segment. eps is raised
// to at least d0 so the volume cannot hide a colliding node.
CollisionResult segment_collides(const NodeCloud& cloud, const Point3& a, const Point3& b,
                                 double eps, double d0);

// Serial reference: same contract as segment_collides but scans every node
// and applies the box inequalities directly, bypassing the grid index.
// Kept as the oracle the indexed path is validated against.
CollisionResult segment_collides_reference(const NodeCloud& cloud, const Point3& a,
                                           const Point3& b, double eps, double d0);

// One CollisionResult per consecutive waypoint pair. The polyline is
// collision-free iff no entry collides.
std::vector<CollisionResult> polyline_collides(const NodeCloud& cloud,
                                               std::span<const Point3> waypoints, double eps,
                                               double d0);

}  // namespace cmmpath

#endif
