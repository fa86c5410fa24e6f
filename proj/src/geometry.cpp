#include "cmmpath/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmmpath {

UnitVec3 unit(const Vec3& v) {
    const double n = v.norm();
    if (n < kUnitTol) throw std::invalid_argument("cannot normalize near-zero vector");
    return {v.x / n, v.y / n, v.z / n};
}

std::optional<UnitVec3> unit_within(const Vec3& v, double norm_tol) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > norm_tol) return std::nullopt;
    return UnitVec3{v.x / n, v.y / n, v.z / n};
}

Point3 approach_point(const MeasurementPoint& mp, double d) {
    return mp.position + d * mp.normal.vec();
}

double point_segment_distance(const Point3& p, const Point3& a, const Point3& b) {
    const Vec3 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

std::optional<UnitVec3> normal_sum_direction(const UnitVec3& n_i, const UnitVec3& n_j) {
    const Vec3 sum = n_i.vec() + n_j.vec();
    if (sum.norm() < kOppositeSumTol) return std::nullopt;
    return unit(sum);
}

std::vector<UnitVec3> perpendicular_directions(const UnitVec3& n) {
    const double i = n.x, j = n.y, k = n.z;
    const Vec3 candidates[6] = {
        {-j, i, 0.0}, {-k, 0.0, i}, {0.0, -k, j},
        {j, -i, 0.0}, {k, 0.0, -i}, {0.0, k, -j},
    };
    std::vector<UnitVec3> out;
    out.reserve(6);
    for (const Vec3& c : candidates) {
        if (c.norm() < kUnitTol) continue;
        out.push_back(unit(c));
    }
    return out;
}

double angle_between(const UnitVec3& u, const UnitVec3& v) {
    const double d = std::clamp(u.dot(v), -1.0, 1.0);
    return std::acos(d) * 180.0 / M_PI;
}

}  // namespace cmmpath
