#ifndef CMMPATH_GEOMETRY_HPP
#define CMMPATH_GEOMETRY_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace cmmpath {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double squared_norm() const { return dot(*this); }

    bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Positions are in mm throughout.
using Point3 = Vec3;

constexpr double kUnitTol = 1e-9;

// Direction of unit length (components are dimensionless).
// Construct through unit(), which normalizes, or unit_within(), which
// additionally rejects inputs whose norm is off by more than a tolerance.
struct UnitVec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    Vec3 vec() const { return {x, y, z}; }
    UnitVec3 negated() const { return {-x, -y, -z}; }
    double dot(const UnitVec3& o) const { return x * o.x + y * o.y + z * o.z; }
};

// Normalizes v. Throws std::invalid_argument when |v| < 1e-9.
UnitVec3 unit(const Vec3& v);

// Accepts v only if |norm(v) - 1| <= norm_tol, then renormalizes.
std::optional<UnitVec3> unit_within(const Vec3& v, double norm_tol);

struct MeasurementPoint {
    Point3 position;
    UnitVec3 normal;
    std::string id;
};

// AP located a distance d from the MP along its surface normal.
Point3 approach_point(const MeasurementPoint& mp, double d);

// Euclidean distance from p to the closest point of segment [a,b].
// Degenerate segments (a == b) fall back to point-to-point distance.
double point_segment_distance(const Point3& p, const Point3& a, const Point3& b);

// Normals count as opposite when the angle between them exceeds 179.9 deg,
// i.e. the norm of their sum drops below 2*cos(179.9deg/2).
inline const double kOppositeSumTol = 2.0 * std::cos(179.9 / 2.0 * M_PI / 180.0);

// Normalized sum of the two surface normals; nullopt signals the
// opposite-normal case that needs sideways escape directions instead.
std::optional<UnitVec3> normal_sum_direction(const UnitVec3& n_i, const UnitVec3& n_j);

// The six sideways escape directions perpendicular to n:
// (-J,I,0), (-K,0,I), (0,-K,J), (J,-I,0), (K,0,-I), (0,K,-J).
// Zero vectors (axis-aligned n degenerates two of them) are dropped,
// survivors are normalized, listed order is kept. Result has 4 or 6 entries.
std::vector<UnitVec3> perpendicular_directions(const UnitVec3& n);

// Angle between two unit directions in degrees, in [0, 180].
double angle_between(const UnitVec3& u, const UnitVec3& v);

}  // namespace cmmpath

#endif
