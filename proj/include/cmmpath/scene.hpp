#ifndef CMMPATH_SCENE_HPP
#define CMMPATH_SCENE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cmmpath/config.hpp"
#include "cmmpath/geometry.hpp"

namespace cmmpath {

// Uniform hash grid over a fixed point set. Cells are cubes of size cell;
// box queries return exactly the points inside the (inclusive) box. The
// grid stores indices only, so callers pass the same point vector the index
// was built from.
class GridIndex {
public:
    GridIndex() = default;
    GridIndex(const std::vector<Point3>& points, double cell_size);

    // Indices of all points p with lo <= p <= hi componentwise.
    void query_box(const std::vector<Point3>& points, const Vec3& lo, const Vec3& hi,
                   std::vector<std::uint32_t>& out) const;
    std::vector<std::uint32_t> query_box(const std::vector<Point3>& points,
                                         const Vec3& lo, const Vec3& hi) const;

    double cell_size() const { return cell_; }

private:
    struct Key {
        std::int64_t ix, iy, iz;
        bool operator==(const Key& o) const { return ix == o.ix && iy == o.iy && iz == o.iz; }
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = 1469598103934665603ull;
            for (std::int64_t c : {k.ix, k.iy, k.iz}) {
                h ^= static_cast<std::uint64_t>(c);
                h *= 1099511628211ull;
            }
            return static_cast<std::size_t>(h);
        }
    };

    std::int64_t cell_of(double v) const;

    double cell_ = 1.0;
    bool empty_ = true;
    Key min_key_{0, 0, 0}, max_key_{0, 0, 0};
    std::unordered_map<Key, std::vector<std::uint32_t>, KeyHash> cells_;
};

// Discretized surface nodes used for collision tests. Immutable once built;
// concurrent read-only queries are safe.
class NodeCloud {
public:
    NodeCloud() = default;
    // cell_size should be max(element_size, D0) so that typical searching
    // volumes touch few cells.
    NodeCloud(std::vector<Point3> nodes, double element_size, double cell_size);

    const std::vector<Point3>& nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    double element_size() const { return element_size_; }
    const GridIndex& grid() const { return grid_; }

    // Indices of nodes inside the inclusive box [lo, hi].
    void query_box(const Vec3& lo, const Vec3& hi, std::vector<std::uint32_t>& out) const {
        grid_.query_box(nodes_, lo, hi, out);
    }
    std::vector<std::uint32_t> query_box(const Vec3& lo, const Vec3& hi) const {
        return grid_.query_box(nodes_, lo, hi);
    }

private:
    std::vector<Point3> nodes_;
    double element_size_ = 4.0;
    GridIndex grid_;
};

enum class NodeFormat { Csv, Json };

// Node file ingestion.
//   CSV: one  x,y,z  per line, mm, no header.
//   JSON: array of {"x":..,"y":..,"z":..} objects.
// Throws std::runtime_error with "<path>:<line>:" prefixes on parse errors
// and on empty files.
NodeCloud load_nodes(const std::string& path, NodeFormat format, const PlanConfig& cfg);

// MP CSV: one  id,x,y,z,I,J,K  per line. Normals within 1e-3 of unit length
// are renormalized; anything further off is an error, as are duplicate ids.
std::vector<MeasurementPoint> load_mps(const std::string& path);

void save_nodes_csv(const std::vector<Point3>& nodes, const std::string& path);
void save_mps_csv(const std::vector<MeasurementPoint>& mps, const std::string& path);

// ---------------------------------------------------------------------------
// Synthetic scenes. Desk-scale stand-ins for meshed CAD surfaces: flat
// panels and walls (optionally holed) plus cylindrical patches, each sampled
// on a square grid of the requested spacing.

struct HoleRect {
    double cu = 0.0, cv = 0.0;  // hole center in panel plane coords
    double width = 0.0, height = 0.0;
};

struct PanelSpec {
    Point3 center;
    UnitVec3 normal;
    double width = 100.0;   // extent along the panel u axis
    double height = 100.0;  // extent along the panel v axis
    double spacing = 0.0;   // 0 -> SceneSpec default
    int mp_count = 0;
    std::optional<HoleRect> hole;
    std::optional<Vec3> u_hint;  // optional in-plane u axis
};

struct CylPatchSpec {
    Point3 center;
    UnitVec3 axis;
    double radius = 50.0;
    double angle_start_deg = 0.0;
    double angle_end_deg = 90.0;
    double length = 100.0;
    double spacing = 0.0;
    int mp_count = 0;
};

struct SceneSpec {
    double default_spacing = 4.0;
    std::vector<std::variant<PanelSpec, CylPatchSpec>> primitives;
};

// Parses the scene JSON documented in the README ("panel" / "wall" /
// "cyl_panel" primitives). Throws std::runtime_error on invalid specs.
SceneSpec load_scene_spec(const std::string& path);

// Deterministic for a fixed (spec, seed): nodes are sampled primitive by
// primitive, MPs are drawn from each primitive's own node grid with outward
// normals. cfg supplies the grid cell size (max(l, D0)).
std::pair<NodeCloud, std::vector<MeasurementPoint>>
generate_scene(const SceneSpec& spec, std::uint64_t seed, const PlanConfig& cfg);

}  // namespace cmmpath

#endif
