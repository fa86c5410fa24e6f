#include "cmmpath/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cmmpath/io_util.hpp"
#include "json.hpp"

namespace cmmpath {

// ---------------------------------------------------------------------------
// GridIndex

GridIndex::GridIndex(const std::vector<Point3>& points, double cell_size)
    : cell_(std::max(cell_size, 1e-6)) {
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        const Point3& p = points[i];
        Key k{cell_of(p.x), cell_of(p.y), cell_of(p.z)};
        cells_[k].push_back(i);
        if (empty_) {
            min_key_ = max_key_ = k;
            empty_ = false;
        } else {
            min_key_.ix = std::min(min_key_.ix, k.ix);
            min_key_.iy = std::min(min_key_.iy, k.iy);
            min_key_.iz = std::min(min_key_.iz, k.iz);
            max_key_.ix = std::max(max_key_.ix, k.ix);
            max_key_.iy = std::max(max_key_.iy, k.iy);
            max_key_.iz = std::max(max_key_.iz, k.iz);
        }
    }
}

std::int64_t GridIndex::cell_of(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_));
}

void GridIndex::query_box(const std::vector<Point3>& points, const Vec3& lo, const Vec3& hi,
                          std::vector<std::uint32_t>& out) const {
    out.clear();
    if (empty_) return;
    // Clamp the cell range to occupied cells so large boxes stay cheap.
    const std::int64_t x0 = std::max(cell_of(lo.x), min_key_.ix);
    const std::int64_t x1 = std::min(cell_of(hi.x), max_key_.ix);
    const std::int64_t y0 = std::max(cell_of(lo.y), min_key_.iy);
    const std::int64_t y1 = std::min(cell_of(hi.y), max_key_.iy);
    const std::int64_t z0 = std::max(cell_of(lo.z), min_key_.iz);
    const std::int64_t z1 = std::min(cell_of(hi.z), max_key_.iz);
    for (std::int64_t ix = x0; ix <= x1; ++ix)
        for (std::int64_t iy = y0; iy <= y1; ++iy)
            for (std::int64_t iz = z0; iz <= z1; ++iz) {
                auto it = cells_.find(Key{ix, iy, iz});
                if (it == cells_.end()) continue;
                for (std::uint32_t idx : it->second) {
                    const Point3& p = points[idx];
                    if (p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
                        p.z >= lo.z && p.z <= hi.z)
                        out.push_back(idx);
                }
            }
}

std::vector<std::uint32_t> GridIndex::query_box(const std::vector<Point3>& points,
                                                const Vec3& lo, const Vec3& hi) const {
    std::vector<std::uint32_t> out;
    query_box(points, lo, hi, out);
    return out;
}

NodeCloud::NodeCloud(std::vector<Point3> nodes, double element_size, double cell_size)
    : nodes_(std::move(nodes)), element_size_(element_size), grid_(nodes_, cell_size) {}

// ---------------------------------------------------------------------------
// File ingestion

namespace {

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& what) {
    std::ostringstream ss;
    ss << path << ":" << line << ": " << what;
    throw std::runtime_error(ss.str());
}

// Calls fn(line_number, trimmed_line) for every non-blank line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        std::string_view line = trim(text.substr(pos, end - pos));
        if (!line.empty()) fn(line_no, line);
        pos = end + 1;
    }
}

Vec3 vec_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected [x,y,z] array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

NodeCloud load_nodes(const std::string& path, NodeFormat format, const PlanConfig& cfg) {
    std::vector<Point3> nodes;
    const std::string text = read_file(path);
    if (format == NodeFormat::Csv) {
        for_each_line(text, [&](std::size_t line_no, std::string_view line) {
            const auto fields = split_fields(line);
            if (fields.size() != 3) fail_at(path, line_no, "expected 3 fields x,y,z");
            Point3 p;
            double* comps[3] = {&p.x, &p.y, &p.z};
            for (int i = 0; i < 3; ++i) {
                if (!parse_double(fields[i], *comps[i]) || !std::isfinite(*comps[i]))
                    fail_at(path, line_no, "bad number '" + std::string(trim(fields[i])) + "'");
            }
            nodes.push_back(p);
        });
    } else {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(path + ": " + e.what());
        }
        if (!doc.is_array()) throw std::runtime_error(path + ": expected a JSON array of nodes");
        for (const auto& item : doc) {
            Point3 p{item.at("x").get<double>(), item.at("y").get<double>(),
                     item.at("z").get<double>()};
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
                throw std::runtime_error(path + ": non-finite node coordinate");
            nodes.push_back(p);
        }
    }
    if (nodes.empty()) throw std::runtime_error(path + ": no nodes found");
    return NodeCloud(std::move(nodes), cfg.element_size,
                     std::max(cfg.element_size, cfg.clearance));
}

std::vector<MeasurementPoint> load_mps(const std::string& path) {
    std::vector<MeasurementPoint> mps;
    std::set<std::string, std::less<>> seen;
    const std::string text = read_file(path);
    for_each_line(text, [&](std::size_t line_no, std::string_view line) {
        const auto fields = split_fields(line);
        if (fields.size() != 7) fail_at(path, line_no, "expected 7 fields id,x,y,z,I,J,K");
        MeasurementPoint mp;
        mp.id = std::string(trim(fields[0]));
        if (mp.id.empty()) fail_at(path, line_no, "empty id");
        double vals[6];
        for (int i = 0; i < 6; ++i) {
            if (!parse_double(fields[i + 1], vals[i]) || !std::isfinite(vals[i]))
                fail_at(path, line_no, "bad number '" + std::string(trim(fields[i + 1])) + "'");
        }
        mp.position = {vals[0], vals[1], vals[2]};
        auto n = unit_within({vals[3], vals[4], vals[5]}, 1e-3);
        if (!n) fail_at(path, line_no, "normal (" + std::string(trim(fields[4])) + "," +
                                           std::string(trim(fields[5])) + "," +
                                           std::string(trim(fields[6])) +
                                           ") is not unit length within 1e-3");
        mp.normal = *n;
        if (!seen.insert(mp.id).second) fail_at(path, line_no, "duplicate id '" + mp.id + "'");
        mps.push_back(std::move(mp));
    });
    if (mps.empty()) throw std::runtime_error(path + ": no measurement points found");
    return mps;
}

void save_nodes_csv(const std::vector<Point3>& nodes, const std::string& path) {
    std::string out;
    out.reserve(nodes.size() * 24);
    for (const Point3& p : nodes) {
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += ',';
        out += format_double(p.z);
        out += '\n';
    }
    write_file(path, out);
}

void save_mps_csv(const std::vector<MeasurementPoint>& mps, const std::string& path) {
    std::string out;
    for (const MeasurementPoint& mp : mps) {
        out += mp.id;
        for (double v : {mp.position.x, mp.position.y, mp.position.z,
                         mp.normal.x, mp.normal.y, mp.normal.z}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file(path, out);
}

// ---------------------------------------------------------------------------
// Synthetic scene generation

namespace {

// Portable bounded draw (avoids the implementation-defined distributions).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

struct PrimitiveNodes {
    std::vector<Point3> points;
    std::vector<UnitVec3> normals;  // outward normal per node
    double spacing = 0.0;
};

PrimitiveNodes sample_panel(const PanelSpec& p, double default_spacing) {
    const double s = p.spacing > 0.0 ? p.spacing : default_spacing;
    if (s <= 0.0 || p.width <= 0.0 || p.height <= 0.0)
        throw std::runtime_error("panel: extents and spacing must be positive");
    Vec3 u_raw;
    if (p.u_hint) {
        const Vec3 n = p.normal.vec();
        u_raw = *p.u_hint - n * p.u_hint->dot(n);
        if (u_raw.norm() < kUnitTol)
            throw std::runtime_error("panel: u_axis is parallel to the normal");
    } else {
        u_raw = perpendicular_directions(p.normal).front().vec();
    }
    const UnitVec3 u = unit(u_raw);
    const UnitVec3 v = unit(p.normal.vec().cross(u.vec()));

    const int nu = static_cast<int>(std::floor(p.width / s + 1e-9)) + 1;
    const int nv = static_cast<int>(std::floor(p.height / s + 1e-9)) + 1;
    PrimitiveNodes out;
    out.spacing = s;
    out.points.reserve(static_cast<std::size_t>(nu) * nv);
    for (int iu = 0; iu < nu; ++iu) {
        for (int iv = 0; iv < nv; ++iv) {
            const double cu = -p.width / 2.0 + iu * s;
            const double cv = -p.height / 2.0 + iv * s;
            if (p.hole && std::abs(cu - p.hole->cu) < p.hole->width / 2.0 &&
                std::abs(cv - p.hole->cv) < p.hole->height / 2.0)
                continue;
            out.points.push_back(p.center + cu * u.vec() + cv * v.vec());
            out.normals.push_back(p.normal);
        }
    }
    return out;
}

PrimitiveNodes sample_cyl_patch(const CylPatchSpec& c, double default_spacing) {
    const double s = c.spacing > 0.0 ? c.spacing : default_spacing;
    if (s <= 0.0 || c.radius <= 0.0 || c.length <= 0.0)
        throw std::runtime_error("cyl_panel: extents and spacing must be positive");
    if (c.angle_end_deg <= c.angle_start_deg)
        throw std::runtime_error("cyl_panel: angle_end_deg must exceed angle_start_deg");
    const UnitVec3 e1 = perpendicular_directions(c.axis).front();
    const UnitVec3 e2 = unit(c.axis.vec().cross(e1.vec()));

    const double a0 = c.angle_start_deg * M_PI / 180.0;
    const double a1 = c.angle_end_deg * M_PI / 180.0;
    const double dtheta = s / c.radius;  // arc-length spacing == s
    const int ntheta = static_cast<int>(std::floor((a1 - a0) / dtheta + 1e-9)) + 1;
    const int ns = static_cast<int>(std::floor(c.length / s + 1e-9)) + 1;
    PrimitiveNodes out;
    out.spacing = s;
    out.points.reserve(static_cast<std::size_t>(ntheta) * ns);
    for (int it = 0; it < ntheta; ++it) {
        const double theta = a0 + it * dtheta;
        const Vec3 radial = std::cos(theta) * e1.vec() + std::sin(theta) * e2.vec();
        for (int is = 0; is < ns; ++is) {
            const double sv = -c.length / 2.0 + is * s;
            out.points.push_back(c.center + c.radius * radial + sv * c.axis.vec());
            out.normals.push_back(unit(radial));
        }
    }
    return out;
}

}  // namespace

std::pair<NodeCloud, std::vector<MeasurementPoint>>
generate_scene(const SceneSpec& spec, std::uint64_t seed, const PlanConfig& cfg) {
    if (spec.primitives.empty()) throw std::runtime_error("scene spec has no primitives");
    std::mt19937_64 rng(seed);
    std::vector<Point3> nodes;
    std::vector<MeasurementPoint> mps;
    double max_spacing = 0.0;

    for (std::size_t pi = 0; pi < spec.primitives.size(); ++pi) {
        PrimitiveNodes prim;
        int mp_count = 0;
        if (const auto* panel = std::get_if<PanelSpec>(&spec.primitives[pi])) {
            prim = sample_panel(*panel, spec.default_spacing);
            mp_count = panel->mp_count;
        } else {
            const auto& cyl = std::get<CylPatchSpec>(spec.primitives[pi]);
            prim = sample_cyl_patch(cyl, spec.default_spacing);
            mp_count = cyl.mp_count;
        }
        max_spacing = std::max(max_spacing, prim.spacing);
        if (mp_count < 0 || static_cast<std::size_t>(mp_count) > prim.points.size())
            throw std::runtime_error("primitive " + std::to_string(pi) +
                                     ": mp_count exceeds available nodes");
        // MPs sit exactly on grid nodes; rejection keeps them distinct.
        std::set<std::uint64_t> taken;
        for (int k = 0; k < mp_count; ++k) {
            std::uint64_t idx;
            do {
                idx = bounded(rng, prim.points.size());
            } while (!taken.insert(idx).second);
            MeasurementPoint mp;
            mp.position = prim.points[idx];
            mp.normal = prim.normals[idx];
            mp.id = "p" + std::to_string(pi) + "_" + std::to_string(k);
            mps.push_back(std::move(mp));
        }
        nodes.insert(nodes.end(), prim.points.begin(), prim.points.end());
    }

    NodeCloud cloud(std::move(nodes), max_spacing, std::max(max_spacing, cfg.clearance));
    return {std::move(cloud), std::move(mps)};
}

SceneSpec load_scene_spec(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    SceneSpec spec;
    spec.default_spacing = doc.value("spacing", 4.0);
    if (spec.default_spacing <= 0.0) throw std::runtime_error(path + ": spacing must be > 0");
    if (!doc.contains("primitives") || !doc["primitives"].is_array())
        throw std::runtime_error(path + ": missing primitives array");
    try {
        for (const auto& j : doc["primitives"]) {
            const std::string type = j.at("type").get<std::string>();
            if (type == "panel" || type == "wall") {
                PanelSpec p;
                p.center = vec_from_json(j.at("center"));
                p.normal = unit(vec_from_json(j.at("normal")));
                p.width = j.at("width").get<double>();
                p.height = j.at("height").get<double>();
                p.spacing = j.value("spacing", 0.0);
                p.mp_count = j.value("mp_count", 0);
                if (j.contains("hole")) {
                    const auto& h = j["hole"];
                    p.hole = HoleRect{h.value("cu", 0.0), h.value("cv", 0.0),
                                      h.at("width").get<double>(),
                                      h.at("height").get<double>()};
                }
                if (j.contains("u_axis")) p.u_hint = vec_from_json(j["u_axis"]);
                spec.primitives.emplace_back(std::move(p));
            } else if (type == "cyl_panel") {
                CylPatchSpec c;
                c.center = vec_from_json(j.at("center"));
                c.axis = unit(vec_from_json(j.at("axis")));
                c.radius = j.at("radius").get<double>();
                c.angle_start_deg = j.value("angle_start_deg", 0.0);
                c.angle_end_deg = j.value("angle_end_deg", 90.0);
                c.length = j.at("length").get<double>();
                c.spacing = j.value("spacing", 0.0);
                c.mp_count = j.value("mp_count", 0);
                spec.primitives.emplace_back(std::move(c));
            } else {
                throw std::runtime_error("unknown primitive type '" + type + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return spec;
}

}  // namespace cmmpath
