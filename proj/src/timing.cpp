#include "cmmpath/timing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cmmpath/io_util.hpp"

namespace cmmpath {

UnitVec3 StylusOrientation::direction() const {
    const double a = a_deg * M_PI / 180.0;
    const double b = b_deg * M_PI / 180.0;
    return unit({std::sin(a) * std::cos(b), std::sin(a) * std::sin(b), -std::cos(a)});
}

namespace {

double snap_to_grid(double deg) { return std::round(deg / kOrientationGridDeg) * kOrientationGridDeg; }

double wrap_half_turn(double deg) {
    double d = std::fmod(deg, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d <= -180.0) d += 360.0;
    return d;
}

}  // namespace

std::optional<StylusOrientation> required_orientation(const MeasurementPoint& mp,
                                                      const PlanConfig& cfg) {
    const UnitVec3 target = mp.normal.negated();  // stylus approaches against the normal
    // direction = (sinA cosB, sinA sinB, -cosA)  ->  cosA = -target.z
    const double a_raw = std::acos(std::clamp(-target.z, -1.0, 1.0)) * 180.0 / M_PI;
    const double sin_a = std::sqrt(std::max(0.0, target.x * target.x + target.y * target.y));
    const double b_raw = sin_a < 1e-12 ? 0.0 : std::atan2(target.y, target.x) * 180.0 / M_PI;

    StylusOrientation o;
    o.a_deg = snap_to_grid(a_raw);
    o.b_deg = wrap_half_turn(snap_to_grid(b_raw));
    if (o.a_deg > kMaxTiltDeg + 1e-9) return std::nullopt;
    if (o.a_deg < 0.0) o.a_deg = 0.0;
    if (angle_between(o.direction(), target) > cfg.theta_max_deg + 1e-9) return std::nullopt;
    return o;
}

double transition_time(const LocalPath& path, double v, double a_inf) {
    if (!(v > 0.0)) throw std::invalid_argument("transition_time: v must be > 0");
    if (!path.feasible) return a_inf;
    return polyline_length(path.waypoints) / v;
}

double rotation_time(const StylusOrientation& from, const StylusOrientation& to,
                     const UnitVec3& target_normal, const PlanConfig& cfg) {
    if (angle_between(from.direction(), target_normal.negated()) <= cfg.theta_max_deg)
        return 0.0;
    const double da = std::abs(to.a_deg - from.a_deg);
    const double db = std::abs(wrap_half_turn(to.b_deg - from.b_deg));
    if (da == 0.0 && db == 0.0) return 0.0;
    // Axes run sequentially, so the angles add.
    return (da + db) / cfg.omega_deg_s + cfg.pause_s;
}

// ---------------------------------------------------------------------------
// TimeMatrix

TimeMatrix::TimeMatrix(int mp_count, double a_inf) : m_(mp_count), a_inf_(a_inf) {
    if (mp_count < 0) throw std::invalid_argument("TimeMatrix: negative size");
    t_.assign(static_cast<std::size_t>(order()) * order(), 0.0);
    labels_.resize(m_);
    for (int i = 0; i < m_; ++i) labels_[i] = std::to_string(i + 1);
    legs_.resize(static_cast<std::size_t>(order()) * (order() - 1) / 2);
}

void TimeMatrix::set_labels(std::vector<std::string> labels) {
    if (static_cast<int>(labels.size()) != m_)
        throw std::invalid_argument("TimeMatrix: label count mismatch");
    labels_ = std::move(labels);
}

std::size_t TimeMatrix::pair_idx(int i, int q) const {
    if (i > q) std::swap(i, q);
    const std::size_t n = static_cast<std::size_t>(order());
    return static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + (q - i - 1);
}

const LegProvenance* TimeMatrix::leg(int i, int q) const {
    const auto& slot = legs_[pair_idx(i, q)];
    return slot ? &*slot : nullptr;
}

void TimeMatrix::set_leg(int i, int q, LegProvenance leg) {
    legs_[pair_idx(i, q)] = std::move(leg);
}

// ---------------------------------------------------------------------------
// Matrix construction

namespace {

struct BuildContext {
    std::span<const MeasurementPoint> mps;
    const NodeCloud* cloud;
    const PlanConfig* cfg;
    std::vector<std::optional<StylusOrientation>> orientations;  // per MP
};

// Endpoint for matrix node index (0 = depot at cfg.origin, which borrows the
// peer's normal since it has no surface of its own).
PathEndpoint node_endpoint(const BuildContext& ctx, int node, int peer) {
    const PlanConfig& cfg = *ctx.cfg;
    if (node == 0) {
        const UnitVec3 n = peer == 0 ? UnitVec3{0, 0, 1} : ctx.mps[peer - 1].normal;
        return {cfg.origin, n, kOriginId};
    }
    return endpoint_of(ctx.mps[node - 1], cfg);
}

LegProvenance plan_leg(const BuildContext& ctx, int i, int q) {
    const PlanConfig& cfg = *ctx.cfg;
    LegProvenance leg;

    const bool i_ok = i == 0 || ctx.orientations[i - 1].has_value();
    const bool q_ok = q == 0 || ctx.orientations[q - 1].has_value();
    const PathEndpoint from = node_endpoint(ctx, i, q);
    const PathEndpoint to = node_endpoint(ctx, q, i);

    if (!i_ok || !q_ok) {
        // The head cannot address one endpoint at all; the leg is unusable.
        leg.path.from_mp = from.id;
        leg.path.to_mp = to.id;
        leg.path.waypoints = {{from.ap, WaypointKind::Ap}, {to.ap, WaypointKind::Ap}};
        leg.path.feasible = false;
        leg.path.transition_time = cfg.time_inf;
        leg.transition_s = cfg.time_inf;
        leg.rotation_s = 0.0;
        return leg;
    }

    leg.path = plan_between(from, to, *ctx.cloud, cfg);
    leg.transition_s = transition_time(leg.path, cfg.speed_mm_s, cfg.time_inf);
    leg.rotation_s = (i == 0 || q == 0)
                         ? 0.0
                         : rotation_time(*ctx.orientations[i - 1], *ctx.orientations[q - 1],
                                         ctx.mps[q - 1].normal, cfg);
    return leg;
}

double leg_total(const LegProvenance& leg, const PlanConfig& cfg) {
    if (leg.transition_s >= cfg.time_inf) return cfg.time_inf;
    const double total = leg.transition_s + leg.rotation_s;
    return total > cfg.time_cap_s ? cfg.time_inf : total;
}

TimeMatrix assemble(const BuildContext& ctx, std::vector<LegProvenance> raw) {
    const PlanConfig& cfg = *ctx.cfg;
    const int n = static_cast<int>(ctx.mps.size()) + 1;
    TimeMatrix T(n - 1, cfg.time_inf);
    std::vector<std::string> labels;
    labels.reserve(ctx.mps.size());
    for (const auto& mp : ctx.mps) labels.push_back(mp.id);
    T.set_labels(std::move(labels));

    // Path inversion: both directions keep the cheaper leg.
    for (int i = 0; i < n; ++i) {
        for (int q = i + 1; q < n; ++q) {
            const LegProvenance& fwd = raw[static_cast<std::size_t>(i) * n + q];
            const LegProvenance& rev = raw[static_cast<std::size_t>(q) * n + i];
            const double t_fwd = leg_total(fwd, cfg);
            const double t_rev = leg_total(rev, cfg);
            const LegProvenance& best = t_fwd <= t_rev ? fwd : rev;
            const double t = std::min(t_fwd, t_rev);
            T.set(i, q, t);
            T.set(q, i, t);
            T.set_leg(i, q, best);
        }
    }
    return T;
}

}  // namespace

TimeMatrix build_time_matrix(std::span<const MeasurementPoint> mps, const NodeCloud& cloud,
                             const PlanConfig& cfg) {
    if (mps.size() < 2) throw std::invalid_argument("build_time_matrix: need at least 2 MPs");
    BuildContext ctx{mps, &cloud, &cfg, {}};
    ctx.orientations.reserve(mps.size());
    for (const auto& mp : mps) ctx.orientations.push_back(required_orientation(mp, cfg));

    const int n = static_cast<int>(mps.size()) + 1;
    std::vector<LegProvenance> raw(static_cast<std::size_t>(n) * n);
    // Every ordered leg is self-contained, so the result does not depend on
    // the schedule.
#pragma omp parallel for schedule(dynamic)
    for (int f = 0; f < n * n; ++f) {
        const int i = f / n;
        const int q = f % n;
        if (i != q) raw[f] = plan_leg(ctx, i, q);
    }
    return assemble(ctx, std::move(raw));
}

TimeMatrix build_time_matrix_serial(std::span<const MeasurementPoint> mps,
                                    const NodeCloud& cloud, const PlanConfig& cfg) {
    if (mps.size() < 2) throw std::invalid_argument("build_time_matrix: need at least 2 MPs");
    BuildContext ctx{mps, &cloud, &cfg, {}};
    ctx.orientations.reserve(mps.size());
    for (const auto& mp : mps) ctx.orientations.push_back(required_orientation(mp, cfg));

    const int n = static_cast<int>(mps.size()) + 1;
    std::vector<LegProvenance> raw(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q)
            if (i != q) raw[static_cast<std::size_t>(i) * n + q] = plan_leg(ctx, i, q);
    return assemble(ctx, std::move(raw));
}

// ---------------------------------------------------------------------------

TourCost tour_time(std::span<const int> order, const TimeMatrix& T) {
    const int m = T.mp_count();
    if (static_cast<int>(order.size()) != m)
        throw std::invalid_argument("tour_time: order size mismatch");
    std::vector<bool> seen(m + 1, false);
    for (int idx : order) {
        if (idx < 1 || idx > m || seen[idx])
            throw std::invalid_argument("tour_time: order is not a permutation of 1..m");
        seen[idx] = true;
    }
    TourCost cost;
    int prev = 0;
    for (int idx : order) {
        cost.seconds += T.at(prev, idx);
        cost.tainted |= T.is_inf(prev, idx);
        prev = idx;
    }
    cost.seconds += T.at(prev, 0);
    cost.tainted |= T.is_inf(prev, 0);
    return cost;
}

void save_matrix_csv(const TimeMatrix& T, const std::string& path) {
    std::string out;
    const int n = T.order();
    for (int i = 0; i < n; ++i) {
        for (int q = 0; q < n; ++q) {
            if (q) out += ',';
            out += T.is_inf(i, q) && i != q ? "inf" : format_double(T.at(i, q));
        }
        out += '\n';
    }
    write_file(path, out);
}

TimeMatrix load_matrix_csv(const std::string& path, double a_inf) {
    const std::string text = read_file(path);
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
        pos = end + 1;
        if (line.empty()) continue;
        std::vector<double> row;
        for (std::string_view field : split_fields(line)) {
            field = trim(field);
            double v;
            if (field == "inf") {
                v = a_inf;
            } else if (!parse_double(field, v) || !(v >= 0.0)) {
                std::ostringstream ss;
                ss << path << ":" << line_no << ": bad matrix entry '" << field << "'";
                throw std::runtime_error(ss.str());
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
    const std::size_t n = rows.size();
    for (std::size_t i = 0; i < n; ++i)
        if (rows[i].size() != n)
            throw std::runtime_error(path + ": matrix is not square (row " +
                                     std::to_string(i + 1) + ")");
    if (n < 2) throw std::runtime_error(path + ": matrix must include depot and >= 1 MP");

    TimeMatrix T(static_cast<int>(n) - 1, a_inf);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t q = 0; q < n; ++q)
            T.set(static_cast<int>(i), static_cast<int>(q), std::min(rows[i][q], a_inf));
    return T;
}

}  // namespace cmmpath
