#include <cmath>

#include "cmmpath/localpath.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace cmmpath;
using testutil::add_plate_z;
using testutil::add_wall_x;
using testutil::default_cfg;
using testutil::make_cloud;
using testutil::make_mp;

namespace {

// MPs at (+-50,0,0) facing +z with a wall on x=0 of the given top height.
struct WallScene {
    NodeCloud cloud;
    MeasurementPoint a, b;
};

WallScene wall_between(double top_z, const PlanConfig& cfg, double wall_x = 0.0) {
    std::vector<Point3> nodes;
    add_wall_x(nodes, wall_x, -48, 48, 0, top_z, cfg.element_size);
    return {make_cloud(std::move(nodes), cfg), make_mp("a", {-50, 0, 0}, {0, 0, 1}),
            make_mp("b", {50, 0, 0}, {0, 0, 1})};
}

// Wall at x=15 plus a wide plate at z=38 over the midpoint column. The plate
// blocks every rule-1 lift; rule 2 needs (2,2) lifts forward but only (2,1)
// backward, so the two directions plan different paths.
WallScene asymmetric_scene(const PlanConfig& cfg) {
    std::vector<Point3> nodes;
    add_wall_x(nodes, 15.0, -48, 48, 0, 16, cfg.element_size);
    add_plate_z(nodes, 38.0, -44, 44, -44, 44, cfg.element_size);
    return {make_cloud(std::move(nodes), cfg), make_mp("a", {-50, 0, 0}, {0, 0, 1}),
            make_mp("b", {50, 0, 0}, {0, 0, 1})};
}

}  // namespace

TEST_SUITE("localpath") {

TEST_CASE("clear flat panel gives a direct path") {
    const PlanConfig cfg = default_cfg();
    std::vector<Point3> nodes;
    add_plate_z(nodes, 0.0, -60, 60, -60, 60, cfg.element_size);
    const NodeCloud cloud = make_cloud(std::move(nodes), cfg);
    const auto a = make_mp("a", {-40, 0, 0}, {0, 0, 1});
    const auto b = make_mp("b", {40, 0, 0}, {0, 0, 1});

    const LocalPath path = plan_local_path(a, b, cloud, cfg);
    CHECK(path.feasible);
    CHECK(path.rule == PathRule::Direct);
    CHECK(path.smp_count == 0);
    CHECK(path.iterations_used == 0);
    CHECK(path.transition_time == doctest::Approx(80.0 / 85.0).epsilon(1e-12));
}

TEST_CASE("rule 1 on an empty scene returns the midpoint at k=0") {
    const PlanConfig cfg = default_cfg();
    const NodeCloud cloud = make_cloud({}, cfg);
    const auto a = make_mp("a", {-40, 0, 0}, {0, 0, 1});
    const auto b = make_mp("b", {40, 0, 0}, {0, 0, 1});
    const LocalPath path = rule1_scenario1(a, b, cloud, cfg);
    CHECK(path.feasible);
    CHECK(path.iterations_used == 0);
    REQUIRE(path.smp_count == 1);
    CHECK(path.waypoints[1].position.x == doctest::Approx(0.0));
    CHECK(path.waypoints[1].position.z == doctest::Approx(5.0));
}

TEST_CASE("rule 1 clears a 12mm wall at exactly k=2") {
    // APs at z=5, lift direction +z, h=10. Apex (0,0,5+10k) against the top
    // node (0,0,12): k=1 leaves 150/sqrt(2600) = 2.94 <= 4 (collision),
    // k=2 leaves 650/sqrt(2900) = 12.07 > 4 (clear).
    const PlanConfig cfg = default_cfg();
    const WallScene scene = wall_between(12.0, cfg);
    const LocalPath path = rule1_scenario1(scene.a, scene.b, scene.cloud, cfg);
    REQUIRE(path.feasible);
    CHECK(path.iterations_used == 2);
    REQUIRE(path.smp_count == 1);
    CHECK(path.waypoints[1].position.z == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(testutil::oracle_polyline_clear(scene.cloud.nodes(), path.waypoints, cfg.clearance));
}

TEST_CASE("rule 1 gives up on a wall taller than the step budget") {
    const PlanConfig cfg = default_cfg();  // k0=10, h=10: apex tops out at z=105
    const WallScene scene = wall_between(200.0, cfg);
    const LocalPath path = rule1_scenario1(scene.a, scene.b, scene.cloud, cfg);
    CHECK_FALSE(path.feasible);
    CHECK(path.iterations_used == cfg.max_steps);
    CHECK(path.transition_time == cfg.time_inf);

    const LocalPath plan = plan_local_path(scene.a, scene.b, scene.cloud, cfg);
    CHECK_FALSE(plan.feasible);
    CHECK(plan.rule == PathRule::None);
    CHECK(plan.transition_time == cfg.time_inf);
}

TEST_CASE("rule 2 on an empty scene collapses to direct") {
    const PlanConfig cfg = default_cfg();
    const NodeCloud cloud = make_cloud({}, cfg);
    const auto a = make_mp("a", {-40, 0, 0}, {0, 0, 1});
    const auto b = make_mp("b", {40, 0, 0}, {0, 0, 1});
    const LocalPath path = rule2_scenario1(a, b, cloud, cfg);
    CHECK(path.feasible);
    CHECK(path.rule == PathRule::Direct);
    CHECK(path.smp_count == 0);
    CHECK(path.iterations_used == 0);
}

TEST_CASE("rule 2 succeeds where the plate blocks rule 1") {
    const PlanConfig cfg = default_cfg();
    const WallScene scene = asymmetric_scene(cfg);

    const LocalPath r1 = rule1_scenario1(scene.a, scene.b, scene.cloud, cfg);
    CHECK_FALSE(r1.feasible);
    CHECK(r1.iterations_used == cfg.max_steps);

    const LocalPath r2 = rule2_scenario1(scene.a, scene.b, scene.cloud, cfg);
    REQUIRE(r2.feasible);
    CHECK(r2.rule == PathRule::Rule2);
    CHECK(r2.smp_count == 2);
    CHECK(r2.iterations_used == 2);  // (2,2): both SMPs at z=25
    CHECK(r2.transition_time == doctest::Approx(140.0 / 85.0).epsilon(1e-12));
    CHECK(testutil::oracle_polyline_clear(scene.cloud.nodes(), r2.waypoints, cfg.clearance));

    const LocalPath plan = plan_local_path(scene.a, scene.b, scene.cloud, cfg);
    CHECK(plan.rule == PathRule::Rule2);
    CHECK(plan.transition_time == doctest::Approx(140.0 / 85.0).epsilon(1e-12));
}

TEST_CASE("plan picks the faster of rule 1 and rule 2") {
    const PlanConfig cfg = default_cfg();
    const WallScene scene = wall_between(12.0, cfg);
    const LocalPath r1 = rule1_scenario1(scene.a, scene.b, scene.cloud, cfg);
    const LocalPath r2 = rule2_scenario1(scene.a, scene.b, scene.cloud, cfg);
    REQUIRE(r1.feasible);
    REQUIRE(r2.feasible);
    // rule 1 detours through (0,0,25): 2*sqrt(50^2+20^2) = 107.70 mm;
    // rule 2 (2,1) runs 20 + sqrt(100^2+10^2) + 10 = 130.50 mm.
    CHECK(r1.transition_time < r2.transition_time);
    const LocalPath plan = plan_local_path(scene.a, scene.b, scene.cloud, cfg);
    CHECK(plan.rule == PathRule::Rule1);
    CHECK(plan.transition_time == doctest::Approx(r1.transition_time).epsilon(1e-12));
    CHECK(plan.transition_time ==
          doctest::Approx(2.0 * std::sqrt(2900.0) / 85.0).epsilon(1e-12));
}

TEST_CASE("forward and reverse plans may differ; both stay sound") {
    const PlanConfig cfg = default_cfg();
    const WallScene scene = asymmetric_scene(cfg);
    const LocalPath fwd = plan_local_path(scene.a, scene.b, scene.cloud, cfg);
    const LocalPath rev = plan_local_path(scene.b, scene.a, scene.cloud, cfg);
    REQUIRE(fwd.feasible);
    REQUIRE(rev.feasible);
    // Forward needs lifts (2,2) = 140 mm; reverse clears at (2,1) =
    // 30 + sqrt(10100) mm because its leading SMP sits on the far side.
    CHECK(fwd.transition_time == doctest::Approx(140.0 / 85.0).epsilon(1e-12));
    CHECK(rev.transition_time ==
          doctest::Approx((30.0 + std::sqrt(10100.0)) / 85.0).epsilon(1e-12));
    CHECK(fwd.transition_time > rev.transition_time);
    CHECK(testutil::oracle_polyline_clear(scene.cloud.nodes(), fwd.waypoints, cfg.clearance));
    CHECK(testutil::oracle_polyline_clear(scene.cloud.nodes(), rev.waypoints, cfg.clearance));
}

TEST_CASE("scenario 2 escapes sideways through the open direction") {
    const PlanConfig cfg = default_cfg();
    // Divider on x=0, open only beyond y=8; +-z are walled far beyond reach.
    std::vector<Point3> nodes;
    add_wall_x(nodes, 0.0, -120, 8, -120, 120, cfg.element_size);
    const NodeCloud cloud = make_cloud(std::move(nodes), cfg);
    const auto a = make_mp("a", {0, 0, 0}, {1, 0, 0});
    const auto b = make_mp("b", {0, 0, 4}, {-1, 0, 0});

    const LocalPath path = plan_local_path(a, b, cloud, cfg);
    REQUIRE(path.feasible);
    CHECK(path.rule == PathRule::Scenario2);
    CHECK(path.scenario2_direction == 0);  // (-J,I,0) = +y for normal (1,0,0)
    CHECK(path.iterations_used == 2);      // k=1 clears the wall edge by only 2.83
    REQUIRE(path.smp_count == 2);
    CHECK(path.waypoints[1].position.y == doctest::Approx(20.0));
    CHECK(testutil::oracle_polyline_clear(cloud.nodes(), path.waypoints, cfg.clearance));
}

TEST_CASE("scenario 2 exhausts inside a closed box") {
    const PlanConfig cfg = default_cfg();
    const auto scene = testutil::closed_box_scenario2(cfg);
    const LocalPath path = plan_local_path(scene.mp_a, scene.mp_b, scene.cloud, cfg);
    CHECK_FALSE(path.feasible);
    CHECK(path.transition_time == cfg.time_inf);
    CHECK(path.iterations_used == cfg.max_steps);

    const LocalPath s2 = scenario2(scene.mp_a, scene.mp_b, scene.cloud, cfg);
    CHECK_FALSE(s2.feasible);
    CHECK(s2.iterations_used == cfg.max_steps);
}

TEST_CASE("scenario 1 rules exhaust inside a closed box") {
    const PlanConfig cfg = default_cfg();
    const auto scene = testutil::closed_box_scenario1(cfg);
    const LocalPath path = plan_local_path(scene.mp_a, scene.mp_b, scene.cloud, cfg);
    CHECK_FALSE(path.feasible);
    CHECK(path.transition_time == cfg.time_inf);
    CHECK(path.iterations_used == cfg.max_steps);
}

TEST_CASE("SMP positions obey the step recurrence") {
    const PlanConfig cfg = default_cfg();
    for (double top : {8.0, 12.0, 16.0, 20.0, 24.0}) {
        const WallScene scene = wall_between(top, cfg);
        const LocalPath path = rule1_scenario1(scene.a, scene.b, scene.cloud, cfg);
        if (!path.feasible) continue;
        REQUIRE(path.smp_count == 1);
        const Point3 seed{0, 0, 5};  // AP midpoint
        const Vec3 offset = path.waypoints[1].position - seed;
        const double k = path.iterations_used;
        CHECK(offset.norm() == doctest::Approx(k * cfg.step_len).epsilon(1e-9));
        if (k > 0) {
            CHECK(offset.x == doctest::Approx(0.0));
            CHECK(offset.y == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("feasible results re-pass the collision module") {
    const PlanConfig cfg = default_cfg();
    for (double top : {8.0, 16.0, 24.0, 32.0}) {
        const WallScene scene = wall_between(top, cfg);
        const LocalPath path = plan_local_path(scene.a, scene.b, scene.cloud, cfg);
        REQUIRE(path.feasible);
        std::vector<Point3> pts;
        for (const auto& w : path.waypoints) pts.push_back(w.position);
        for (const auto& res : polyline_collides(scene.cloud, pts, cfg.eps(), cfg.clearance))
            CHECK_FALSE(res.collides);
    }
}

TEST_CASE("identical endpoints are rejected") {
    const PlanConfig cfg = default_cfg();
    const NodeCloud cloud = make_cloud({}, cfg);
    const auto a = make_mp("a", {0, 0, 0}, {0, 0, 1});
    CHECK_THROWS_AS(plan_local_path(a, a, cloud, cfg), std::invalid_argument);
}

}  // TEST_SUITE
