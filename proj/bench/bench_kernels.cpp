// Benchmark: OpenMP time-matrix builder vs the serial reference, and
// grid-indexed collision queries vs the full-scan reference.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cmmpath/collision.hpp"
#include "cmmpath/scene.hpp"
#include "cmmpath/timing.hpp"

using namespace cmmpath;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

NodeCloud bench_scene(const PlanConfig& cfg, std::vector<MeasurementPoint>& mps, int mp_count) {
    std::vector<Point3> nodes;
    for (double x = -200; x <= 200; x += cfg.element_size)
        for (double y = -200; y <= 200; y += cfg.element_size) nodes.push_back({x, y, 0.0});
    for (double y = -150; y <= 150; y += cfg.element_size)
        for (double z = 0; z <= 28; z += cfg.element_size) nodes.push_back({0.0, y, z});

    mps.clear();
    for (int i = 0; i < mp_count; ++i) {
        const double side = (i % 2 == 0) ? -1.0 : 1.0;
        const double x = side * (20.0 + 8.0 * ((i / 2) % 5));
        const double y = -180.0 + 360.0 * i / (mp_count - 1);
        mps.push_back({{x, y, 0.0}, unit({0, 0, 1}), "m" + std::to_string(i)});
    }
    return NodeCloud(std::move(nodes), cfg.element_size,
                     std::max(cfg.element_size, cfg.clearance));
}

}  // namespace

int main() {
    PlanConfig cfg;
    cfg.origin = {0, -220, 100};

    std::vector<MeasurementPoint> mps;
    const NodeCloud cloud = bench_scene(cfg, mps, 24);
    std::printf("scene: %zu nodes, %zu MPs\n", cloud.size(), mps.size());
#ifdef _OPENMP
    std::printf("openmp: %d max threads\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled in this build\n");
#endif

    // --- time matrix: serial reference vs OpenMP kernel -------------------
    auto t0 = Clock::now();
    const TimeMatrix serial = build_time_matrix_serial(mps, cloud, cfg);
    const double t_serial = seconds_since(t0);

    t0 = Clock::now();
    const TimeMatrix parallel = build_time_matrix(mps, cloud, cfg);
    const double t_parallel = seconds_since(t0);

    bool equal = serial.order() == parallel.order();
    for (int i = 0; equal && i < serial.order(); ++i)
        for (int q = 0; q < serial.order(); ++q)
            if (serial.at(i, q) != parallel.at(i, q)) equal = false;

    std::printf("matrix build  serial: %8.3f s\n", t_serial);
    std::printf("matrix build  openmp: %8.3f s   speedup %.2fx   results %s\n", t_parallel,
                t_serial / t_parallel, equal ? "identical" : "DIFFER");

    // --- collision queries: grid index vs full scan -----------------------
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-220.0, 220.0);
    std::uniform_real_distribution<double> height(-10.0, 60.0);
    std::vector<std::pair<Point3, Point3>> segments;
    for (int i = 0; i < 2000; ++i)
        segments.push_back({{coord(rng), coord(rng), height(rng)},
                            {coord(rng), coord(rng), height(rng)}});

    t0 = Clock::now();
    std::size_t hits_grid = 0;
    for (const auto& [a, b] : segments)
        hits_grid += segment_collides(cloud, a, b, cfg.eps(), cfg.clearance).collides;
    const double t_grid = seconds_since(t0);

    t0 = Clock::now();
    std::size_t hits_ref = 0;
    for (const auto& [a, b] : segments)
        hits_ref += segment_collides_reference(cloud, a, b, cfg.eps(), cfg.clearance).collides;
    const double t_ref = seconds_since(t0);

    std::printf("collision 2000 queries  grid: %8.3f s (%zu hits)\n", t_grid, hits_grid);
    std::printf("collision 2000 queries  scan: %8.3f s (%zu hits)   speedup %.2fx\n", t_ref,
                hits_ref, t_ref / t_grid);
    return equal && hits_grid == hits_ref ? 0 : 1;
}
