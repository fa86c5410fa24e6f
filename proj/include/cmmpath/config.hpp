#ifndef CMMPATH_CONFIG_HPP
#define CMMPATH_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <string>

#include "cmmpath/geometry.hpp"

namespace cmmpath {

// Planner parameters. Defaults follow the usual workshop values for a
// horizontal-arm CMM with a touch-trigger probe on an indexing head.
//
// JSON keys (config file): l, D0, d, h, k0, omega, t_s, v, eps, A_inf,
// theta_max, local_time_cap, origin, seed. Omitted keys keep defaults;
// eps <= 0 means "use max(D0, l)".
struct PlanConfig {
    double element_size = 4.0;    // l: node grid spacing of sampled surfaces, mm
    double clearance = 4.0;       // D0: collision threshold around the probe path, mm
    double approach_dist = 5.0;   // d: AP offset along the surface normal, mm
    double step_len = 10.0;       // h: SMP step length per iteration, mm
    int max_steps = 10;           // k0: iteration budget per rule / direction
    double omega_deg_s = 1.0;     // omega: head rotary speed, deg/s (A and B axes)
    double pause_s = 0.3;         // t_s: settle pause after a rotation, s
    double speed_mm_s = 85.0;     // v: probe transition speed, mm/s
    double search_margin = 0.0;   // eps: searching-volume inflation; 0 -> max(D0, l)
    double time_inf = 1e6;        // A_inf: sentinel for inaccessible legs, s
    double theta_max_deg = 30.0;  // stylus-to-normal tolerance cone, deg
    double time_cap_s = 200.0;    // legs slower than this become A_inf, s
    Point3 origin;                // probe park position (tour depot)
    std::uint64_t seed = 1;

    double eps() const {
        return search_margin > 0.0 ? search_margin
                                   : std::max(clearance, element_size);
    }
};

// Reads a config JSON file; missing keys keep the defaults above.
// Throws std::runtime_error on unreadable files or malformed values.
PlanConfig load_config(const std::string& path);

void save_config(const PlanConfig& cfg, const std::string& path);

}  // namespace cmmpath

#endif
