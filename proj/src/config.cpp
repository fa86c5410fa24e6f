#include "cmmpath/config.hpp"

#include <stdexcept>

#include "cmmpath/io_util.hpp"
#include "json.hpp"

namespace cmmpath {

namespace {

void validate(const PlanConfig& c) {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw std::runtime_error(std::string("config: ") + name + " must be > 0");
    };
    positive(c.element_size, "l");
    positive(c.clearance, "D0");
    positive(c.approach_dist, "d");
    positive(c.step_len, "h");
    positive(c.omega_deg_s, "omega");
    positive(c.speed_mm_s, "v");
    positive(c.time_cap_s, "local_time_cap");
    if (c.max_steps <= 0) throw std::runtime_error("config: k0 must be > 0");
    if (c.pause_s < 0.0) throw std::runtime_error("config: t_s must be >= 0");
    if (c.search_margin < 0.0) throw std::runtime_error("config: eps must be >= 0");
    if (!(c.time_inf > c.time_cap_s))
        throw std::runtime_error("config: A_inf must exceed local_time_cap");
    if (!(c.theta_max_deg > 0.0 && c.theta_max_deg <= 90.0))
        throw std::runtime_error("config: theta_max must be in (0, 90]");
}

}  // namespace

PlanConfig load_config(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    PlanConfig c;
    try {
        c.element_size = doc.value("l", c.element_size);
        c.clearance = doc.value("D0", c.clearance);
        c.approach_dist = doc.value("d", c.approach_dist);
        c.step_len = doc.value("h", c.step_len);
        c.max_steps = doc.value("k0", c.max_steps);
        c.omega_deg_s = doc.value("omega", c.omega_deg_s);
        c.pause_s = doc.value("t_s", c.pause_s);
        c.speed_mm_s = doc.value("v", c.speed_mm_s);
        c.search_margin = doc.value("eps", c.search_margin);
        c.time_inf = doc.value("A_inf", c.time_inf);
        c.theta_max_deg = doc.value("theta_max", c.theta_max_deg);
        c.time_cap_s = doc.value("local_time_cap", c.time_cap_s);
        c.seed = doc.value("seed", c.seed);
        if (doc.contains("origin")) {
            const auto& o = doc["origin"];
            if (!o.is_array() || o.size() != 3)
                throw std::runtime_error("config: origin must be [x,y,z]");
            c.origin = {o[0].get<double>(), o[1].get<double>(), o[2].get<double>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    validate(c);
    return c;
}

void save_config(const PlanConfig& c, const std::string& path) {
    nlohmann::json doc{
        {"l", c.element_size},
        {"D0", c.clearance},
        {"d", c.approach_dist},
        {"h", c.step_len},
        {"k0", c.max_steps},
        {"omega", c.omega_deg_s},
        {"t_s", c.pause_s},
        {"v", c.speed_mm_s},
        {"eps", c.search_margin},
        {"A_inf", c.time_inf},
        {"theta_max", c.theta_max_deg},
        {"local_time_cap", c.time_cap_s},
        {"origin", {c.origin.x, c.origin.y, c.origin.z}},
        {"seed", c.seed},
    };
    write_file(path, doc.dump(2) + "\n");
}

}  // namespace cmmpath
