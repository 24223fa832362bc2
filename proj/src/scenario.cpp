#include "utmsim/scenario.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace utmsim {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(TrajectoryType t) {
    return t == TrajectoryType::P2P ? "P2P" : "Manhattan";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg); }

void check_keys(const json& obj, const std::string& context,
                const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            fail("unknown key " + (context.empty() ? it.key() : context + "." + it.key()));
    }
}

const json& require_key(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing required key " + key);
    return *it;
}

double as_number(const json& v, const std::string& key) {
    if (!v.is_number()) fail("expected number for key " + key);
    return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) fail("expected integer for key " + key);
    return v.get<int>();
}

Rect parse_rect(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 4)
        fail("expected [x_min, y_min, x_max, y_max] for key " + key);
    Rect r;
    r.x_min = as_int(v[0], key);
    r.y_min = as_int(v[1], key);
    r.x_max = as_int(v[2], key);
    r.y_max = as_int(v[3], key);
    return r;
}

Vec2 parse_point(const json& v, const std::string& key) {
    if (!v.is_array() || v.size() != 2) fail("expected [x, y] for key " + key);
    return Vec2{as_number(v[0], key), as_number(v[1], key)};
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::string rect_str(const Rect& r) {
    std::ostringstream os;
    os << "[" << r.x_min << "," << r.y_min << "," << r.x_max << "," << r.y_max << "]";
    return os.str();
}

struct NamedRegion {
    std::string name;
    Rect rect;
};

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("scenario syntax error: ") + e.what());
    }
    if (!doc.is_object()) fail("scenario document must be an object");

    check_keys(doc, "",
               {"grid_width", "grid_height", "cell_size_m", "sim_steps", "step_seconds",
                "t_min", "trajectory_type", "managed", "max_hold", "speed_cells_per_step",
                "launch_at_random_cell", "rng_seed", "launch_areas", "landing_areas",
                "no_fly_zones", "base_stations", "propagation_model", "path_loss",
                "density_window_w", "density_stride_s", "geo_anchor"});

    ScenarioConfig c;
    c.grid_width = as_int(require_key(doc, "grid_width"), "grid_width");
    c.grid_height = as_int(require_key(doc, "grid_height"), "grid_height");
    if (!doc.contains("rng_seed")) fail("missing required key rng_seed");
    if (!doc["rng_seed"].is_number_integer()) fail("expected integer for key rng_seed");
    c.rng_seed = doc["rng_seed"].get<std::int64_t>();

    if (doc.contains("cell_size_m")) c.cell_size_m = as_number(doc["cell_size_m"], "cell_size_m");
    if (doc.contains("sim_steps")) c.sim_steps = static_cast<long>(as_number(doc["sim_steps"], "sim_steps"));
    if (doc.contains("step_seconds")) c.step_seconds = as_number(doc["step_seconds"], "step_seconds");
    if (doc.contains("t_min")) c.t_min = as_int(doc["t_min"], "t_min");
    if (doc.contains("max_hold")) c.max_hold = as_int(doc["max_hold"], "max_hold");
    if (doc.contains("speed_cells_per_step"))
        c.speed_cells_per_step = as_number(doc["speed_cells_per_step"], "speed_cells_per_step");
    if (doc.contains("managed")) {
        if (!doc["managed"].is_boolean()) fail("expected boolean for key managed");
        c.managed = doc["managed"].get<bool>();
    }
    if (doc.contains("launch_at_random_cell")) {
        if (!doc["launch_at_random_cell"].is_boolean())
            fail("expected boolean for key launch_at_random_cell");
        c.launch_at_random_cell = doc["launch_at_random_cell"].get<bool>();
    }
    if (doc.contains("trajectory_type")) {
        const std::string t = doc["trajectory_type"].is_string()
                                  ? doc["trajectory_type"].get<std::string>()
                                  : "";
        if (t == "P2P")
            c.trajectory_type = TrajectoryType::P2P;
        else if (t == "Manhattan")
            c.trajectory_type = TrajectoryType::Manhattan;
        else
            fail("trajectory_type must be \"P2P\" or \"Manhattan\"");
    }
    if (doc.contains("propagation_model")) {
        if (!doc["propagation_model"].is_string())
            fail("expected string for key propagation_model");
        c.propagation_model = doc["propagation_model"].get<std::string>();
    }

    const json& launches = require_key(doc, "launch_areas");
    if (!launches.is_array()) fail("expected array for key launch_areas");
    for (size_t i = 0; i < launches.size(); ++i) {
        const std::string ctx = "launch_areas[" + std::to_string(i) + "]";
        check_keys(launches[i], ctx, {"rect", "launch_probability"});
        LaunchArea a;
        a.region = parse_rect(require_key(launches[i], "rect"), ctx + ".rect");
        a.launch_probability =
            as_number(require_key(launches[i], "launch_probability"), ctx + ".launch_probability");
        c.launch_areas.push_back(a);
    }

    const json& landings = require_key(doc, "landing_areas");
    if (!landings.is_array()) fail("expected array for key landing_areas");
    for (size_t i = 0; i < landings.size(); ++i) {
        const std::string ctx = "landing_areas[" + std::to_string(i) + "]";
        check_keys(landings[i], ctx, {"rect", "selection_probability"});
        LandingArea a;
        a.region = parse_rect(require_key(landings[i], "rect"), ctx + ".rect");
        a.selection_probability = as_number(require_key(landings[i], "selection_probability"),
                                            ctx + ".selection_probability");
        c.landing_areas.push_back(a);
    }

    if (doc.contains("no_fly_zones")) {
        if (!doc["no_fly_zones"].is_array()) fail("expected array for key no_fly_zones");
        for (size_t i = 0; i < doc["no_fly_zones"].size(); ++i)
            c.no_fly_zones.push_back(
                parse_rect(doc["no_fly_zones"][i], "no_fly_zones[" + std::to_string(i) + "]"));
    }

    if (doc.contains("base_stations")) {
        if (!doc["base_stations"].is_array()) fail("expected array for key base_stations");
        for (size_t i = 0; i < doc["base_stations"].size(); ++i) {
            const std::string ctx = "base_stations[" + std::to_string(i) + "]";
            check_keys(doc["base_stations"][i], ctx, {"position", "channels"});
            BaseStationConfig b;
            b.position_m = parse_point(require_key(doc["base_stations"][i], "position"),
                                       ctx + ".position");
            if (doc["base_stations"][i].contains("channels"))
                b.channels = as_int(doc["base_stations"][i]["channels"], ctx + ".channels");
            c.base_stations.push_back(b);
        }
    }

    if (doc.contains("path_loss")) {
        const json& pl = doc["path_loss"];
        check_keys(pl, "path_loss",
                   {"pl_d0", "d0", "n", "sigma", "good_threshold_db", "nolink_threshold_db"});
        if (pl.contains("pl_d0")) c.path_loss.pl_d0 = as_number(pl["pl_d0"], "path_loss.pl_d0");
        if (pl.contains("d0")) c.path_loss.d0 = as_number(pl["d0"], "path_loss.d0");
        if (pl.contains("n")) c.path_loss.n = as_number(pl["n"], "path_loss.n");
        if (pl.contains("sigma")) c.path_loss.sigma = as_number(pl["sigma"], "path_loss.sigma");
        if (pl.contains("good_threshold_db"))
            c.path_loss.good_threshold_db = as_number(pl["good_threshold_db"],
                                                      "path_loss.good_threshold_db");
        if (pl.contains("nolink_threshold_db"))
            c.path_loss.nolink_threshold_db = as_number(pl["nolink_threshold_db"],
                                                        "path_loss.nolink_threshold_db");
    }

    if (doc.contains("density_window_w"))
        c.density_window_w = as_int(doc["density_window_w"], "density_window_w");
    if (doc.contains("density_stride_s"))
        c.density_stride_s = as_int(doc["density_stride_s"], "density_stride_s");

    if (doc.contains("geo_anchor")) {
        const json& g = doc["geo_anchor"];
        check_keys(g, "geo_anchor", {"lat", "lon", "meters_per_degree"});
        GeoAnchor a;
        a.lat = as_number(require_key(g, "lat"), "geo_anchor.lat");
        a.lon = as_number(require_key(g, "lon"), "geo_anchor.lon");
        if (g.contains("meters_per_degree"))
            a.meters_per_degree = as_number(g["meters_per_degree"], "geo_anchor.meters_per_degree");
        c.geo_anchor = a;
    }

    return c;
}

std::string serialize_scenario(const ScenarioConfig& c) {
    ordered_json doc;
    doc["grid_width"] = c.grid_width;
    doc["grid_height"] = c.grid_height;
    doc["cell_size_m"] = c.cell_size_m;
    doc["sim_steps"] = c.sim_steps;
    doc["step_seconds"] = c.step_seconds;
    doc["t_min"] = c.t_min;
    doc["trajectory_type"] = to_string(c.trajectory_type);
    doc["managed"] = c.managed;
    doc["max_hold"] = c.max_hold;
    doc["speed_cells_per_step"] = c.speed_cells_per_step;
    doc["launch_at_random_cell"] = c.launch_at_random_cell;
    doc["rng_seed"] = c.rng_seed;
    doc["launch_areas"] = ordered_json::array();
    for (const auto& a : c.launch_areas)
        doc["launch_areas"].push_back(
            {{"rect", {a.region.x_min, a.region.y_min, a.region.x_max, a.region.y_max}},
             {"launch_probability", a.launch_probability}});
    doc["landing_areas"] = ordered_json::array();
    for (const auto& a : c.landing_areas)
        doc["landing_areas"].push_back(
            {{"rect", {a.region.x_min, a.region.y_min, a.region.x_max, a.region.y_max}},
             {"selection_probability", a.selection_probability}});
    doc["no_fly_zones"] = ordered_json::array();
    for (const auto& r : c.no_fly_zones)
        doc["no_fly_zones"].push_back({r.x_min, r.y_min, r.x_max, r.y_max});
    doc["base_stations"] = ordered_json::array();
    for (const auto& b : c.base_stations)
        doc["base_stations"].push_back(
            {{"position", {b.position_m.x, b.position_m.y}}, {"channels", b.channels}});
    doc["propagation_model"] = c.propagation_model;
    doc["path_loss"] = {{"pl_d0", c.path_loss.pl_d0},
                        {"d0", c.path_loss.d0},
                        {"n", c.path_loss.n},
                        {"sigma", c.path_loss.sigma},
                        {"good_threshold_db", c.path_loss.good_threshold_db},
                        {"nolink_threshold_db", c.path_loss.nolink_threshold_db}};
    doc["density_window_w"] = c.density_window_w;
    doc["density_stride_s"] = c.density_stride_s;
    if (c.geo_anchor)
        doc["geo_anchor"] = {{"lat", c.geo_anchor->lat},
                             {"lon", c.geo_anchor->lon},
                             {"meters_per_degree", c.geo_anchor->meters_per_degree}};
    return doc.dump(2) + "\n";
}

bool propagation_model_known(const std::string& name);  // comms.cpp

std::vector<std::string> validate(const ScenarioConfig& c) {
    std::vector<std::string> report;
    auto add = [&](const std::string& msg) { report.push_back(msg); };

    if (c.grid_width <= 0 || c.grid_height <= 0) add("grid dimensions must be positive");
    if (c.cell_size_m <= 0) add("cell_size_m must be > 0");
    if (c.sim_steps <= 0) add("sim_steps must be > 0");
    if (c.step_seconds <= 0) add("step_seconds must be > 0");
    if (c.t_min < 1) add("t_min must be >= 1");
    if (c.max_hold < 0) add("max_hold must be >= 0");
    if (c.speed_cells_per_step <= 0) add("speed_cells_per_step must be > 0");
    if (c.density_window_w < 1) add("density_window_w must be >= 1");
    if (c.density_stride_s < 1) add("density_stride_s must be >= 1");

    if (c.launch_areas.empty()) add("at least one launch area required");
    if (c.landing_areas.empty()) add("at least one landing area required");

    const bool grid_ok = c.grid_width > 0 && c.grid_height > 0;
    auto check_rect = [&](const Rect& r, const std::string& name) {
        if (r.x_min > r.x_max || r.y_min > r.y_max) {
            add(name + " region " + rect_str(r) + " has inverted corners");
            return;
        }
        if (grid_ok && (r.x_min < 0 || r.y_min < 0 || r.x_max >= c.grid_width ||
                        r.y_max >= c.grid_height))
            add(name + " region " + rect_str(r) + " not inside grid " +
                std::to_string(c.grid_width) + "x" + std::to_string(c.grid_height));
    };

    std::vector<NamedRegion> regions;
    for (size_t i = 0; i < c.launch_areas.size(); ++i) {
        const std::string name = "launch area " + std::to_string(i);
        check_rect(c.launch_areas[i].region, name);
        const double p = c.launch_areas[i].launch_probability;
        if (p < 0.0 || p > 1.0)
            add(name + " launch probability " + fmt(p) + " outside [0,1]");
        regions.push_back({name, c.launch_areas[i].region});
    }
    double sum = 0.0;
    for (size_t i = 0; i < c.landing_areas.size(); ++i) {
        const std::string name = "landing area " + std::to_string(i);
        check_rect(c.landing_areas[i].region, name);
        const double p = c.landing_areas[i].selection_probability;
        if (p < 0.0 || p > 1.0)
            add(name + " selection probability " + fmt(p) + " outside [0,1]");
        sum += p;
        regions.push_back({name, c.landing_areas[i].region});
    }
    if (!c.landing_areas.empty() && std::abs(sum - 1.0) > 1e-9)
        add("landing probabilities sum " + fmt(sum) + " != 1");
    for (size_t i = 0; i < c.no_fly_zones.size(); ++i) {
        const std::string name = "no-fly zone " + std::to_string(i);
        check_rect(c.no_fly_zones[i], name);
        regions.push_back({name, c.no_fly_zones[i]});
    }
    for (size_t i = 0; i < regions.size(); ++i)
        for (size_t j = i + 1; j < regions.size(); ++j)
            if (regions[i].rect.overlaps(regions[j].rect))
                add(regions[i].name + " overlaps " + regions[j].name);

    for (size_t i = 0; i < c.base_stations.size(); ++i) {
        const auto& b = c.base_stations[i];
        const std::string name = "base station " + std::to_string(i);
        if (b.channels < 1) add(name + " channels " + std::to_string(b.channels) + " < 1");
        if (grid_ok) {
            const double w = c.grid_width * c.cell_size_m;
            const double h = c.grid_height * c.cell_size_m;
            if (b.position_m.x < 0 || b.position_m.x > w || b.position_m.y < 0 ||
                b.position_m.y > h)
                add(name + " position (" + fmt(b.position_m.x) + "," + fmt(b.position_m.y) +
                    ") outside map bounds");
        }
    }

    const auto& pl = c.path_loss;
    if (pl.d0 <= 0) add("path_loss d0 must be > 0");
    if (pl.n <= 0) add("path_loss n must be > 0");
    if (pl.sigma < 0) add("path_loss sigma must be >= 0");
    if (pl.good_threshold_db >= pl.nolink_threshold_db)
        add("path_loss good_threshold_db " + fmt(pl.good_threshold_db) +
            " >= nolink_threshold_db " + fmt(pl.nolink_threshold_db));
    if (!propagation_model_known(c.propagation_model))
        add("unknown propagation model '" + c.propagation_model + "'");

    return report;
}

}  // namespace utmsim
