#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "utmsim/grid.hpp"

namespace utmsim {

struct LaunchArea {
    Rect region;
    double launch_probability = 0.0;

    friend bool operator==(const LaunchArea&, const LaunchArea&) = default;
};

struct LandingArea {
    Rect region;
    double selection_probability = 0.0;

    friend bool operator==(const LandingArea&, const LandingArea&) = default;
};

struct BaseStationConfig {
    Vec2 position_m;
    int channels = 8;

    friend bool operator==(const BaseStationConfig&, const BaseStationConfig&) = default;
};

// Log-distance model parameters plus the link quality thresholds.
struct PathLossParams {
    double pl_d0 = 40.0;              // dB at the reference distance
    double d0 = 1.0;                  // reference distance, meters
    double n = 2.7;                   // path loss exponent
    double sigma = 0.0;               // shadowing std-dev, dB
    double good_threshold_db = 80.0;  // pl <= good  -> Good
    double nolink_threshold_db = 120.0;  // pl > nolink -> NoLink

    friend bool operator==(const PathLossParams&, const PathLossParams&) = default;
};

// Optional planar-to-geographic mapping used by the trajectory exporters:
// lat = lat + y_m / meters_per_degree, lon = lon + x_m / meters_per_degree.
struct GeoAnchor {
    double lat = 0.0;
    double lon = 0.0;
    double meters_per_degree = 111320.0;

    friend bool operator==(const GeoAnchor&, const GeoAnchor&) = default;
};

enum class TrajectoryType { P2P, Manhattan };

// Full declarative description of one run. Everything the engine does is a
// deterministic function of this struct.
struct ScenarioConfig {
    int grid_width = 0;   // required
    int grid_height = 0;  // required
    double cell_size_m = 18.0;
    long sim_steps = 20000;
    double step_seconds = 1.0;
    int t_min = 10;  // steps between launch decisions
    TrajectoryType trajectory_type = TrajectoryType::P2P;
    bool managed = false;
    int max_hold = 0;  // ground-hold budget for the managed planner
    double speed_cells_per_step = 1.0;
    bool launch_at_random_cell = false;  // default: region-center launches
    std::vector<LaunchArea> launch_areas;
    std::vector<LandingArea> landing_areas;
    std::vector<Rect> no_fly_zones;
    std::vector<BaseStationConfig> base_stations;
    std::string propagation_model = "log-distance";
    PathLossParams path_loss;
    int density_window_w = 5;
    int density_stride_s = 5;
    std::int64_t rng_seed = 0;  // required
    std::optional<GeoAnchor> geo_anchor;

    GridDims grid() const { return GridDims{grid_width, grid_height}; }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Thrown by parse_scenario on malformed documents (syntax error, unknown key,
// missing required key, wrong value type).
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ScenarioConfig parse_scenario(std::string_view text);
std::string serialize_scenario(const ScenarioConfig& config);

// One entry per violated invariant; empty means valid. Violations are data,
// not failures.
std::vector<std::string> validate(const ScenarioConfig& config);

const char* to_string(TrajectoryType t);

}  // namespace utmsim
