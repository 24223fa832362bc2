#pragma once

#include <memory>
#include <string>
#include <vector>

#include "utmsim/comms.hpp"
#include "utmsim/routing.hpp"
#include "utmsim/rng.hpp"
#include "utmsim/scenario.hpp"

namespace utmsim {

// One sUAS flight. launch_step is the decision step; the agent sits at its
// origin for `hold` steps and then flies the trajectory one position per
// step, landing at land_step().
struct UasAgent {
    int id = 0;
    Cell origin;
    Cell dest;
    long launch_step = 0;
    int hold = 0;
    Trajectory trajectory;  // trajectory.launch_step == launch_step + hold

    long flight_start() const { return launch_step + hold; }
    long land_step() const { return trajectory.land_step(); }
    Cell cell_at(long step) const {
        if (step < flight_start()) return origin;
        return trajectory.cells[static_cast<size_t>(step - flight_start())];
    }
};

struct LaunchEvent {
    long step = 0;
    int agent = 0;
    Cell origin;
    Cell dest;
    int hold = 0;
};

struct CancelEvent {
    long step = 0;
    Cell origin;
    Cell dest;
    std::string reason;
};

struct LandEvent {
    long step = 0;
    int agent = 0;
    Cell origin;
    Cell dest;
    int hold = 0;
};

struct PositionRecord {
    long step = 0;
    int agent = 0;
    Cell cell;
};

// Append-only run record; everything the analysis and exporters consume.
struct SimulationLog {
    long sim_steps = 0;
    std::vector<LaunchEvent> launches;
    std::vector<CancelEvent> cancellations;
    std::vector<LandEvent> landings;
    std::vector<PositionRecord> positions;
    std::vector<LinkSample> links;
};

// Single-run world. Strictly single-threaded and a pure function of the
// config: three named RNG substreams (launch decisions, landing choice,
// shadowing) are derived from rng_seed so enabling shadowing does not
// perturb the traffic realization.
class World {
public:
    explicit World(const ScenarioConfig& config);

    // Advances one step with fixed sub-phase order: launch decisions when
    // due, agent movement, landings + reservation release, channel
    // allocation, log append.
    void step();

    long clock() const { return clock_; }
    const SimulationLog& log() const { return log_; }
    SimulationLog take_log() { return std::move(log_); }
    size_t airborne_count() const { return active_.size(); }

private:
    void schedule_launches();
    void launch_unmanaged(const Mission& mission);
    void launch_managed(const Mission& mission);
    Cell draw_cell(const Rect& region, RngStream& stream);

    ScenarioConfig config_;
    long clock_ = 0;
    int next_agent_id_ = 0;
    std::vector<UasAgent> active_;
    ReservationTable reservations_;
    std::vector<BaseStationState> stations_;
    std::unique_ptr<PropagationModel> propagation_;
    CoverageMap coverage_;
    std::vector<bool> blocked_;  // no-fly cells, row-major
    RngStream launch_stream_;
    RngStream landing_stream_;
    RngStream shadowing_stream_;
    SimulationLog log_;
};

// Runs sim_steps steps from an empty world. Deterministic given rng_seed;
// internal invariant violations (planner double-booking) propagate as
// std::logic_error.
SimulationLog run(const ScenarioConfig& config);

}  // namespace utmsim
