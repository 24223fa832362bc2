#include "utmsim/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace utmsim {

World::World(const ScenarioConfig& config)
    : config_(config),
      propagation_(make_propagation_model(config.propagation_model, config.path_loss)),
      launch_stream_(static_cast<std::uint64_t>(config.rng_seed), "launch"),
      landing_stream_(static_cast<std::uint64_t>(config.rng_seed), "landing"),
      shadowing_stream_(static_cast<std::uint64_t>(config.rng_seed), "shadowing") {
    if (!propagation_)
        throw std::invalid_argument("unknown propagation model '" + config.propagation_model +
                                    "'");
    if (config_.t_min < 1) throw std::invalid_argument("t_min must be >= 1");
    if (config_.grid_width <= 0 || config_.grid_height <= 0)
        throw std::invalid_argument("grid dimensions must be positive");
    for (const auto& b : config_.base_stations) stations_.push_back({b, 0});

    blocked_.assign(static_cast<size_t>(config_.grid_width) * config_.grid_height, false);
    for (const auto& zone : config_.no_fly_zones)
        for (int y = zone.y_min; y <= zone.y_max; ++y)
            for (int x = zone.x_min; x <= zone.x_max; ++x)
                if (config_.grid().contains({x, y}))
                    blocked_[static_cast<size_t>(y) * config_.grid_width + x] = true;

    if (config_.managed)
        coverage_ = coverage_mask(config_.base_stations, *propagation_, config_.path_loss,
                                  config_.grid(), config_.cell_size_m);
}

Cell World::draw_cell(const Rect& region, RngStream& stream) {
    if (!config_.launch_at_random_cell) return region.center();
    const int x = stream.uniform_int(region.x_min, region.x_max);
    const int y = stream.uniform_int(region.y_min, region.y_max);
    return Cell{x, y};
}

void World::launch_unmanaged(const Mission& mission) {
    Trajectory traj;
    if (config_.trajectory_type == TrajectoryType::P2P) {
        traj = p2p_trajectory(cell_center_m(mission.origin, config_.cell_size_m),
                              cell_center_m(mission.dest, config_.cell_size_m),
                              config_.speed_cells_per_step * config_.cell_size_m,
                              config_.cell_size_m);
    } else {
        traj = manhattan_trajectory(mission.origin, mission.dest, AxisOrder::XFirst);
    }
    traj.launch_step = clock_;

    UasAgent agent;
    agent.id = next_agent_id_++;
    agent.origin = mission.origin;
    agent.dest = mission.dest;
    agent.launch_step = clock_;
    agent.hold = 0;
    agent.trajectory = std::move(traj);
    log_.launches.push_back({clock_, agent.id, agent.origin, agent.dest, 0});
    active_.push_back(std::move(agent));
}

void World::launch_managed(const Mission& mission) {
    const auto blocked = [this](Cell c) {
        return blocked_[static_cast<size_t>(c.y) * config_.grid_width + c.x];
    };
    const auto covered = [this](Cell c) { return coverage_.covered(c); };
    PlanOutcome plan = plan_managed(mission, clock_, reservations_, config_.grid(), blocked,
                                    covered, config_.max_hold, next_agent_id_);
    if (!plan.planned) {
        log_.cancellations.push_back({clock_, mission.origin, mission.dest, plan.reason});
        return;
    }

    UasAgent agent;
    agent.id = next_agent_id_++;
    agent.origin = mission.origin;
    agent.dest = mission.dest;
    agent.launch_step = clock_;
    agent.hold = plan.hold;
    agent.trajectory = std::move(plan.trajectory);
    log_.launches.push_back({clock_, agent.id, agent.origin, agent.dest, agent.hold});
    active_.push_back(std::move(agent));
}

void World::schedule_launches() {
    std::vector<double> weights;
    weights.reserve(config_.landing_areas.size());
    for (const auto& a : config_.landing_areas) weights.push_back(a.selection_probability);

    for (const auto& area : config_.launch_areas) {
        if (!launch_stream_.bernoulli(area.launch_probability)) continue;
        const int landing = landing_stream_.categorical(weights);
        Mission mission;
        mission.origin = draw_cell(area.region, launch_stream_);
        mission.dest = draw_cell(config_.landing_areas[landing].region, landing_stream_);
        if (config_.managed)
            launch_managed(mission);
        else
            launch_unmanaged(mission);
    }
}

void World::step() {
    // (1) launch decisions when a window opens
    if (clock_ % config_.t_min == 0) schedule_launches();

    // (2)+(3) agent positions are a function of the clock; agents at their
    // final trajectory cell land this step and their reservations are
    // released (all their slots are now in the past).
    std::vector<AirborneAgent> airborne;
    airborne.reserve(active_.size());
    for (const auto& agent : active_) {
        log_.positions.push_back({clock_, agent.id, agent.cell_at(clock_)});
        if (clock_ >= agent.flight_start()) {
            const size_t k = static_cast<size_t>(clock_ - agent.flight_start());
            const double shadow = config_.path_loss.sigma > 0.0
                                      ? shadowing_stream_.gaussian(0.0, config_.path_loss.sigma)
                                      : 0.0;
            airborne.push_back(
                {agent.id, agent.trajectory.position_m(k, config_.cell_size_m), shadow});
        }
        if (clock_ == agent.land_step()) {
            log_.landings.push_back({clock_, agent.id, agent.origin, agent.dest, agent.hold});
            reservations_.release(agent.id);
        }
    }
    std::erase_if(active_, [this](const UasAgent& a) { return clock_ == a.land_step(); });

    // (4) per-step channel allocation over agents in flight
    if (!airborne.empty())
        for (auto& s : allocate_channels(std::move(airborne), stations_, *propagation_,
                                         config_.path_loss, clock_))
            log_.links.push_back(s);

    ++clock_;
}

SimulationLog run(const ScenarioConfig& config) {
    World world(config);
    while (world.clock() < config.sim_steps) world.step();
    SimulationLog log = world.take_log();
    log.sim_steps = config.sim_steps;
    return log;
}

}  // namespace utmsim
