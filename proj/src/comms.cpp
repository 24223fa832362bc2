#include "utmsim/comms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace utmsim {

const char* to_string(LinkClass c) {
    switch (c) {
        case LinkClass::Good: return "good";
        case LinkClass::Poor: return "poor";
        case LinkClass::NoLink: return "nolink";
    }
    return "nolink";
}

double path_loss_db(double distance_m, const PathLossParams& params, double shadowing_db) {
    const double d = std::max(distance_m, params.d0);
    return params.pl_d0 + 10.0 * params.n * std::log10(d / params.d0) + shadowing_db;
}

LinkClass classify_link(double pl_db, const PathLossParams& params) {
    if (pl_db <= params.good_threshold_db) return LinkClass::Good;
    if (pl_db <= params.nolink_threshold_db) return LinkClass::Poor;
    return LinkClass::NoLink;
}

namespace {

class LogDistanceModel final : public PropagationModel {
public:
    explicit LogDistanceModel(const PathLossParams& params) : params_(params) {}
    double loss_db(double distance_m) const override {
        return path_loss_db(distance_m, params_);
    }
    const char* name() const override { return "log-distance"; }

private:
    PathLossParams params_;
};

}  // namespace

std::unique_ptr<PropagationModel> make_propagation_model(const std::string& name,
                                                         const PathLossParams& params) {
    if (name == "log-distance") return std::make_unique<LogDistanceModel>(params);
    return nullptr;
}

bool propagation_model_known(const std::string& name) { return name == "log-distance"; }

CoverageMap coverage_mask(std::span<const BaseStationConfig> stations,
                          const PropagationModel& model, const PathLossParams& params,
                          GridDims grid, double cell_size_m) {
    CoverageMap map;
    map.width = grid.width;
    map.height = grid.height;
    map.best_class.resize(static_cast<size_t>(grid.width) * grid.height, LinkClass::NoLink);
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            const Vec2 center = cell_center_m(Cell{x, y}, cell_size_m);
            double best = std::numeric_limits<double>::infinity();
            for (const auto& s : stations)
                best = std::min(best, model.loss_db(distance_m(center, s.position_m)));
            map.best_class[static_cast<size_t>(y) * grid.width + x] =
                classify_link(best, params);
        }
    }
    return map;
}

std::vector<LinkSample> allocate_channels(std::vector<AirborneAgent> agents,
                                          std::span<BaseStationState> stations,
                                          const PropagationModel& model,
                                          const PathLossParams& params, long step) {
    for (auto& s : stations) s.in_use = 0;
    std::sort(agents.begin(), agents.end(),
              [](const AirborneAgent& a, const AirborneAgent& b) { return a.id < b.id; });

    std::vector<LinkSample> samples;
    samples.reserve(agents.size());
    std::vector<std::pair<double, int>> reachable;  // (loss, station id)
    for (const auto& agent : agents) {
        reachable.clear();
        for (size_t i = 0; i < stations.size(); ++i) {
            const double pl = model.loss_db(distance_m(agent.position_m,
                                                       stations[i].config.position_m)) +
                              agent.shadowing_db;
            if (pl <= params.nolink_threshold_db)
                reachable.emplace_back(pl, static_cast<int>(i));
        }
        std::sort(reachable.begin(), reachable.end());

        LinkSample sample;
        sample.step = step;
        sample.agent = agent.id;
        sample.station = -1;
        sample.path_loss_db = std::numeric_limits<double>::infinity();
        sample.link = LinkClass::NoLink;
        for (const auto& [pl, sid] : reachable) {
            auto& st = stations[sid];
            if (st.in_use >= st.config.channels) continue;
            ++st.in_use;
            sample.station = sid;
            sample.path_loss_db = pl;
            sample.link = classify_link(pl, params);
            break;
        }
        samples.push_back(sample);
    }
    return samples;
}

}  // namespace utmsim
