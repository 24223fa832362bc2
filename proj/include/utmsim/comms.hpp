#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "utmsim/grid.hpp"
#include "utmsim/scenario.hpp"

namespace utmsim {

enum class LinkClass { Good, Poor, NoLink };

const char* to_string(LinkClass c);

// Log-distance path loss: pl_d0 + 10 n log10(d / d0) + shadowing, with d
// clamped to the reference distance d0.
double path_loss_db(double distance_m, const PathLossParams& params,
                    double shadowing_db = 0.0);

// pl <= good -> Good, good < pl <= nolink -> Poor, pl > nolink -> NoLink.
LinkClass classify_link(double pl_db, const PathLossParams& params);

// Distance-based propagation models, keyed by name in the scenario file.
// Only "log-distance" ships; others plug in behind this interface.
class PropagationModel {
public:
    virtual ~PropagationModel() = default;
    virtual double loss_db(double distance_m) const = 0;
    virtual const char* name() const = 0;
};

std::unique_ptr<PropagationModel> make_propagation_model(const std::string& name,
                                                         const PathLossParams& params);
bool propagation_model_known(const std::string& name);

// Per-cell best link class with zero shadowing, evaluated at cell centers.
// A cell is covered when some station is within the no-link threshold.
struct CoverageMap {
    int width = 0;
    int height = 0;
    std::vector<LinkClass> best_class;  // row-major, size width*height

    LinkClass at(Cell c) const { return best_class[static_cast<size_t>(c.y) * width + c.x]; }
    bool covered(Cell c) const { return at(c) != LinkClass::NoLink; }
};

CoverageMap coverage_mask(std::span<const BaseStationConfig> stations,
                          const PropagationModel& model, const PathLossParams& params,
                          GridDims grid, double cell_size_m);

struct BaseStationState {
    BaseStationConfig config;
    int in_use = 0;
};

struct AirborneAgent {
    int id = 0;
    Vec2 position_m;
    double shadowing_db = 0.0;
};

// One row of links.csv: the link actually in use this step. station is -1
// and path_loss_db +inf when no link could be established.
struct LinkSample {
    long step = 0;
    int agent = 0;
    int station = -1;
    double path_loss_db = 0.0;
    LinkClass link = LinkClass::NoLink;
};

// Stateless per-step allocation: agents in ascending id order each take the
// lowest-loss reachable station with a free channel. Station in_use counters
// are reset here; one sample per agent is returned.
std::vector<LinkSample> allocate_channels(std::vector<AirborneAgent> agents,
                                          std::span<BaseStationState> stations,
                                          const PropagationModel& model,
                                          const PathLossParams& params, long step);

}  // namespace utmsim
