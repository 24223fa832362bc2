#pragma once

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "utmsim/grid.hpp"

namespace utmsim {

using CellPred = std::function<bool(Cell)>;

// Per-step occupancy plan. cells[k] is the cell occupied at step
// launch_step + k; the first cell is the origin and the last the
// destination. positions_m, when non-empty, carries the continuous
// position per step (free-flight rasterization); empty means the agent
// sits at cell centers.
struct Trajectory {
    long launch_step = 0;
    std::vector<Cell> cells;
    std::vector<Vec2> positions_m;

    long flight_steps() const { return static_cast<long>(cells.size()) - 1; }
    long land_step() const { return launch_step + flight_steps(); }
    Vec2 position_m(size_t k, double cell_size_m) const {
        return positions_m.empty() ? cell_center_m(cells[k], cell_size_m) : positions_m[k];
    }
};

enum class AxisOrder { XFirst, YFirst };

// Straight free-flight path sampled once per step: the position at step k is
// origin + min(k*speed, D) * unit(dest - origin), quantized to the cell under
// it. Cells crossed between samples are not claimed.
Trajectory p2p_trajectory(Vec2 origin_m, Vec2 dest_m, double speed_m_per_step,
                          double cell_size_m);

// L-shaped path, one full axis then the other; one cell per step.
Trajectory manhattan_trajectory(Cell origin, Cell dest, AxisOrder order);

// Shortest 4-connected path around blocked cells. Deterministic: neighbors
// expand in +x, -x, +y, -y order and the frontier is keyed by
// (cost, L1-to-goal, insertion order). nullopt = destination unreachable.
std::optional<Trajectory> constrained_route(Cell origin, Cell dest, GridDims grid,
                                            const CellPred& blocked);

// Sparse (cell, step) -> agent booking map. Double-booking a key is a
// planner bug and throws; callers must check availability first.
class ReservationTable {
public:
    bool available(Cell c, long step) const;
    std::optional<int> owner(Cell c, long step) const;
    void book(Cell c, long step, int agent_id);
    void book(const Trajectory& t, int agent_id);
    void release(int agent_id);
    size_t size() const { return slots_.size(); }

private:
    static std::uint64_t key(Cell c, long step);
    std::unordered_map<std::uint64_t, int> slots_;
    std::unordered_map<int, std::vector<std::uint64_t>> by_agent_;
};

struct Mission {
    Cell origin;
    Cell dest;
};

struct PlanOutcome {
    bool planned = false;
    Trajectory trajectory;  // launch_step = decision step + hold
    int hold = 0;
    std::string reason;  // set when cancelled
};

// Managed planner: for each ground hold h = 0..max_hold it tries the XFirst
// then YFirst L-path (or the single shortest detour when both cross blocked
// cells) and returns the first candidate whose every (cell, step) slot is
// free and whose every cell is inside coverage. Hold steps occupy the origin
// and are checked and booked too. On success the reservations are booked
// under agent_id before returning; on exhaustion returns a cancellation.
PlanOutcome plan_managed(const Mission& mission, long t0, ReservationTable& table,
                         GridDims grid, const CellPred& blocked, const CellPred& coverage,
                         int max_hold, int agent_id);

}  // namespace utmsim
