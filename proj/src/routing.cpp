#include "utmsim/routing.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace utmsim {

Trajectory p2p_trajectory(Vec2 origin_m, Vec2 dest_m, double speed_m_per_step,
                          double cell_size_m) {
    assert(speed_m_per_step > 0.0);
    const double dx = dest_m.x - origin_m.x;
    const double dy = dest_m.y - origin_m.y;
    const double dist = std::hypot(dx, dy);
    const long steps = static_cast<long>(std::ceil(dist / speed_m_per_step));

    Trajectory t;
    t.cells.reserve(steps + 1);
    t.positions_m.reserve(steps + 1);
    for (long k = 0; k <= steps; ++k) {
        const double along = std::min(k * speed_m_per_step, dist);
        // multiply before dividing so integer-exact geometries stay exact
        const Vec2 p = along >= dist
                           ? dest_m
                           : Vec2{origin_m.x + along * dx / dist, origin_m.y + along * dy / dist};
        t.positions_m.push_back(p);
        t.cells.push_back(cell_of_position(p, cell_size_m));
    }
    return t;
}

Trajectory manhattan_trajectory(Cell origin, Cell dest, AxisOrder order) {
    Trajectory t;
    t.cells.reserve(std::abs(dest.x - origin.x) + std::abs(dest.y - origin.y) + 1);
    Cell cur = origin;
    t.cells.push_back(cur);
    auto walk_x = [&] {
        const int step = dest.x > cur.x ? 1 : -1;
        while (cur.x != dest.x) {
            cur.x += step;
            t.cells.push_back(cur);
        }
    };
    auto walk_y = [&] {
        const int step = dest.y > cur.y ? 1 : -1;
        while (cur.y != dest.y) {
            cur.y += step;
            t.cells.push_back(cur);
        }
    };
    if (order == AxisOrder::XFirst) {
        walk_x();
        walk_y();
    } else {
        walk_y();
        walk_x();
    }
    return t;
}

std::optional<Trajectory> constrained_route(Cell origin, Cell dest, GridDims grid,
                                            const CellPred& blocked) {
    if (!grid.contains(origin) || !grid.contains(dest)) return std::nullopt;
    if (blocked(origin) || blocked(dest)) return std::nullopt;

    const auto index = [&](Cell c) { return static_cast<size_t>(c.y) * grid.width + c.x; };
    const auto l1 = [&](Cell c) { return std::abs(c.x - dest.x) + std::abs(c.y - dest.y); };

    struct Entry {
        int cost;
        int heuristic;
        long seq;
        Cell cell;
    };
    const auto worse = [](const Entry& a, const Entry& b) {
        if (a.cost != b.cost) return a.cost > b.cost;
        if (a.heuristic != b.heuristic) return a.heuristic > b.heuristic;
        return a.seq > b.seq;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> frontier(worse);

    constexpr int kUnvisited = -1;
    std::vector<int> best_cost(static_cast<size_t>(grid.width) * grid.height, kUnvisited);
    std::vector<Cell> parent(static_cast<size_t>(grid.width) * grid.height);

    long seq = 0;
    frontier.push({0, l1(origin), seq++, origin});
    best_cost[index(origin)] = 0;
    parent[index(origin)] = origin;

    bool found = false;
    while (!frontier.empty()) {
        const Entry e = frontier.top();
        frontier.pop();
        if (e.cost > best_cost[index(e.cell)]) continue;  // stale entry
        if (e.cell == dest) {
            found = true;
            break;
        }
        const Cell neighbors[4] = {{e.cell.x + 1, e.cell.y},
                                   {e.cell.x - 1, e.cell.y},
                                   {e.cell.x, e.cell.y + 1},
                                   {e.cell.x, e.cell.y - 1}};
        for (const Cell n : neighbors) {
            if (!grid.contains(n) || blocked(n)) continue;
            const int cost = e.cost + 1;
            const size_t ni = index(n);
            if (best_cost[ni] != kUnvisited && best_cost[ni] <= cost) continue;
            best_cost[ni] = cost;
            parent[ni] = e.cell;
            frontier.push({cost, l1(n), seq++, n});
        }
    }
    if (!found) return std::nullopt;

    Trajectory t;
    for (Cell c = dest; !(c == origin); c = parent[index(c)]) t.cells.push_back(c);
    t.cells.push_back(origin);
    std::reverse(t.cells.begin(), t.cells.end());
    return t;
}

std::uint64_t ReservationTable::key(Cell c, long step) {
    // 16 bits per axis and 32 bits of steps
    if (c.x < 0 || c.x >= (1 << 16) || c.y < 0 || c.y >= (1 << 16) || step < 0 ||
        step >= (1LL << 32))
        throw std::invalid_argument("reservation key out of range");
    return (static_cast<std::uint64_t>(step) << 32) |
           (static_cast<std::uint64_t>(c.y) << 16) | static_cast<std::uint64_t>(c.x);
}

bool ReservationTable::available(Cell c, long step) const {
    return slots_.find(key(c, step)) == slots_.end();
}

std::optional<int> ReservationTable::owner(Cell c, long step) const {
    auto it = slots_.find(key(c, step));
    if (it == slots_.end()) return std::nullopt;
    return it->second;
}

void ReservationTable::book(Cell c, long step, int agent_id) {
    const auto k = key(c, step);
    auto [it, inserted] = slots_.emplace(k, agent_id);
    if (!inserted)
        throw std::logic_error("reservation double-booking: cell (" + std::to_string(c.x) +
                               "," + std::to_string(c.y) + ") step " + std::to_string(step) +
                               " owned by agent " + std::to_string(it->second) +
                               ", booked again by agent " + std::to_string(agent_id));
    by_agent_[agent_id].push_back(k);
}

void ReservationTable::book(const Trajectory& t, int agent_id) {
    for (size_t k = 0; k < t.cells.size(); ++k)
        book(t.cells[k], t.launch_step + static_cast<long>(k), agent_id);
}

void ReservationTable::release(int agent_id) {
    auto it = by_agent_.find(agent_id);
    if (it == by_agent_.end()) return;
    for (const auto k : it->second) slots_.erase(k);
    by_agent_.erase(it);
}

namespace {

bool crosses_blocked(const Trajectory& t, const CellPred& blocked) {
    for (const Cell c : t.cells)
        if (blocked(c)) return true;
    return false;
}

}  // namespace

PlanOutcome plan_managed(const Mission& mission, long t0, ReservationTable& table,
                         GridDims grid, const CellPred& blocked, const CellPred& coverage,
                         int max_hold, int agent_id) {
    PlanOutcome out;
    if (blocked(mission.origin) || blocked(mission.dest)) {
        out.reason = "endpoint blocked";
        return out;
    }
    if (!coverage(mission.origin) || !coverage(mission.dest)) {
        out.reason = "endpoint outside coverage";
        return out;
    }

    // Candidate geometry is hold-independent: the two L-shapes, or the single
    // shortest detour when no-fly cells cut both of them.
    std::vector<Trajectory> candidates;
    for (const AxisOrder order : {AxisOrder::XFirst, AxisOrder::YFirst}) {
        Trajectory t = manhattan_trajectory(mission.origin, mission.dest, order);
        if (!crosses_blocked(t, blocked)) candidates.push_back(std::move(t));
        if (candidates.size() == 2 && candidates[0].cells == candidates[1].cells) {
            candidates.pop_back();  // degenerate straight line, same path twice
            break;
        }
    }
    if (candidates.empty()) {
        auto detour = constrained_route(mission.origin, mission.dest, grid, blocked);
        if (!detour) {
            out.reason = "unreachable";
            return out;
        }
        candidates.push_back(std::move(*detour));
    }

    bool coverage_failed = false;
    for (int hold = 0; hold <= max_hold; ++hold) {
        const long start = t0 + hold;
        for (const Trajectory& cand : candidates) {
            bool free = true;
            for (long s = t0; s < start && free; ++s)
                free = table.available(mission.origin, s);
            for (size_t k = 0; k < cand.cells.size() && free; ++k) {
                const Cell c = cand.cells[k];
                if (!coverage(c)) {
                    coverage_failed = true;
                    free = false;
                } else {
                    free = table.available(c, start + static_cast<long>(k));
                }
            }
            if (!free) continue;

            out.planned = true;
            out.hold = hold;
            out.trajectory = cand;
            out.trajectory.launch_step = start;
            for (long s = t0; s < start; ++s) table.book(mission.origin, s, agent_id);
            table.book(out.trajectory, agent_id);
            return out;
        }
    }
    out.reason = coverage_failed ? "no coverage" : "reservation conflict";
    return out;
}

}  // namespace utmsim
