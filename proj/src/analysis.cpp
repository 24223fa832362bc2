#include "utmsim/analysis.hpp"

#include <algorithm>

namespace utmsim {

ConflictReport detect_conflicts(std::span<const PositionRecord> positions) {
    ConflictReport report;
    std::unordered_map<Cell, std::vector<int>, CellHash> occupancy;

    size_t i = 0;
    while (i < positions.size()) {
        const long step = positions[i].step;
        occupancy.clear();
        for (; i < positions.size() && positions[i].step == step; ++i)
            occupancy[positions[i].cell].push_back(positions[i].agent);
        for (auto& [cell, agents] : occupancy) {
            if (agents.size() < 2) continue;
            std::sort(agents.begin(), agents.end());
            for (const int a : agents) report.flagged_missions.insert(a);
            report.events.push_back({step, cell, agents});
        }
    }
    // hash-map iteration gave no cell order; fix one
    std::sort(report.events.begin(), report.events.end(),
              [](const ConflictEvent& a, const ConflictEvent& b) {
                  return std::tie(a.step, a.cell.x, a.cell.y) <
                         std::tie(b.step, b.cell.x, b.cell.y);
              });
    return report;
}

std::optional<double> conflict_ratio(const ConflictReport& conflicts, long launched_count) {
    if (launched_count < 1) return std::nullopt;
    return static_cast<double>(conflicts.flagged_missions.size()) /
           static_cast<double>(launched_count);
}

DistributionMap aggregate_positions(std::span<const PositionRecord> positions,
                                    AggregateMode mode) {
    DistributionMap dist;
    if (mode == AggregateMode::Sum) {
        for (const auto& r : positions) ++dist.counts[r.cell];
        return dist;
    }
    // Max over steps of the per-step occupancy count at each cell.
    std::unordered_map<Cell, long, CellHash> step_counts;
    size_t i = 0;
    while (i < positions.size()) {
        const long step = positions[i].step;
        step_counts.clear();
        for (; i < positions.size() && positions[i].step == step; ++i)
            ++step_counts[positions[i].cell];
        for (const auto& [cell, count] : step_counts) {
            auto& best = dist.counts[cell];
            best = std::max(best, count);
        }
    }
    return dist;
}

namespace {

struct WindowGrid {
    int nx;
    int ny;
    int w;
    int s;
};

WindowGrid window_grid(GridDims grid, int window_w, int stride_s) {
    const auto dim = [&](int cells) {
        const int span = cells - window_w + 1;
        return span <= 0 ? 0 : (span + stride_s - 1) / stride_s;
    };
    return {dim(grid.width), dim(grid.height), window_w, stride_s};
}

// Applies `update` to every window index whose W x W footprint contains the
// nonzero cell; only these windows can hold a nonzero result.
template <typename Update>
void scatter(const DistributionMap& dist, const WindowGrid& wg, Update&& update) {
    for (const auto& [cell, count] : dist.counts) {
        const auto range = [&](int c, int n) {
            int lo = (c - wg.w + 1 + wg.s - 1) / wg.s;  // ceil for non-negative c
            if (c - wg.w + 1 < 0) lo = 0;
            const int hi = std::min(c / wg.s, n - 1);
            return std::pair{std::max(lo, 0), hi};
        };
        const auto [x0, x1] = range(cell.x, wg.nx);
        const auto [y0, y1] = range(cell.y, wg.ny);
        for (int wy = y0; wy <= y1; ++wy)
            for (int wx = x0; wx <= x1; ++wx) update(Cell{wx, wy}, count);
    }
}

}  // namespace

DensityMap density_map(const DistributionMap& dist, GridDims grid, int window_w,
                       int stride_s) {
    const WindowGrid wg = window_grid(grid, window_w, stride_s);
    DensityMap out{wg.nx, wg.ny, window_w, stride_s, {}};
    scatter(dist, wg, [&](Cell w, long count) { out.values[w] += count; });
    return out;
}

DensityMap max_density_map(const DistributionMap& dist, GridDims grid, int window_w,
                           int stride_s) {
    const WindowGrid wg = window_grid(grid, window_w, stride_s);
    DensityMap out{wg.nx, wg.ny, window_w, stride_s, {}};
    scatter(dist, wg, [&](Cell w, long count) {
        auto& v = out.values[w];
        v = std::max(v, count);
    });
    return out;
}

MetricsReport summarize_metrics(const SimulationLog& log, double step_seconds) {
    MetricsReport report;
    report.throughput = static_cast<long>(log.launches.size());
    report.cancellations = static_cast<long>(log.cancellations.size());

    if (!log.landings.empty()) {
        std::unordered_map<int, long> launch_step;
        for (const auto& e : log.launches) launch_step[e.agent] = e.step;
        double total = 0.0;
        for (const auto& e : log.landings)
            total += static_cast<double>(e.step - launch_step.at(e.agent)) * step_seconds;
        report.avg_flight_time_s = total / static_cast<double>(log.landings.size());
    }

    report.conflict_ratio =
        conflict_ratio(detect_conflicts(log.positions), report.throughput);

    if (!log.links.empty()) {
        long nolink = 0;
        long poor = 0;
        for (const auto& s : log.links) {
            if (s.link == LinkClass::NoLink) ++nolink;
            if (s.link == LinkClass::Poor) ++poor;
        }
        const double total = static_cast<double>(log.links.size());
        report.no_link_rate = nolink / total;
        report.poor_link_rate = poor / total;
    }
    return report;
}

}  // namespace utmsim
