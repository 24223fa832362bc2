#pragma once

#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <vector>

#include "utmsim/engine.hpp"
#include "utmsim/grid.hpp"

namespace utmsim {

// Sparse cell -> sUAS count; absent key means 0. Holds either one step's
// occupancy or a per-cell aggregate over steps.
struct DistributionMap {
    std::unordered_map<Cell, long, CellHash> counts;
};

// Sparse window-index -> value for a W x W filter slid with stride S over
// fully interior windows. Dimensions are ceil((grid - W + 1) / S) per axis.
struct DensityMap {
    int nx = 0;
    int ny = 0;
    int window_w = 0;
    int stride_s = 0;
    std::unordered_map<Cell, long, CellHash> values;

    long at(int x, int y) const {
        auto it = values.find(Cell{x, y});
        return it == values.end() ? 0 : it->second;
    }
};

struct ConflictEvent {
    long step = 0;
    Cell cell;
    std::vector<int> agents;  // ascending, size >= 2
};

struct ConflictReport {
    std::vector<ConflictEvent> events;
    std::set<int> flagged_missions;
};

// A cell occupied by more than one agent at the same step is one conflict
// event; every member mission is flagged. Records must be sorted by step.
ConflictReport detect_conflicts(std::span<const PositionRecord> positions);

// Flagged missions over launched missions; absent when nothing launched.
std::optional<double> conflict_ratio(const ConflictReport& conflicts, long launched_count);

enum class AggregateMode { Sum, Max };

// Per-cell aggregate of position records: Sum counts agent-steps, Max keeps
// the largest single-step occupancy ever seen (the figure-map input).
DistributionMap aggregate_positions(std::span<const PositionRecord> positions,
                                    AggregateMode mode);

// All-pass (sum) filter: D(x,y) = sum of d over the W x W window at
// (x*S, y*S). Only windows touching nonzero cells materialize.
DensityMap density_map(const DistributionMap& dist, GridDims grid, int window_w, int stride_s);

// Max filter variant of the same windowing.
DensityMap max_density_map(const DistributionMap& dist, GridDims grid, int window_w,
                           int stride_s);

struct MetricsReport {
    long throughput = 0;  // launch events in the run window
    std::optional<double> avg_flight_time_s;  // landed missions only
    std::optional<double> conflict_ratio;
    std::optional<double> no_link_rate;
    std::optional<double> poor_link_rate;
    long cancellations = 0;
};

MetricsReport summarize_metrics(const SimulationLog& log, double step_seconds);

}  // namespace utmsim
