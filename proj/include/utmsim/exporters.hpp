#pragma once

#include <filesystem>

#include "utmsim/analysis.hpp"
#include "utmsim/scenario.hpp"

namespace utmsim {

// All exporters are pure functions of their input files: re-export over the
// same inputs is byte-identical.

// density.csv (dense matrix, rows = window y), density.pgm (max-normalized
// P2 graymap) and areas.csv (launch/landing rectangles in cell coordinates)
// from positions.csv + scenario.json in run_dir.
void export_density(const std::filesystem::path& run_dir, int window_w, int stride_s,
                    AggregateMode mode, const std::filesystem::path& out_dir);

// Per-cell best-class map: coverage.csv (codes 2 good / 1 poor / 0 nolink),
// one graymap per class and a combined graymap.
void export_coverage(const ScenarioConfig& config, const std::filesystem::path& out_dir);

enum class TrackFormat { Kml, GeoJson };

// One timestamped linestring per launched mission (cancellations have no
// positions and are naturally excluded). Vertices are cell centers mapped
// through the scenario geo_anchor, or raw planar meters without one.
void export_trajectories(const std::filesystem::path& run_dir, TrackFormat format,
                         const std::filesystem::path& out_dir);

// pixel = floor(255 * value / max); an all-zero matrix stays all black.
void write_pgm(const std::filesystem::path& path, const std::vector<long>& values, int nx,
               int ny);

}  // namespace utmsim
