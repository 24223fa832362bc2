#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "utmsim/analysis.hpp"

namespace utmsim {

// Exit codes shared by all commands: 0 ok, 1 scenario/input error, 2 runtime
// invariant violation.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitRuntimeError = 2;

struct RunManifest {
    std::filesystem::path scenario_path;
    std::vector<std::int64_t> seeds;  // resolved seed values, >= 1 entry
    std::filesystem::path out_dir;
};

// "N" -> {base .. base+N-1}; "a,b,c" -> literal seed values.
std::vector<std::int64_t> parse_seed_spec(const std::string& spec, std::int64_t base_seed);

// Runs every seed; writes out_dir/seed_<value>/{positions,links,events,
// scenario.json} and out_dir/metrics.csv (one row per seed plus a mean row).
int cmd_run(const RunManifest& manifest);

// Exporters over a previous run directory (the per-seed directory).
int cmd_export_density(const std::filesystem::path& run_dir, std::optional<int> window_w,
                       std::optional<int> stride_s, const std::string& mode);
int cmd_export_coverage(const std::filesystem::path& scenario_path,
                        const std::filesystem::path& out_dir);
int cmd_export_trajectories(const std::filesystem::path& run_dir, const std::string& format);

std::string metrics_csv(const std::vector<std::pair<std::int64_t, MetricsReport>>& rows);

}  // namespace utmsim
