#pragma once

#include <filesystem>
#include <string>

#include "utmsim/engine.hpp"

namespace utmsim {

// CSV serialization of a run log: positions.csv, links.csv, events.csv.
// Headers are mandatory, rows sorted by step then agent, floats printed
// with 6 decimals. Writing the same log twice is byte-identical.
void write_log_csvs(const SimulationLog& log, const std::filesystem::path& dir);

// Reads a log back from a run directory (the inverse of write_log_csvs up
// to sim_steps, which CSVs do not carry).
SimulationLog read_log_csvs(const std::filesystem::path& dir);

std::string format_double(double v);  // fixed 6-decimal formatting

}  // namespace utmsim
