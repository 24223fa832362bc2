#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "utmsim/cli.hpp"
#include "utmsim/scenario.hpp"

namespace {

// UTMSIM_OUT, when set, overrides the output directory of run and
// export-coverage.
std::string output_dir(const std::string& flag_value) {
    const char* env = std::getenv("UTMSIM_OUT");
    return (env && *env) ? env : flag_value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sUAS traffic and C2-link usage simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string seeds = "1";
    std::string out = "out";
    std::optional<int> window;
    std::optional<int> stride;
    std::string mode = "max";
    std::string format = "kml";

    auto* run = app.add_subcommand("run", "run a scenario over one or more seeds");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--seeds", seeds, "replicate count N, or comma-separated seed list");
    run->add_option("--out", out, "output directory");

    auto* density = app.add_subcommand("export-density",
                                       "density heatmap + matrix from a run directory");
    density->add_option("--out", out, "run directory (input and output)")->required();
    density->add_option("--window", window, "window size W (default: scenario value)");
    density->add_option("--stride", stride, "stride S (default: scenario value)");
    density->add_option("--mode", mode, "sum or max")->check(CLI::IsMember({"sum", "max"}));

    auto* coverage = app.add_subcommand("export-coverage", "per-cell link class maps");
    coverage->add_option("--scenario", scenario_path, "scenario file")->required();
    coverage->add_option("--out", out, "output directory");

    auto* tracks = app.add_subcommand("export-trajectories",
                                      "timestamped mission linestrings from a run directory");
    tracks->add_option("--out", out, "run directory (input and output)")->required();
    tracks->add_option("--format", format, "kml or geojson")
        ->check(CLI::IsMember({"kml", "geojson"}));

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        utmsim::RunManifest manifest;
        manifest.scenario_path = scenario_path;
        manifest.out_dir = output_dir(out);
        try {
            std::int64_t base = 1;
            // seed expansion for "--seeds N" starts at the scenario's rng_seed
            std::ifstream in(scenario_path, std::ios::binary);
            if (in) {
                std::ostringstream os;
                os << in.rdbuf();
                base = utmsim::parse_scenario(os.str()).rng_seed;
            }
            manifest.seeds = utmsim::parse_seed_spec(seeds, base);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return utmsim::kExitInputError;
        }
        return utmsim::cmd_run(manifest);
    }
    if (density->parsed()) return utmsim::cmd_export_density(out, window, stride, mode);
    if (coverage->parsed()) return utmsim::cmd_export_coverage(scenario_path, output_dir(out));
    return utmsim::cmd_export_trajectories(out, format);
}
