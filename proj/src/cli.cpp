#include "utmsim/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "utmsim/engine.hpp"
#include "utmsim/exporters.hpp"
#include "utmsim/logio.hpp"

namespace utmsim {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Returns nullopt after printing the validation report; commands share the
// parse-then-validate preamble.
std::optional<ScenarioConfig> load_valid_scenario(const fs::path& path) {
    ScenarioConfig config;
    try {
        config = parse_scenario(read_file(path));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return std::nullopt;
    }
    const auto report = validate(config);
    if (!report.empty()) {
        std::cerr << "invalid scenario " << path.string() << ":\n";
        for (const auto& entry : report) std::cerr << "  " << entry << "\n";
        return std::nullopt;
    }
    return config;
}

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

}  // namespace

std::vector<std::int64_t> parse_seed_spec(const std::string& spec, std::int64_t base_seed) {
    std::vector<std::int64_t> seeds;
    if (spec.find(',') == std::string::npos) {
        const long n = std::stol(spec);
        if (n < 1) throw std::invalid_argument("seed count must be >= 1");
        for (long k = 0; k < n; ++k) seeds.push_back(base_seed + k);
        return seeds;
    }
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) seeds.push_back(std::stoll(tok));
    if (seeds.empty()) throw std::invalid_argument("empty seed list");
    return seeds;
}

std::string metrics_csv(const std::vector<std::pair<std::int64_t, MetricsReport>>& rows) {
    std::ostringstream out;
    out << "seed,throughput,avg_flight_time_s,conflict_ratio,no_link_rate,poor_link_rate,"
           "cancellations\n";
    if (rows.empty()) return out.str();
    for (const auto& [seed, m] : rows)
        out << seed << ',' << m.throughput << ',' << opt_field(m.avg_flight_time_s) << ','
            << opt_field(m.conflict_ratio) << ',' << opt_field(m.no_link_rate) << ','
            << opt_field(m.poor_link_rate) << ',' << m.cancellations << '\n';

    // mean row: average of the columns that are present, per column
    const double count = static_cast<double>(rows.size());
    double throughput = 0.0;
    double cancels = 0.0;
    const auto mean_opt = [&](auto getter) -> std::optional<double> {
        double sum = 0.0;
        long present = 0;
        for (const auto& [seed, m] : rows)
            if (const auto v = getter(m)) {
                sum += *v;
                ++present;
            }
        if (present == 0) return std::nullopt;
        return sum / static_cast<double>(present);
    };
    for (const auto& [seed, m] : rows) {
        throughput += static_cast<double>(m.throughput);
        cancels += static_cast<double>(m.cancellations);
    }
    out << "mean," << format_double(throughput / count) << ','
        << opt_field(mean_opt([](const MetricsReport& m) { return m.avg_flight_time_s; })) << ','
        << opt_field(mean_opt([](const MetricsReport& m) { return m.conflict_ratio; })) << ','
        << opt_field(mean_opt([](const MetricsReport& m) { return m.no_link_rate; })) << ','
        << opt_field(mean_opt([](const MetricsReport& m) { return m.poor_link_rate; })) << ','
        << format_double(cancels / count) << '\n';
    return out.str();
}

int cmd_run(const RunManifest& manifest) {
    const auto config = load_valid_scenario(manifest.scenario_path);
    if (!config) return kExitInputError;
    if (manifest.seeds.empty()) {
        std::cerr << "error: at least one seed required\n";
        return kExitInputError;
    }

    try {
        std::vector<std::pair<std::int64_t, MetricsReport>> rows;
        for (const std::int64_t seed : manifest.seeds) {
            ScenarioConfig run_config = *config;
            run_config.rng_seed = seed;
            const SimulationLog log = run(run_config);

            const fs::path seed_dir = manifest.out_dir / ("seed_" + std::to_string(seed));
            write_log_csvs(log, seed_dir);
            std::ofstream(seed_dir / "scenario.json", std::ios::binary)
                << serialize_scenario(run_config);
            rows.emplace_back(seed, summarize_metrics(log, run_config.step_seconds));
        }
        std::ofstream out(manifest.out_dir / "metrics.csv", std::ios::binary);
        out << metrics_csv(rows);
    } catch (const std::logic_error& e) {
        std::cerr << "runtime invariant violation: " << e.what() << "\n";
        return kExitRuntimeError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_export_density(const fs::path& run_dir, std::optional<int> window_w,
                       std::optional<int> stride_s, const std::string& mode) {
    AggregateMode aggregate;
    if (mode == "sum")
        aggregate = AggregateMode::Sum;
    else if (mode == "max")
        aggregate = AggregateMode::Max;
    else {
        std::cerr << "error: mode must be sum or max\n";
        return kExitInputError;
    }
    try {
        const ScenarioConfig config = parse_scenario(read_file(run_dir / "scenario.json"));
        const int w = window_w.value_or(config.density_window_w);
        const int s = stride_s.value_or(config.density_stride_s);
        if (w < 1 || s < 1) {
            std::cerr << "error: window and stride must be >= 1\n";
            return kExitInputError;
        }
        export_density(run_dir, w, s, aggregate, run_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_export_coverage(const fs::path& scenario_path, const fs::path& out_dir) {
    const auto config = load_valid_scenario(scenario_path);
    if (!config) return kExitInputError;
    try {
        export_coverage(*config, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

int cmd_export_trajectories(const fs::path& run_dir, const std::string& format) {
    TrackFormat track_format;
    if (format == "kml")
        track_format = TrackFormat::Kml;
    else if (format == "geojson")
        track_format = TrackFormat::GeoJson;
    else {
        std::cerr << "error: format must be kml or geojson\n";
        return kExitInputError;
    }
    try {
        export_trajectories(run_dir, track_format, run_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

}  // namespace utmsim
