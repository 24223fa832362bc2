#include "utmsim/exporters.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "utmsim/comms.hpp"
#include "utmsim/logio.hpp"

namespace utmsim {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ScenarioConfig load_run_scenario(const fs::path& run_dir) {
    return parse_scenario(read_file(run_dir / "scenario.json"));
}

std::vector<long> dense_matrix(const DensityMap& map) {
    std::vector<long> m(static_cast<size_t>(map.nx) * map.ny, 0);
    for (const auto& [w, v] : map.values)
        m[static_cast<size_t>(w.y) * map.nx + w.x] = v;
    return m;
}

// ISO-8601 UTC timestamp at `seconds` past a fixed epoch; simulation time is
// relative, so the epoch choice is arbitrary but frozen.
std::string track_timestamp(double seconds) {
    const long long whole = static_cast<long long>(seconds);
    const long long ms = static_cast<long long>((seconds - whole) * 1000.0 + 0.5);
    const long long days = whole / 86400;
    const long long rem = whole % 86400;
    // days since 1970-01-01 in the proleptic Gregorian calendar
    long long era_day = days + 719468;
    const long long era = era_day / 146097;
    const long long doe = era_day - era * 146097;
    const long long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long year0 = yoe + era * 400;
    const long long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const long long mp = (5 * doy + 2) / 153;
    const long long day = doy - (153 * mp + 2) / 5 + 1;
    const long long month = mp < 10 ? mp + 3 : mp - 9;
    const long long year = month <= 2 ? year0 + 1 : year0;
    char buf[48];
    if (ms == 0)
        std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lldT%02lld:%02lld:%02lldZ", year,
                      month, day, rem / 3600, (rem / 60) % 60, rem % 60);
    else
        std::snprintf(buf, sizeof(buf), "%04lld-%02lld-%02lldT%02lld:%02lld:%02lld.%03lldZ",
                      year, month, day, rem / 3600, (rem / 60) % 60, rem % 60, ms);
    return buf;
}

struct TrackPoint {
    long step;
    double x;  // lon or planar meters
    double y;  // lat or planar meters
};

std::map<int, std::vector<TrackPoint>> build_tracks(const SimulationLog& log,
                                                    const ScenarioConfig& config) {
    std::map<int, std::vector<TrackPoint>> tracks;
    auto sorted = log.positions;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const PositionRecord& a, const PositionRecord& b) {
                         return std::tie(a.agent, a.step) < std::tie(b.agent, b.step);
                     });
    for (const auto& r : sorted) {
        const Vec2 p = cell_center_m(r.cell, config.cell_size_m);
        TrackPoint tp{r.step, p.x, p.y};
        if (config.geo_anchor) {
            tp.x = config.geo_anchor->lon + p.x / config.geo_anchor->meters_per_degree;
            tp.y = config.geo_anchor->lat + p.y / config.geo_anchor->meters_per_degree;
        }
        tracks[r.agent].push_back(tp);
    }
    return tracks;
}

std::string coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

}  // namespace

void write_pgm(const fs::path& path, const std::vector<long>& values, int nx, int ny) {
    const long max = values.empty() ? 0 : *std::max_element(values.begin(), values.end());
    auto out = open_out(path);
    out << "P2\n" << nx << ' ' << ny << "\n255\n";
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            const long v = values[static_cast<size_t>(y) * nx + x];
            // nonzero cells stay visible even when max > 255
            const long pixel = v <= 0 ? 0 : std::max(1L, 255 * v / max);
            out << pixel << (x + 1 == nx ? '\n' : ' ');
        }
    }
}

void export_density(const fs::path& run_dir, int window_w, int stride_s, AggregateMode mode,
                    const fs::path& out_dir) {
    const ScenarioConfig config = load_run_scenario(run_dir);
    const SimulationLog log = read_log_csvs(run_dir);

    const DistributionMap dist = aggregate_positions(log.positions, mode);
    const DensityMap map = mode == AggregateMode::Max
                               ? max_density_map(dist, config.grid(), window_w, stride_s)
                               : density_map(dist, config.grid(), window_w, stride_s);
    const std::vector<long> m = dense_matrix(map);

    fs::create_directories(out_dir);
    {
        auto out = open_out(out_dir / "density.csv");
        for (int y = 0; y < map.ny; ++y) {
            for (int x = 0; x < map.nx; ++x)
                out << m[static_cast<size_t>(y) * map.nx + x] << (x + 1 == map.nx ? '\n' : ',');
        }
    }
    write_pgm(out_dir / "density.pgm", m, map.nx, map.ny);
    {
        auto out = open_out(out_dir / "areas.csv");
        out << "kind,index,x_min,y_min,x_max,y_max\n";
        for (size_t i = 0; i < config.launch_areas.size(); ++i) {
            const Rect& r = config.launch_areas[i].region;
            out << "launch," << i << ',' << r.x_min << ',' << r.y_min << ',' << r.x_max << ','
                << r.y_max << '\n';
        }
        for (size_t i = 0; i < config.landing_areas.size(); ++i) {
            const Rect& r = config.landing_areas[i].region;
            out << "landing," << i << ',' << r.x_min << ',' << r.y_min << ',' << r.x_max << ','
                << r.y_max << '\n';
        }
    }
}

void export_coverage(const ScenarioConfig& config, const fs::path& out_dir) {
    const auto model = make_propagation_model(config.propagation_model, config.path_loss);
    if (!model)
        throw std::runtime_error("unknown propagation model '" + config.propagation_model + "'");
    const CoverageMap map = coverage_mask(config.base_stations, *model, config.path_loss,
                                          config.grid(), config.cell_size_m);

    fs::create_directories(out_dir);
    const size_t count = map.best_class.size();
    {
        auto out = open_out(out_dir / "coverage.csv");
        for (int y = 0; y < map.height; ++y) {
            for (int x = 0; x < map.width; ++x) {
                const LinkClass c = map.at({x, y});
                const int code = c == LinkClass::Good ? 2 : c == LinkClass::Poor ? 1 : 0;
                out << code << (x + 1 == map.width ? '\n' : ',');
            }
        }
    }
    const auto mask = [&](LinkClass keep) {
        std::vector<long> v(count, 0);
        for (size_t i = 0; i < count; ++i) v[i] = map.best_class[i] == keep ? 1 : 0;
        return v;
    };
    write_pgm(out_dir / "coverage_good.pgm", mask(LinkClass::Good), map.width, map.height);
    write_pgm(out_dir / "coverage_poor.pgm", mask(LinkClass::Poor), map.width, map.height);
    write_pgm(out_dir / "coverage_nolink.pgm", mask(LinkClass::NoLink), map.width, map.height);
    std::vector<long> combined(count, 0);
    for (size_t i = 0; i < count; ++i)
        combined[i] = map.best_class[i] == LinkClass::Good   ? 2
                      : map.best_class[i] == LinkClass::Poor ? 1
                                                             : 0;
    write_pgm(out_dir / "coverage.pgm", combined, map.width, map.height);
}

void export_trajectories(const fs::path& run_dir, TrackFormat format, const fs::path& out_dir) {
    const ScenarioConfig config = load_run_scenario(run_dir);
    const SimulationLog log = read_log_csvs(run_dir);
    const auto tracks = build_tracks(log, config);

    fs::create_directories(out_dir);
    if (format == TrackFormat::Kml) {
        auto out = open_out(out_dir / "trajectories.kml");
        out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
            << "<kml xmlns=\"http://www.opengis.net/kml/2.2\""
            << " xmlns:gx=\"http://www.google.com/kml/ext/2.2\">\n"
            << "<Document>\n";
        for (const auto& [agent, points] : tracks) {
            out << "  <Placemark>\n"
                << "    <name>mission " << agent << "</name>\n"
                << "    <gx:Track>\n";
            for (const auto& p : points)
                out << "      <when>" << track_timestamp(p.step * config.step_seconds)
                    << "</when>\n";
            for (const auto& p : points)
                out << "      <gx:coord>" << coord(p.x) << ' ' << coord(p.y) << " 0</gx:coord>\n";
            out << "    </gx:Track>\n  </Placemark>\n";
        }
        out << "</Document>\n</kml>\n";
    } else {
        nlohmann::ordered_json doc;
        doc["type"] = "FeatureCollection";
        doc["features"] = nlohmann::ordered_json::array();
        for (const auto& [agent, points] : tracks) {
            nlohmann::ordered_json feature;
            feature["type"] = "Feature";
            feature["properties"]["agent"] = agent;
            feature["properties"]["launch_step"] = points.front().step;
            auto& times = feature["properties"]["times_s"];
            times = nlohmann::ordered_json::array();
            for (const auto& p : points) times.push_back(p.step * config.step_seconds);
            feature["geometry"]["type"] = "LineString";
            auto& coords = feature["geometry"]["coordinates"];
            coords = nlohmann::ordered_json::array();
            for (const auto& p : points) coords.push_back({p.x, p.y});
            doc["features"].push_back(std::move(feature));
        }
        auto out = open_out(out_dir / "trajectories.geojson");
        out << doc.dump(2) << '\n';
    }
}

}  // namespace utmsim
