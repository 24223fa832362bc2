// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Each check is self-contained and uses independent oracles where the
// expected values are not forced by construction.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "scenario_fixtures.hpp"
#include "utmsim/analysis.hpp"
#include "utmsim/cli.hpp"
#include "utmsim/comms.hpp"
#include "utmsim/engine.hpp"
#include "utmsim/logio.hpp"

using namespace utmsim;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

fs::path scratch_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("utmsim_acceptance_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

MetricsReport run_metrics(ScenarioConfig config, std::int64_t seed) {
    config.rng_seed = seed;
    return summarize_metrics(run(config), config.step_seconds);
}

// ---- criterion 1 & 2: conflict behaviour of the desk-scale scenario ----

void criterion_managed_zero_conflict() {
    const auto config = fixtures::desk_scenario(TrajectoryType::Manhattan, true);
    bool all_zero = true;
    double worst_seconds = 0.0;
    long launched = 0;
    for (std::int64_t seed = 1; seed <= 10; ++seed) {
        const auto t0 = std::chrono::steady_clock::now();
        const MetricsReport m = run_metrics(config, seed);
        worst_seconds = std::max(worst_seconds, seconds_since(t0));
        launched += m.throughput;
        if (!m.conflict_ratio.has_value() || *m.conflict_ratio != 0.0) all_zero = false;
    }
    report(1, all_zero && worst_seconds < 10.0,
           "managed runs have conflict ratio exactly 0 on every seed",
           fmt(launched) + " launches over 10 seeds, slowest seed " + fmt(worst_seconds) + "s");
}

void criterion_conflict_ordering() {
    double manhattan_sum = 0.0;
    double p2p_sum = 0.0;
    for (std::int64_t seed = 1; seed <= 10; ++seed) {
        manhattan_sum +=
            run_metrics(fixtures::desk_scenario(TrajectoryType::Manhattan, false), seed)
                .conflict_ratio.value();
        p2p_sum += run_metrics(fixtures::desk_scenario(TrajectoryType::P2P, false), seed)
                       .conflict_ratio.value();
    }
    const double manhattan = manhattan_sum / 10.0;
    const double p2p = p2p_sum / 10.0;
    report(2, manhattan > p2p && p2p > 0.0,
           "unmanaged conflict ratios order Manhattan > P2P > 0",
           "Manhattan " + fmt(manhattan) + ", P2P " + fmt(p2p));
}

// ---- criterion 3: 4/pi flight-time ratio ----

void criterion_flight_time_ratio() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 500.0 * 18.0);
    double manhattan_steps = 0.0;
    double p2p_steps = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const Vec2 o{u(gen), u(gen)};
        const Vec2 d{u(gen), u(gen)};
        const Cell oc = cell_of_position(o, 18.0);
        const Cell dc = cell_of_position(d, 18.0);
        manhattan_steps +=
            static_cast<double>(manhattan_trajectory(oc, dc, AxisOrder::XFirst).flight_steps());
        p2p_steps += static_cast<double>(p2p_trajectory(o, d, 18.0, 18.0).flight_steps());
    }
    const double ratio = manhattan_steps / p2p_steps;
    const double target = 4.0 / M_PI;
    const double elapsed = seconds_since(t0);
    report(3, ratio > 0.95 * target && ratio < 1.05 * target && elapsed < 5.0,
           "mean Manhattan / mean P2P flight time is 4/pi within 5%",
           "ratio " + fmt(ratio) + ", target " + fmt(target) + ", " + fmt(elapsed) + "s");
}

// ---- criteria 4 & 5: throughput and flight-time costs of management ----

void criterion_throughput_and_flight_time() {
    bool monotone = true;
    bool strict_when_cancelled = true;
    long total_cancellations = 0;
    double unmanaged_time_sum = 0.0;
    double managed_hold5_time_sum = 0.0;
    double managed_hold0_time_sum = 0.0;
    for (std::int64_t seed = 1; seed <= 10; ++seed) {
        const MetricsReport unmanaged =
            run_metrics(fixtures::desk_scenario(TrajectoryType::Manhattan, false), seed);
        const MetricsReport managed =
            run_metrics(fixtures::desk_scenario(TrajectoryType::Manhattan, true, 0), seed);
        const MetricsReport held =
            run_metrics(fixtures::desk_scenario(TrajectoryType::Manhattan, true, 5), seed);

        if (managed.throughput > unmanaged.throughput) monotone = false;
        if (managed.cancellations >= 1 && managed.throughput >= unmanaged.throughput)
            strict_when_cancelled = false;
        total_cancellations += managed.cancellations;

        unmanaged_time_sum += unmanaged.avg_flight_time_s.value();
        managed_hold0_time_sum += managed.avg_flight_time_s.value();
        managed_hold5_time_sum += held.avg_flight_time_s.value();
    }
    report(4, monotone && strict_when_cancelled && total_cancellations >= 1,
           "managed throughput never exceeds unmanaged and drops when launches cancel",
           fmt(total_cancellations) + " cancellations over 10 seeds");

    const double unmanaged_mean = unmanaged_time_sum / 10.0;
    const double hold0 = managed_hold0_time_sum / 10.0;
    const double hold5 = managed_hold5_time_sum / 10.0;
    report(5, hold0 < 1.05 * unmanaged_mean && hold5 < 1.05 * unmanaged_mean,
           "managed flight time inflation stays under 5% for max_hold <= 5",
           "unmanaged " + fmt(unmanaged_mean) + "s, managed " + fmt(hold0) + "s (hold 0) / " +
               fmt(hold5) + "s (hold 5)");
}

// ---- criterion 6: path loss exactness and monotonicity ----

void criterion_path_loss() {
    const PathLossParams params;  // pl_d0 40, d0 1, n 2.7, sigma 0
    const bool exact = std::abs(path_loss_db(1000.0, params) - 121.0) < 1e-9;

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(1.0, 100000.0);
    bool monotone = true;
    for (int i = 0; i < 100000; ++i) {
        double a = u(gen);
        double b = u(gen);
        if (a > b) std::swap(a, b);
        if (path_loss_db(a, params) > path_loss_db(b, params)) monotone = false;
    }
    report(6, exact && monotone, "path loss matches the hand-evaluated 121 dB and is monotone",
           "pl(1000m) = " + fmt(path_loss_db(1000.0, params)));
}

// ---- criterion 7: density maps equal the dense convolution oracle ----

void criterion_density_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(99);
    bool equal = true;
    for (int iter = 0; iter < 1000 && equal; ++iter) {
        const int gw = 2 + static_cast<int>(gen() % 31);
        const int gh = 2 + static_cast<int>(gen() % 31);
        const GridDims grid{gw, gh};
        std::vector<long> cells(static_cast<size_t>(gw) * gh, 0);
        const int fill = static_cast<int>(gen() % (gw * gh / 2 + 1));
        for (int k = 0; k < fill; ++k) cells[gen() % cells.size()] = static_cast<long>(gen() % 5);
        const int w = 1 + static_cast<int>(gen() % std::min(gw, gh));
        const int s = 1 + static_cast<int>(gen() % 5);

        DistributionMap dist;
        for (int y = 0; y < gh; ++y)
            for (int x = 0; x < gw; ++x)
                if (cells[static_cast<size_t>(y) * gw + x] > 0)
                    dist.counts[Cell{x, y}] = cells[static_cast<size_t>(y) * gw + x];

        const DensityMap sum = density_map(dist, grid, w, s);
        const DensityMap peak = max_density_map(dist, grid, w, s);
        for (int wy = 0; wy < sum.ny && equal; ++wy)
            for (int wx = 0; wx < sum.nx && equal; ++wx) {
                long acc = 0;
                long top = 0;
                for (int j = 0; j < w; ++j)
                    for (int i = 0; i < w; ++i) {
                        const long v =
                            cells[static_cast<size_t>(wy * s + j) * gw + (wx * s + i)];
                        acc += v;
                        top = std::max(top, v);
                    }
                if (sum.at(wx, wy) != acc || peak.at(wx, wy) != top) equal = false;
            }
    }
    const double elapsed = seconds_since(t0);
    report(7, equal && elapsed < 5.0,
           "density and max-density maps equal the dense double-loop oracle",
           "1000 random grids, " + fmt(elapsed) + "s");
}

// ---- criterion 8: reservation soundness under fuzzing ----

void criterion_reservation_fuzz() {
    const GridDims grid{28, 28};
    ReservationTable table;
    std::mt19937_64 gen(4242);
    const auto coord = [&] { return static_cast<int>(gen() % 28); };
    const CellPred open = [](Cell) { return false; };
    const CellPred covered = [](Cell) { return true; };

    struct Flight {
        Trajectory trajectory;
        long hold_from;
    };
    std::vector<Flight> planned;
    std::vector<std::pair<int, long>> active;  // (agent id, land step)
    int next_id = 0;
    long plans = 0;
    bool threw = false;

    try {
        for (long t0 = 0; plans < 10000; t0 += 1 + static_cast<long>(gen() % 3)) {
            std::erase_if(active, [&](const auto& f) {
                if (f.second < t0) {
                    table.release(f.first);
                    return true;
                }
                return false;
            });
            const int burst = 1 + static_cast<int>(gen() % 4);
            for (int k = 0; k < burst && plans < 10000; ++k) {
                ++plans;
                const Mission m{{coord(), coord()}, {coord(), coord()}};
                const PlanOutcome out = plan_managed(m, t0, table, grid, open, covered,
                                                     static_cast<int>(gen() % 4), next_id);
                if (!out.planned) continue;
                planned.push_back({out.trajectory, t0});
                active.emplace_back(next_id, out.trajectory.land_step());
                ++next_id;
            }
        }
    } catch (const std::logic_error&) {
        threw = true;  // double-booking attempt inside the planner
    }

    std::set<std::tuple<int, int, long>> occupied;
    bool disjoint = true;
    for (const auto& f : planned) {
        for (long s = f.hold_from; s < f.trajectory.launch_step; ++s)
            if (!occupied.insert({f.trajectory.cells[0].x, f.trajectory.cells[0].y, s}).second)
                disjoint = false;
        for (size_t k = 0; k < f.trajectory.cells.size(); ++k)
            if (!occupied
                     .insert({f.trajectory.cells[k].x, f.trajectory.cells[k].y,
                              f.trajectory.launch_step + static_cast<long>(k)})
                     .second)
                disjoint = false;
    }
    report(8, !threw && disjoint && planned.size() > 1000,
           "10k fuzzed plans replay with zero space-time co-occupancy",
           fmt(static_cast<double>(planned.size())) + " planned flights");
}

// ---- criterion 9: byte-identical reruns ----

std::uint64_t tree_hash(const fs::path& root) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto mix = [&](const std::string& s) {
        for (const unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& f : files) {
        mix(fs::relative(f, root).string());
        std::ifstream in(f, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        mix(os.str());
    }
    return h;
}

void criterion_determinism() {
    const fs::path dir = scratch_dir("determinism");
    const auto config = fixtures::desk_scenario(TrajectoryType::Manhattan, true, 1);
    std::ofstream(dir / "scenario.json", std::ios::binary) << serialize_scenario(config);

    RunManifest first{dir / "scenario.json", {}, dir / "a"};
    for (std::int64_t seed = 1; seed <= 10; ++seed) first.seeds.push_back(seed);
    RunManifest second = first;
    second.out_dir = dir / "b";

    const bool ok_a = cmd_run(first) == 0;
    const bool ok_b = cmd_run(second) == 0;
    const std::uint64_t ha = ok_a ? tree_hash(first.out_dir) : 0;
    const std::uint64_t hb = ok_b ? tree_hash(second.out_dir) : 1;
    report(9, ok_a && ok_b && ha == hb, "cmd_run twice yields byte-identical output trees",
           "tree hash " + fmt(static_cast<double>(ha == hb)));
    fs::remove_all(dir);
}

// ---- criterion 10: channel capacity saturation ----

void criterion_channel_capacity() {
    const PathLossParams params;
    const auto model = make_propagation_model("log-distance", params);
    std::vector<BaseStationState> stations{{{{500.0, 500.0}, 2}, 0}};

    bool ok = true;
    std::mt19937_64 gen(31);
    for (long step = 0; step < 50 && ok; ++step) {
        std::vector<AirborneAgent> agents;
        for (int i = 0; i < 5; ++i) {
            // co-located cluster in good range of the single station
            const double jitter = static_cast<double>(gen() % 10);
            agents.push_back({i, {480.0 + jitter, 500.0}, 0.0});
        }
        const auto samples = allocate_channels(agents, stations, *model, params, step);

        int assigned = 0;
        for (const auto& s : samples) {
            if (s.station == 0) ++assigned;
            if (s.station == -1 && s.link != LinkClass::NoLink) ok = false;
        }
        if (assigned != 2) ok = false;

        // exhaustive oracle: the unique assignment where each agent in id
        // order takes the cheapest station with capacity left
        std::vector<int> expected;
        int remaining = 2;
        for (int i = 0; i < 5; ++i) {
            if (remaining > 0) {
                expected.push_back(0);
                --remaining;
            } else {
                expected.push_back(-1);
            }
        }
        for (size_t i = 0; i < samples.size(); ++i)
            if (samples[i].station != expected[i]) ok = false;
        // agents denied the saturated station have nowhere else to go
        for (size_t i = 2; i < samples.size(); ++i)
            if (samples[i].link != LinkClass::NoLink) ok = false;
    }
    report(10, ok, "exactly 2 of 5 co-located agents get the 2-channel station each step", "");
}

// ---- criterion 11: no-fly zone over a poor-coverage region ----

ScenarioConfig corridor_scenario(bool with_zone) {
    ScenarioConfig c;
    c.grid_width = 200;
    c.grid_height = 200;
    c.sim_steps = 2000;
    c.t_min = 10;
    c.trajectory_type = TrajectoryType::Manhattan;
    c.managed = true;
    c.rng_seed = 1;
    c.launch_areas = {{{19, 99, 21, 101}, 1.0}};
    c.landing_areas = {{{179, 99, 181, 101}, 1.0}};
    // station band well below the corridor: the straight route is all poor,
    // the detour south of the zone dips into good coverage
    c.base_stations = {{{729.0, 909.0}, 8}, {{1809.0, 909.0}, 8}, {{2889.0, 909.0}, 8}};
    c.path_loss.n = 1.5;
    if (with_zone) c.no_fly_zones = {{60, 70, 140, 135}};
    return c;
}

void criterion_no_fly_coverage() {
    double with_zone_sum = 0.0;
    double without_zone_sum = 0.0;
    long detour_launches = 0;
    for (std::int64_t seed = 1; seed <= 10; ++seed) {
        const MetricsReport with_zone = run_metrics(corridor_scenario(true), seed);
        const MetricsReport without_zone = run_metrics(corridor_scenario(false), seed);
        with_zone_sum += with_zone.poor_link_rate.value();
        without_zone_sum += without_zone.poor_link_rate.value();
        detour_launches += with_zone.throughput;
    }
    const double with_zone = with_zone_sum / 10.0;
    const double without_zone = without_zone_sum / 10.0;
    report(11, detour_launches > 0 && with_zone < without_zone,
           "a no-fly zone over poor coverage lowers the poor-link rate",
           "poor rate " + fmt(without_zone) + " -> " + fmt(with_zone));
}

}  // namespace

int main() {
    criterion_managed_zero_conflict();
    criterion_conflict_ordering();
    criterion_flight_time_ratio();
    criterion_throughput_and_flight_time();
    criterion_path_loss();
    criterion_density_oracle();
    criterion_reservation_fuzz();
    criterion_determinism();
    criterion_channel_capacity();
    criterion_no_fly_coverage();

    if (g_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " acceptance criteria failed\n";
    return 1;
}
