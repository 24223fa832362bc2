#include "utmsim/logio.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace utmsim {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no CRLF translation
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return in;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) fields.push_back(cur);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

LinkClass link_class_from(const std::string& s) {
    if (s == "good") return LinkClass::Good;
    if (s == "poor") return LinkClass::Poor;
    if (s == "nolink") return LinkClass::NoLink;
    throw std::runtime_error("bad link class '" + s + "'");
}

// Merged events.csv row; kind in {launch, land, cancel}, agent -1 for
// cancellations.
struct EventRow {
    long step;
    int kind;  // 0 launch, 1 land, 2 cancel
    int agent;
    Cell origin;
    Cell dest;
    int hold;
    std::string reason;
};

}  // namespace

void write_log_csvs(const SimulationLog& log, const fs::path& dir) {
    fs::create_directories(dir);

    {
        auto rows = log.positions;
        std::stable_sort(rows.begin(), rows.end(),
                         [](const PositionRecord& a, const PositionRecord& b) {
                             return std::tie(a.step, a.agent) < std::tie(b.step, b.agent);
                         });
        auto out = open_out(dir / "positions.csv");
        out << "step,agent,cell_x,cell_y\n";
        for (const auto& r : rows)
            out << r.step << ',' << r.agent << ',' << r.cell.x << ',' << r.cell.y << '\n';
    }

    {
        auto rows = log.links;
        std::stable_sort(rows.begin(), rows.end(), [](const LinkSample& a, const LinkSample& b) {
            return std::tie(a.step, a.agent) < std::tie(b.step, b.agent);
        });
        auto out = open_out(dir / "links.csv");
        out << "step,agent,station,path_loss_db,class\n";
        for (const auto& r : rows)
            out << r.step << ',' << r.agent << ',' << r.station << ','
                << format_double(r.path_loss_db) << ',' << to_string(r.link) << '\n';
    }

    {
        std::vector<EventRow> rows;
        rows.reserve(log.launches.size() + log.landings.size() + log.cancellations.size());
        for (const auto& e : log.launches)
            rows.push_back({e.step, 0, e.agent, e.origin, e.dest, e.hold, ""});
        for (const auto& e : log.landings)
            rows.push_back({e.step, 1, e.agent, e.origin, e.dest, e.hold, ""});
        for (const auto& e : log.cancellations)
            rows.push_back({e.step, 2, -1, e.origin, e.dest, 0, e.reason});
        std::stable_sort(rows.begin(), rows.end(), [](const EventRow& a, const EventRow& b) {
            return std::tie(a.step, a.agent, a.kind) < std::tie(b.step, b.agent, b.kind);
        });
        static const char* kKind[] = {"launch", "land", "cancel"};
        auto out = open_out(dir / "events.csv");
        out << "step,kind,agent,origin_x,origin_y,dest_x,dest_y,hold,reason\n";
        for (const auto& r : rows)
            out << r.step << ',' << kKind[r.kind] << ',' << r.agent << ',' << r.origin.x << ','
                << r.origin.y << ',' << r.dest.x << ',' << r.dest.y << ',' << r.hold << ','
                << r.reason << '\n';
    }
}

SimulationLog read_log_csvs(const fs::path& dir) {
    SimulationLog log;
    std::string line;

    {
        auto in = open_in(dir / "positions.csv");
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split(line);
            if (f.size() != 4) throw std::runtime_error("bad positions.csv row: " + line);
            log.positions.push_back(
                {std::stol(f[0]), std::stoi(f[1]), Cell{std::stoi(f[2]), std::stoi(f[3])}});
        }
    }
    {
        auto in = open_in(dir / "links.csv");
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split(line);
            if (f.size() != 5) throw std::runtime_error("bad links.csv row: " + line);
            log.links.push_back({std::stol(f[0]), std::stoi(f[1]), std::stoi(f[2]),
                                 std::stod(f[3]), link_class_from(f[4])});
        }
    }
    {
        auto in = open_in(dir / "events.csv");
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split(line);
            if (f.size() != 9) throw std::runtime_error("bad events.csv row: " + line);
            const long step = std::stol(f[0]);
            const Cell origin{std::stoi(f[3]), std::stoi(f[4])};
            const Cell dest{std::stoi(f[5]), std::stoi(f[6])};
            if (f[1] == "launch")
                log.launches.push_back({step, std::stoi(f[2]), origin, dest, std::stoi(f[7])});
            else if (f[1] == "land")
                log.landings.push_back({step, std::stoi(f[2]), origin, dest, std::stoi(f[7])});
            else if (f[1] == "cancel")
                log.cancellations.push_back({step, origin, dest, f[8]});
            else
                throw std::runtime_error("bad event kind '" + f[1] + "'");
        }
    }
    return log;
}

}  // namespace utmsim
