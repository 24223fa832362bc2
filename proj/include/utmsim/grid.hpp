#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace utmsim {

// Integer grid cell. The airspace is a W x H grid of square cells; all
// conflict accounting is cell-based.
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

// Continuous map position in meters.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct GridDims {
    int width = 0;
    int height = 0;

    bool contains(Cell c) const {
        return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
    }
};

// Axis-aligned rectangle of cells, inclusive on both corners.
struct Rect {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    bool contains(Cell c) const {
        return c.x >= x_min && c.x <= x_max && c.y >= y_min && c.y <= y_max;
    }
    bool overlaps(const Rect& o) const {
        return x_min <= o.x_max && o.x_min <= x_max &&
               y_min <= o.y_max && o.y_min <= y_max;
    }
    Cell center() const {
        return Cell{(x_min + x_max) / 2, (y_min + y_max) / 2};
    }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline Vec2 cell_center_m(Cell c, double cell_size_m) {
    return Vec2{(c.x + 0.5) * cell_size_m, (c.y + 0.5) * cell_size_m};
}

inline Cell cell_of_position(Vec2 p, double cell_size_m) {
    return Cell{static_cast<int>(std::floor(p.x / cell_size_m)),
                static_cast<int>(std::floor(p.y / cell_size_m))};
}

inline double distance_m(Vec2 a, Vec2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct CellHash {
    size_t operator()(Cell c) const {
        return std::hash<std::uint64_t>{}(
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) |
            static_cast<std::uint32_t>(c.y));
    }
};

}  // namespace utmsim
