#pragma once

#include <cstddef>
#include <vector>

#include "vblob/vec2.hpp"

namespace vblob {

/// Axis-aligned box.
struct BoundingBox {
    Vec2 lo;
    Vec2 hi;

    bool contains(const Vec2& p) const {
        return p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 && p.x2 <= hi.x2;
    }
    bool contains(const BoundingBox& b) const {
        return contains(b.lo) && contains(b.hi);
    }
    BoundingBox inflated(double d) const {
        return {{lo.x1 - d, lo.x2 - d}, {hi.x1 + d, hi.x2 + d}};
    }
    Vec2 extent() const { return hi - lo; }
};

/// Uniform 2D cell grid; values live at cell centers.
struct GridSpec {
    Vec2 origin;     // lower-left corner of cell (0,0)
    double spacing;  // cell side
    int nx = 0;
    int ny = 0;

    std::size_t count() const { return static_cast<std::size_t>(nx) * ny; }
    Vec2 center(int i, int j) const {
        return {origin.x1 + (i + 0.5) * spacing, origin.x2 + (j + 0.5) * spacing};
    }
    double cell_area() const { return spacing * spacing; }

    static GridSpec covering(const BoundingBox& box, double spacing);
    static GridSpec over_ball(double radius, int cells_per_axis);

    bool operator==(const GridSpec&) const = default;
};

struct SampledScalarField {
    GridSpec grid;
    std::vector<double> values;
};

std::vector<Vec2> grid_centers(const GridSpec& g);

}  // namespace vblob
