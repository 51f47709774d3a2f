#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "droplets/curve.hpp"

namespace droplets {

// Axis-aligned pixel mask on the global grid of spacing `res`: pixel (i,j)
// covers [i*res,(i+1)*res) x [j*res,(j+1)*res), indices offset by (ix0, iy0).
// Grids are anchored at the origin so lattice-cell boundaries fall on pixel
// edges whenever res divides 1/(2L), which makes cell-union rasterization
// exact.
struct Raster {
    double res = 0.0;
    int64_t ix0 = 0, iy0 = 0;
    int64_t nx = 0, ny = 0;
    std::vector<uint8_t> mask;

    uint8_t at(int64_t i, int64_t j) const { return mask[std::size_t(j * nx + i)]; }
    double cx(int64_t i) const { return (double(ix0 + i) + 0.5) * res; }
    double cy(int64_t j) const { return (double(iy0 + j) + 0.5) * res; }
    std::size_t count() const;
};

struct BBox {
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    void expand(double m) { xlo -= m; xhi += m; ylo -= m; yhi += m; }
    void merge(const BBox& o);
};

// Compact planar region: empty, a single point (the post-shrink convention),
// a simple polygon, a union of lattice cells of side 1/L centered at sites
// (i/L, j/L), or a pixel grid (the output form of the raster morphology ops).
class Region {
public:
    struct Empty {};
    struct Point {
        Vec2 p;
    };
    struct Polygon {
        std::vector<Vec2> pts; // closed, CCW
    };
    struct CellUnion {
        int L = 1;
        std::vector<std::pair<int, int>> cells; // sorted site indices
    };
    struct Grid {
        Raster r;
    };

    static Region empty() { return Region(Empty{}); }
    static Region point(Vec2 p) { return Region(Point{p}); }
    static Region polygon(std::vector<Vec2> pts);
    static Region from_curve(const MarkerCurve& c) { return polygon(c.points()); }
    static Region cell_union(int L, std::vector<std::pair<int, int>> cells);
    static Region grid(Raster r);

    bool is_empty() const { return std::holds_alternative<Empty>(rep_); }
    bool is_point() const { return std::holds_alternative<Point>(rep_); }
    const Polygon* as_polygon() const { return std::get_if<Polygon>(&rep_); }
    const CellUnion* as_cells() const { return std::get_if<CellUnion>(&rep_); }
    const Point* as_point() const { return std::get_if<Point>(&rep_); }
    const Grid* as_grid() const { return std::get_if<Grid>(&rep_); }

    BBox bbox() const;
    double area_estimate() const;
    bool contains(Vec2 p) const;

    // sorted x-coordinates where the horizontal line at height y crosses the
    // boundary; polygon form only (used for scanline fills and lattice init)
    std::vector<double> row_crossings(double y) const;

    Raster rasterize(const BBox& box, double res) const;

private:
    using Rep = std::variant<Empty, Point, Polygon, CellUnion, Grid>;
    explicit Region(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

// Squared Euclidean distance transform (Felzenszwalb-Huttenlocher) of the
// mask, in pixel units. `parallel` switches between the serial reference and
// the OpenMP row/column-parallel kernel; both produce identical output and
// the tests cross-check them.
std::vector<float> edt_squared(const Raster& r, bool parallel = true);

// Minkowski dilation (eta > 0) by the ball of radius eta, or erosion
// (eta < 0) defined as the complement of the dilation of the complement.
// eta == 0 returns the input unchanged. Erosion may legally come back empty.
Region dilate_erode(const Region& region, double eta);

// Symmetric Hausdorff distance between two nonempty regions, computed on a
// common raster; throws std::invalid_argument when either region is empty.
double hausdorff(const Region& a, const Region& b);

struct InclusionVerdict {
    bool holds = true;
    std::optional<Vec2> witness; // a point of inner \ outer when it fails
};

// inner subset of outer, up to raster resolution; empty inner always holds
InclusionVerdict inclusion_check(const Region& inner, const Region& outer);

} // namespace droplets
