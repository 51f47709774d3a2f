#include <cmath>
#include <vector>

#include <doctest.h>

#include "droplets/region.hpp"
#include "droplets/rng.hpp"
#include "droplets/shapes.hpp"

using namespace droplets;

namespace {
constexpr double kPi = 3.14159265358979323846;

Region disk_region(double r, Vec2 c = {}, std::size_t n = 512) {
    ShapeSpec s = ShapeSpec::disk(r, c, n);
    return Region::from_curve(s.make_curve());
}
} // namespace

TEST_CASE("polygon contains and area") {
    Region d = disk_region(0.4);
    CHECK(d.contains({0.0, 0.0}));
    CHECK(d.contains({0.39, 0.0}));
    CHECK_FALSE(d.contains({0.41, 0.0}));
    CHECK_FALSE(d.contains({0.3, 0.3}));
    CHECK(d.area_estimate() == doctest::Approx(kPi * 0.16).epsilon(1e-3));
}

TEST_CASE("rasterization: pixel-center membership") {
    Region d = disk_region(0.4);
    Raster r = d.rasterize(d.bbox(), 1.0 / 512.0);
    double area = double(r.count()) * r.res * r.res;
    CHECK(area == doctest::Approx(kPi * 0.16).epsilon(2e-3));
    // all mask pixels have centers inside the disk (up to polygon chord sag)
    for (int64_t j = 0; j < r.ny; j += 7)
        for (int64_t i = 0; i < r.nx; i += 7)
            if (r.at(i, j))
                CHECK(std::hypot(r.cx(i), r.cy(j)) < 0.4 + r.res);
}

TEST_CASE("cell union rasterization is exact on aligned grids") {
    // cells of side 1/64 centered at site coordinates; at res = 1/512 each
    // cell covers exactly 8x8 pixels
    Region cu = Region::cell_union(64, {{0, 0}, {1, 0}, {0, 1}});
    Raster r = cu.rasterize(cu.bbox(), 1.0 / 512.0);
    CHECK(r.count() == 3 * 64);
    CHECK(cu.area_estimate() == doctest::Approx(3.0 / (64.0 * 64.0)).epsilon(1e-12));
    CHECK(cu.contains({0.0, 0.0}));
    CHECK(cu.contains({1.0 / 64.0, 0.003}));
    CHECK_FALSE(cu.contains({1.0 / 64.0, 1.0 / 64.0}));
}

TEST_CASE("serial and OpenMP distance transforms agree bitwise") {
    Region s = Region::from_curve(ShapeSpec::star(0.5, 0.2, 6, {}, 512).make_curve());
    BBox box = s.bbox();
    box.expand(0.1);
    Raster r = s.rasterize(box, 1.0 / 256.0);
    auto serial = edt_squared(r, false);
    auto parallel = edt_squared(r, true);
    CHECK(serial == parallel);
}

TEST_CASE("distance transform against brute force on a small mask") {
    Raster r;
    r.res = 1.0;
    r.nx = 24;
    r.ny = 17;
    r.mask.assign(std::size_t(r.nx * r.ny), 0);
    RngStream rng(5, 0);
    std::vector<std::pair<int64_t, int64_t>> on;
    for (int k = 0; k < 30; ++k) {
        int64_t i = int64_t(rng.uniform_below(uint64_t(r.nx)));
        int64_t j = int64_t(rng.uniform_below(uint64_t(r.ny)));
        r.mask[std::size_t(j * r.nx + i)] = 1;
        on.push_back({i, j});
    }
    auto d = edt_squared(r, true);
    for (int64_t j = 0; j < r.ny; ++j)
        for (int64_t i = 0; i < r.nx; ++i) {
            float best = 1e30f;
            for (auto [a, b] : on)
                best = std::min(best, float((i - a) * (i - a) + (j - b) * (j - b)));
            CHECK(d[std::size_t(j * r.nx + i)] == best);
        }
}

TEST_CASE("dilation and erosion of a disk shift its radius") {
    Region d = disk_region(0.3);
    Region grown = dilate_erode(d, 0.1);
    Region shrunk = dilate_erode(d, -0.1);
    CHECK(grown.area_estimate() == doctest::Approx(kPi * 0.16).epsilon(5e-3));
    CHECK(shrunk.area_estimate() == doctest::Approx(kPi * 0.04).epsilon(1e-2));
    CHECK(grown.contains({0.39, 0.0}));
    CHECK_FALSE(grown.contains({0.41, 0.0}));
    CHECK(shrunk.contains({0.19, 0.0}));
    CHECK_FALSE(shrunk.contains({0.21, 0.0}));
}

TEST_CASE("eta = 0 is the identity") {
    Region d = disk_region(0.25);
    Region same = dilate_erode(d, 0.0);
    CHECK(same.as_polygon() != nullptr);
    CHECK(same.area_estimate() == doctest::Approx(d.area_estimate()).epsilon(1e-12));
}

TEST_CASE("erosion below the inradius is empty") {
    Region d = disk_region(0.1);
    Region gone = dilate_erode(d, -0.12);
    CHECK(gone.is_empty());
}

TEST_CASE("dilate then erode contains the original") {
    Region s = Region::from_curve(ShapeSpec::star(0.5, 0.2, 6, {}, 512).make_curve());
    Region closed = dilate_erode(dilate_erode(s, 0.05), -0.05);
    auto verdict = inclusion_check(s, closed);
    CHECK(verdict.holds);
}

TEST_CASE("hausdorff distance examples") {
    Region a = disk_region(0.3);
    CHECK(hausdorff(a, a) == doctest::Approx(0.0).epsilon(1e-12));
    // concentric disks: distance is the radius gap
    Region b = disk_region(0.4);
    CHECK(hausdorff(a, b) == doctest::Approx(0.1).epsilon(0.02));
    // translated copy: distance is the shift
    Region c = disk_region(0.3, {0.1, 0.0});
    CHECK(hausdorff(a, c) == doctest::Approx(0.1).epsilon(0.02));
    // point vs point is exact
    CHECK(hausdorff(Region::point({0.0, 0.0}), Region::point({0.3, 0.4})) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(hausdorff(Region::empty(), a), std::invalid_argument);
}

TEST_CASE("hausdorff is symmetric and satisfies the triangle inequality") {
    RngStream rng(31, 0);
    for (int trial = 0; trial < 5; ++trial) {
        auto rnd_disk = [&] {
            double r = 0.1 + 0.2 * rng.uniform();
            Vec2 c{0.3 * (rng.uniform() - 0.5), 0.3 * (rng.uniform() - 0.5)};
            return disk_region(r, c, 256);
        };
        Region a = rnd_disk(), b = rnd_disk(), c = rnd_disk();
        double ab = hausdorff(a, b), ba = hausdorff(b, a);
        double bc = hausdorff(b, c), ac = hausdorff(a, c);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
        CHECK(ac <= ab + bc + 1e-2); // raster slack
    }
}

TEST_CASE("inclusion check with witness") {
    Region inner = disk_region(0.2);
    Region outer = disk_region(0.3);
    CHECK(inclusion_check(inner, outer).holds);
    auto bad = inclusion_check(outer, inner);
    CHECK_FALSE(bad.holds);
    REQUIRE(bad.witness.has_value());
    // the witness lies in outer \ inner
    CHECK(outer.contains(*bad.witness));
    CHECK_FALSE(inner.contains(*bad.witness));
    // empty inner is vacuously included
    CHECK(inclusion_check(Region::empty(), inner).holds);
}

TEST_CASE("cell union inclusion uses the exact same-L path") {
    Region a = Region::cell_union(32, {{0, 0}, {1, 0}});
    Region b = Region::cell_union(32, {{0, 0}, {1, 0}, {0, 1}});
    CHECK(inclusion_check(a, b).holds);
    auto v = inclusion_check(b, a);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness.has_value());
    CHECK(b.contains(*v.witness));
    CHECK_FALSE(a.contains(*v.witness));
}
