#pragma once

#include <string>

#include "droplets/curve.hpp"

namespace droplets {

// Initial-droplet boundary generator. All shapes live in [-1,1]^2, are
// sampled CCW and end up quasi-uniform in arc-length after resampling.
struct ShapeSpec {
    enum class Kind { Disk, Ellipse, Star, PolygonFile };

    Kind kind = Kind::Disk;
    Vec2 center{0.0, 0.0};
    double r = 0.4;          // disk radius
    double a = 0.6, b = 0.3; // ellipse semi-axes
    double R = 0.5;          // star base radius
    double eps = 0.2;        // star lobe amplitude, r(phi) = R(1 + eps cos(m phi))
    int lobes = 6;
    std::string path; // polygon file (curve snapshot format)
    std::size_t samples = 512;

    static ShapeSpec disk(double r, Vec2 c = {}, std::size_t n = 512);
    static ShapeSpec ellipse(double a, double b, Vec2 c = {}, std::size_t n = 512);
    static ShapeSpec star(double R, double eps, int m, Vec2 c = {}, std::size_t n = 512);

    // "disk:0.4" | "ellipse:0.6,0.3" | "star:0.5,0.2,6" | "poly:file.curve"
    static ShapeSpec parse(const std::string& text, std::size_t n = 512);

    // throws std::invalid_argument for parameters outside [-1,1]^2 or a
    // self-intersecting star choice (eps >= 1)
    MarkerCurve make_curve() const;

    // exact enclosed area of the analytic shapes (polar integral for the star)
    double analytic_area() const;
    std::string describe() const;
};

} // namespace droplets
