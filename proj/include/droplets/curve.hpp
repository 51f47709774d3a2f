#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace droplets {

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const;
};

class CurveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Closed discrete curve with per-marker tangent angle, signed curvature and
// arc-length increments. Orientation is normalized to counterclockwise on
// construction, so signed area is positive and the inward normal at marker i
// is (-sin theta_i, cos theta_i).
//
// theta_i comes from the atan2 of centered differences and is unwrapped so it
// gains exactly 2*pi over one loop; k_i is the centered difference of theta
// over arc-length, which makes the discrete turning number sum(k ds) telescope
// to 2*pi exactly.
class MarkerCurve {
public:
    // throws CurveError on < 16 markers, duplicate/collapsed markers or a
    // self-intersecting polyline (resample the input before retrying)
    explicit MarkerCurve(std::vector<Vec2> points);

    std::size_t size() const { return pts_.size(); }
    const std::vector<Vec2>& points() const { return pts_; }
    const std::vector<double>& tangent_angle() const { return theta_; }
    const std::vector<double>& curvature() const { return k_; }
    // ds_[i] = |p_{i+1} - p_i| (cyclic)
    const std::vector<double>& segment_length() const { return ds_; }

    Vec2 inward_normal(std::size_t i) const;

    double area() const;    // shoelace, positive
    double length() const;
    Vec2 centroid() const;
    double diameter() const; // largest bounding-box extent
    double max_abs_curvature() const;
    // sum k_i ds_bar_i; 2*pi up to rounding
    double turning_number() const;

    // markers shifted by x along the inward normal; throws CurveError when
    // |x| >= reach()
    MarkerCurve offset(double x) const;

    // min(u/2, r): r the minimal curvature radius, u the smallest locally
    // minimal distance between far-apart boundary points (+inf truncated to r
    // for convex curves, where no such pair exists)
    double reach() const;

    // resample to n quasi-uniformly spaced markers along arc-length using
    // periodic Catmull-Rom interpolation through the current markers
    MarkerCurve resample(std::size_t n) const;

    // same resampling applied to a raw closed polyline, without building the
    // intermediate curve (the stepper's hot path)
    static MarkerCurve resample_closed(const std::vector<Vec2>& pts,
                                       std::size_t n);

    // grid-hash sweep over non-adjacent segment pairs
    static bool is_simple(const std::vector<Vec2>& pts);

private:
    std::vector<Vec2> pts_;
    std::vector<double> ds_, theta_, k_;
};

} // namespace droplets
