#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "droplets/anisotropy.hpp"
#include "droplets/curve.hpp"
#include "droplets/region.hpp"
#include "droplets/shapes.hpp"

namespace droplets {

class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FlowStatus { Running, Shrunk };

struct FlowParams {
    double c_stab = 0.4;          // dt <= c_stab * min(ds)^2 / a_max
    double omega = 0.0;           // 0: default 4 * 2pi / N
    double stop_area_fraction = 1e-4;
    double stop_diameter_factor = 4.0; // times the initial mean spacing
    int max_halvings = 20;
    double inflection_band = 0.05; // hysteresis: |k| < band * max|k| is "flat"
};

// per accepted step: time, area, length, max|k|, max|g| (g = a(theta) k),
// inflection count
struct FlowMonitors {
    std::vector<double> t, area, length, kmax, gmax;
    std::vector<int> inflections;
};

struct TrajectorySnapshot {
    double t = 0.0;
    std::optional<MarkerCurve> curve; // absent once the curve has shrunk
    Vec2 point{};                     // shrink center, valid when !curve
};

struct Trajectory {
    std::vector<TrajectorySnapshot> snapshots;
    FlowMonitors monitors;
    Vec2 center{};            // X
    double t_observed = 0.0;  // T extrapolated by the exact area law
    double total_integral = 0.0;
    double omega = 0.0;
    std::size_t samples = 0;
};

// Explicit front-tracking integrator for d gamma/dt = a(theta) k N with
// arc-length resampling after every accepted step. A step is rejected and
// retried at dt/2 when the moved polyline self-intersects or the length
// fails to decrease.
class Flow {
public:
    // An Exact profile is replaced by its mollification for stepping (the
    // kink at multiples of pi/2 is never fed to the marker update); Constant
    // and Mollified profiles are used as passed.
    Flow(MarkerCurve initial, AnisotropyProfile profile, FlowParams params = {});

    // advances by at most dt (dt = 0 is the identity); returns the accepted
    // step size; throws SolverFailure after max_halvings rejections
    double step(double dt);

    double suggested_dt() const;

    const MarkerCurve& curve() const { return curve_; }
    double time() const { return t_; }
    FlowStatus status() const { return status_; }
    const FlowMonitors& monitors() const { return monitors_; }
    const AnisotropyProfile& stepping_profile() const { return profile_; }
    double total_integral() const { return integral_; }

    // true once the stop thresholds (area fraction or diameter) are reached;
    // finalize() then records X and T_observed
    bool should_stop() const;
    void finalize();
    Vec2 shrink_center() const { return center_; }
    double t_observed() const { return t_obs_; }

private:
    bool attempt(double dt, std::optional<MarkerCurve>& out) const;
    void record();
    // cached profile sampler for the marker update (cubic interpolation on a
    // fine grid over the pi/2 period; error ~1e-10, ~100x cheaper than the
    // quadrature-based eval)
    double a_fast(double theta) const;

    AnisotropyProfile profile_;
    FlowParams params_;
    MarkerCurve curve_;
    double t_ = 0.0;
    FlowStatus status_ = FlowStatus::Running;
    FlowMonitors monitors_;
    double integral_ = 0.0;
    double initial_area_ = 0.0;
    double stop_diameter_ = 0.0;
    Vec2 center_{};
    double t_obs_ = 0.0;
    std::vector<double> atab_; // empty for Constant profiles
};

// integrate to extinction, snapshotting the curve exactly at the requested
// times (post-shrink checkpoints become point snapshots at X)
Trajectory run_to_shrink(const ShapeSpec& spec, const AnisotropyProfile& profile,
                         FlowParams params = {},
                         std::span<const double> checkpoints = {});

// D_t realized as a region: polygon while running, {X} after shrink
Region snapshot_domain(const TrajectorySnapshot& snap);

// linear interpolation of marker positions between bracketing snapshots;
// reproduces the stored curves exactly at their own times
TrajectorySnapshot interpolate_snapshot(const Trajectory& traj, double t);

// Crank-Nicolson oracle comparison in a pi/4-type rotated frame: evolves the
// window's graph with the 1D heat equation at diffusivity 1/4, driven by the
// trajectory's endpoint values, and returns the sup-norm deviation from the
// trajectory at the final snapshot time. Snapshots must be densely spaced in
// time over the horizon. Throws std::domain_error for Constant profiles and
// std::runtime_error naming the violating time when the window stops being a
// 1-Lipschitz graph.
double heat_chart_check(std::span<const TrajectorySnapshot> snaps,
                        const AnisotropyProfile& profile, double theta0,
                        double u_lo, double u_hi, std::size_t grid_points = 128);

struct GmaxVerdict {
    bool ok = true;
    double first_violation_t = -1.0;
};

// |g|max(t) <= (|g|max(0)^-2 - 2t/a_min)^-1/2 * (1 + slack), checked on every
// recorded step while the denominator stays positive
GmaxVerdict gmax_bound_check(const FlowMonitors& monitors, double a_min,
                             double slack = 0.05);

} // namespace droplets
