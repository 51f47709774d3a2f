#include "droplets/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace droplets {

namespace {
constexpr double kPi = 3.14159265358979323846;

int count_inflections(const MarkerCurve& c, double band_fraction) {
    const auto& k = c.curvature();
    double band = band_fraction * c.max_abs_curvature();
    // signs of markers outside the hysteresis band, in cyclic order
    int first = 0, prev = 0, changes = 0;
    for (double v : k) {
        if (std::abs(v) < band) continue;
        int s = v > 0.0 ? 1 : -1;
        if (prev == 0) {
            first = s;
        } else if (s != prev) {
            ++changes;
        }
        prev = s;
    }
    if (prev != 0 && prev != first) ++changes;
    return changes;
}
} // namespace

Flow::Flow(MarkerCurve initial, AnisotropyProfile profile, FlowParams params)
    : profile_(profile), params_(params), curve_(std::move(initial)) {
    if (profile_.kind() == AnisotropyKind::Exact) {
        double omega = params_.omega > 0.0
                           ? params_.omega
                           : 4.0 * 2.0 * kPi / double(curve_.size());
        omega = std::min(omega, kPi / 8.0);
        profile_ = AnisotropyProfile::mollified(omega);
    } else if (params_.omega > 0.0 &&
               profile_.kind() == AnisotropyKind::Mollified) {
        profile_ = AnisotropyProfile::mollified(params_.omega);
    }
    integral_ = profile_.total_integral();
    if (profile_.kind() != AnisotropyKind::Constant) {
        atab_.resize(4096);
        double h = 0.5 * kPi / double(atab_.size());
        for (std::size_t m = 0; m < atab_.size(); ++m)
            atab_[m] = profile_.eval(double(m) * h);
    }
    initial_area_ = curve_.area();
    stop_diameter_ =
        params_.stop_diameter_factor * curve_.length() / double(curve_.size());
    record();
}

double Flow::a_fast(double theta) const {
    if (atab_.empty()) return profile_.eval(theta);
    const std::size_t M = atab_.size();
    double u = theta / (0.5 * kPi);
    u -= std::floor(u); // period pi/2
    double x = u * double(M);
    std::size_t i1 = std::size_t(x) % M;
    double f = x - std::floor(x);
    const double p0 = atab_[(i1 + M - 1) % M];
    const double p1 = atab_[i1];
    const double p2 = atab_[(i1 + 1) % M];
    const double p3 = atab_[(i1 + 2) % M];
    return p1 + 0.5 * f * (p2 - p0 +
           f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
           f * (3.0 * (p1 - p2) + p3 - p0)));
}

double Flow::suggested_dt() const {
    double min_ds = *std::min_element(curve_.segment_length().begin(),
                                      curve_.segment_length().end());
    return params_.c_stab * min_ds * min_ds / profile_.max_value();
}

bool Flow::attempt(double dt, std::optional<MarkerCurve>& out) const {
    const std::size_t n = curve_.size();
    const auto& th = curve_.tangent_angle();
    const auto& k = curve_.curvature();
    const auto& pts = curve_.points();
    std::vector<Vec2> moved(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < long(n); ++i) {
        // inward normal for a counterclockwise curve, from the same centered
        // difference that defines the tangent angle
        Vec2 d = pts[(i + 1) % n] - pts[(i + n - 1) % n];
        double inv = 1.0 / d.norm();
        double v = a_fast(th[i]) * k[i] * dt;
        moved[i] = pts[i] + Vec2{-d.y * inv, d.x * inv} * v;
    }
    try {
        MarkerCurve resampled = MarkerCurve::resample_closed(moved, n);
        if (resampled.length() >= curve_.length()) return false;
        out = std::move(resampled);
        return true;
    } catch (const CurveError&) {
        return false; // self-intersection or marker collapse: reject
    }
}

double Flow::step(double dt) {
    if (status_ != FlowStatus::Running)
        throw SolverFailure("step on a curve that has already shrunk");
    if (dt <= 0.0) return 0.0;
    std::optional<MarkerCurve> next;
    for (int h = 0; h <= params_.max_halvings; ++h) {
        if (attempt(dt, next)) {
            curve_ = std::move(*next);
            t_ += dt;
            record();
            return dt;
        }
        dt *= 0.5;
    }
    std::ostringstream os;
    os << "flow step rejected " << params_.max_halvings + 1
       << " times at t = " << t_ << " (area " << curve_.area() << ", max|k| "
       << curve_.max_abs_curvature() << ")";
    throw SolverFailure(os.str());
}

void Flow::record() {
    const auto& th = curve_.tangent_angle();
    const auto& k = curve_.curvature();
    double gmax = 0.0;
    for (std::size_t i = 0; i < curve_.size(); ++i)
        gmax = std::max(gmax, std::abs(a_fast(th[i]) * k[i]));
    monitors_.t.push_back(t_);
    monitors_.area.push_back(curve_.area());
    monitors_.length.push_back(curve_.length());
    monitors_.kmax.push_back(curve_.max_abs_curvature());
    monitors_.gmax.push_back(gmax);
    monitors_.inflections.push_back(count_inflections(curve_, params_.inflection_band));
}

bool Flow::should_stop() const {
    return curve_.area() < params_.stop_area_fraction * initial_area_ ||
           curve_.diameter() < stop_diameter_;
}

void Flow::finalize() {
    center_ = curve_.centroid();
    t_obs_ = t_ + curve_.area() / integral_;
    status_ = FlowStatus::Shrunk;
}

Trajectory run_to_shrink(const ShapeSpec& spec, const AnisotropyProfile& profile,
                         FlowParams params, std::span<const double> checkpoints) {
    std::vector<double> cps(checkpoints.begin(), checkpoints.end());
    std::sort(cps.begin(), cps.end());

    Flow flow(spec.make_curve(), profile, params);
    Trajectory traj;
    traj.omega = flow.stepping_profile().kind() == AnisotropyKind::Mollified
                     ? flow.stepping_profile().omega()
                     : 0.0;
    traj.samples = flow.curve().size();
    traj.total_integral = flow.total_integral();

    std::size_t next_cp = 0;
    auto emit_due = [&]() {
        while (next_cp < cps.size() && cps[next_cp] <= flow.time() + 1e-15) {
            traj.snapshots.push_back({cps[next_cp], flow.curve(), Vec2{}});
            ++next_cp;
        }
    };
    emit_due();

    while (!flow.should_stop()) {
        double dt = flow.suggested_dt();
        if (next_cp < cps.size())
            dt = std::min(dt, cps[next_cp] - flow.time()); // land exactly
        flow.step(dt);
        emit_due();
    }
    flow.finalize();

    traj.center = flow.shrink_center();
    traj.t_observed = flow.t_observed();
    for (; next_cp < cps.size(); ++next_cp)
        traj.snapshots.push_back({cps[next_cp], std::nullopt, traj.center});
    traj.monitors = flow.monitors();
    return traj;
}

Region snapshot_domain(const TrajectorySnapshot& snap) {
    if (snap.curve) return Region::from_curve(*snap.curve);
    return Region::point(snap.point);
}

TrajectorySnapshot interpolate_snapshot(const Trajectory& traj, double t) {
    const auto& sn = traj.snapshots;
    if (sn.empty()) throw std::invalid_argument("empty trajectory");
    if (t <= sn.front().t) return sn.front();
    if (t >= sn.back().t) return sn.back();
    std::size_t hi = 1;
    while (sn[hi].t < t) ++hi;
    const auto& a = sn[hi - 1];
    const auto& b = sn[hi];
    double w = (t - a.t) / (b.t - a.t);
    if (!a.curve || !b.curve) {
        // interpolation into the shrunk regime degrades to the nearer endpoint
        return w < 0.5 ? a : b;
    }
    if (a.curve->size() != b.curve->size())
        throw std::invalid_argument("snapshot marker counts differ");
    std::vector<Vec2> pts(a.curve->size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        pts[i] = a.curve->points()[i] * (1.0 - w) + b.curve->points()[i] * w;
    return {t, MarkerCurve(std::move(pts)), Vec2{}};
}

namespace {

// extract the window [u_lo, u_hi] of the snapshot as a graph v(u) in the
// frame rotated by theta0; picks the chain with the largest mean v among the
// monotone chains covering the window
struct GraphSample {
    std::vector<double> u, v;
};

GraphSample extract_graph(const MarkerCurve& c, double theta0, double u_lo,
                          double u_hi, double t_for_error) {
    double ct = std::cos(theta0), st = std::sin(theta0);
    const std::size_t n = c.size();
    std::vector<double> u(n), v(n);
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = c.points()[i];
        u[i] = p.x * ct + p.y * st;
        v[i] = -p.x * st + p.y * ct;
        if (u[i] > u[start]) start = i;
    }

    // walk once around starting from the u-maximum (a chain boundary by
    // construction) and split into maximal u-monotone chains
    std::vector<std::vector<std::size_t>> chains;
    std::vector<std::size_t> cur{start};
    int dir = 0;
    for (std::size_t s = 1; s <= n; ++s) {
        std::size_t i = (start + s) % n;
        double du = u[i] - u[cur.back()];
        int d = du > 0 ? 1 : (du < 0 ? -1 : 0);
        if (d != 0 && dir != 0 && d != dir) {
            chains.push_back(cur);
            cur = {cur.back()};
        }
        if (d != 0) dir = d;
        cur.push_back(i);
    }
    chains.push_back(cur);

    GraphSample best;
    bool found = false;
    double best_mean_v = -1e300;
    for (const auto& ch : chains) {
        double lo = std::min(u[ch.front()], u[ch.back()]);
        double hi = std::max(u[ch.front()], u[ch.back()]);
        if (lo > u_lo || hi < u_hi) continue;
        GraphSample cand;
        double mean_v = 0.0;
        std::size_t cnt = 0;
        for (std::size_t idx : ch) {
            cand.u.push_back(u[idx]);
            cand.v.push_back(v[idx]);
            if (u[idx] >= u_lo && u[idx] <= u_hi) {
                mean_v += v[idx];
                ++cnt;
            }
        }
        if (cnt == 0) continue;
        if (cand.u.front() > cand.u.back()) {
            std::reverse(cand.u.begin(), cand.u.end());
            std::reverse(cand.v.begin(), cand.v.end());
        }
        mean_v /= double(cnt);
        if (!found || mean_v > best_mean_v) {
            best = std::move(cand);
            found = true;
            best_mean_v = mean_v;
        }
    }
    if (!found) {
        std::ostringstream os;
        os << "no graph chain covers the window at t = " << t_for_error;
        throw std::runtime_error(os.str());
    }

    // 1-Lipschitz precondition over the window
    for (std::size_t i = 0; i + 1 < best.u.size(); ++i) {
        if (best.u[i + 1] < u_lo || best.u[i] > u_hi) continue;
        double du = best.u[i + 1] - best.u[i];
        if (du <= 0.0) continue;
        if (std::abs(best.v[i + 1] - best.v[i]) > du * (1.0 + 1e-9)) {
            std::ostringstream os;
            os << "graph is not 1-Lipschitz in the window at t = " << t_for_error;
            throw std::runtime_error(os.str());
        }
    }
    return best;
}

double interp(const GraphSample& g, double x) {
    auto it = std::lower_bound(g.u.begin(), g.u.end(), x);
    if (it == g.u.begin()) return g.v.front();
    if (it == g.u.end()) return g.v.back();
    std::size_t i = std::size_t(it - g.u.begin());
    double w = (x - g.u[i - 1]) / (g.u[i] - g.u[i - 1]);
    return g.v[i - 1] * (1.0 - w) + g.v[i] * w;
}

} // namespace

double heat_chart_check(std::span<const TrajectorySnapshot> snaps,
                        const AnisotropyProfile& profile, double theta0,
                        double u_lo, double u_hi, std::size_t grid_points) {
    if (profile.kind() == AnisotropyKind::Constant)
        throw std::domain_error(
            "heat chart is defined for Exact/Mollified profiles only");
    double frac = theta0 / (kPi / 4.0);
    if (std::abs(frac - std::round(frac)) > 1e-9 ||
        (int64_t)std::llround(frac) % 2 == 0)
        throw std::domain_error("frame angle must be an odd multiple of pi/4");
    if (snaps.size() < 2) throw std::invalid_argument("need >= 2 snapshots");
    for (const auto& s : snaps)
        if (!s.curve) throw std::invalid_argument("snapshots must be pre-shrink");

    const std::size_t m = grid_points;
    const double du = (u_hi - u_lo) / double(m);
    std::vector<double> y(m + 1);
    GraphSample g0 = extract_graph(*snaps[0].curve, theta0, u_lo, u_hi, snaps[0].t);
    for (std::size_t j = 0; j <= m; ++j) y[j] = interp(g0, u_lo + du * double(j));

    std::vector<double> a(m + 1), b(m + 1), c(m + 1), rhs(m + 1);
    for (std::size_t s = 0; s + 1 < snaps.size(); ++s) {
        double dt = snaps[s + 1].t - snaps[s].t;
        GraphSample gn = extract_graph(*snaps[s + 1].curve, theta0, u_lo, u_hi,
                                       snaps[s + 1].t);
        double r = 0.25 * dt / (2.0 * du * du); // Crank-Nicolson, diffusivity 1/4
        for (std::size_t j = 1; j < m; ++j) {
            a[j] = -r;
            b[j] = 1.0 + 2.0 * r;
            c[j] = -r;
            rhs[j] = r * y[j - 1] + (1.0 - 2.0 * r) * y[j] + r * y[j + 1];
        }
        double yl = interp(gn, u_lo), yr = interp(gn, u_hi);
        rhs[1] += r * yl;
        rhs[m - 1] += r * yr;
        // Thomas solve on 1..m-1
        for (std::size_t j = 2; j < m; ++j) {
            double w = a[j] / b[j - 1];
            b[j] -= w * c[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        y[m - 1] = rhs[m - 1] / b[m - 1];
        for (std::size_t j = m - 2; j >= 1; --j)
            y[j] = (rhs[j] - c[j] * y[j + 1]) / b[j];
        y[0] = yl;
        y[m] = yr;
    }

    GraphSample gend = extract_graph(*snaps.back().curve, theta0, u_lo, u_hi,
                                     snaps.back().t);
    double dev = 0.0;
    for (std::size_t j = 1; j < m; ++j)
        dev = std::max(dev, std::abs(y[j] - interp(gend, u_lo + du * double(j))));
    return dev;
}

GmaxVerdict gmax_bound_check(const FlowMonitors& monitors, double a_min,
                             double slack) {
    if (monitors.t.empty()) return {true, -1.0};
    double g0 = monitors.gmax.front();
    if (g0 <= 0.0) return {true, -1.0};
    for (std::size_t i = 0; i < monitors.t.size(); ++i) {
        double denom = 1.0 / (g0 * g0) - 2.0 * monitors.t[i] / a_min;
        if (denom <= 0.0) break; // bound has blown up; nothing to assert
        double bound = (1.0 + slack) / std::sqrt(denom);
        if (monitors.gmax[i] > bound) return {false, monitors.t[i]};
    }
    return {true, -1.0};
}

} // namespace droplets
