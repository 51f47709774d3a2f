#include "droplets/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace droplets {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double d1 = cross(b - a, c - a);
    double d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c);
    double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    Vec2 q = a + ab * t;
    return (p - q).norm();
}

} // namespace

double Vec2::norm() const { return std::sqrt(x * x + y * y); }

MarkerCurve::MarkerCurve(std::vector<Vec2> points) : pts_(std::move(points)) {
    const std::size_t n = pts_.size();
    if (n < 16) throw CurveError("curve needs at least 16 markers");

    // normalize to counterclockwise
    double a2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts_[i];
        const Vec2& q = pts_[(i + 1) % n];
        a2 += cross(p, q);
    }
    if (a2 < 0.0) std::reverse(pts_.begin(), pts_.end());

    ds_.resize(n);
    theta_.resize(n);
    k_.resize(n);

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ds_[i] = (pts_[(i + 1) % n] - pts_[i]).norm();
        scale += ds_[i];
    }
    scale /= double(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (ds_[i] < 1e-9 * scale)
            throw CurveError("duplicate markers; resample the curve");
    }

    // tangent angles from centered differences, unwrapped
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 d = pts_[(i + 1) % n] - pts_[(i + n - 1) % n];
        if (d.norm() < 1e-9 * scale)
            throw CurveError("collapsed markers; resample the curve");
        double th = std::atan2(d.y, d.x);
        if (i == 0) {
            theta_[0] = th;
        } else {
            double delta = th - prev;
            delta -= 2.0 * kPi * std::round(delta / (2.0 * kPi));
            theta_[i] = theta_[i - 1] + delta;
        }
        prev = th;
    }

    // signed curvature: centered difference of theta over arc-length; the
    // seam term picks up the +2*pi of the full loop
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
        double dth = theta_[ip] - theta_[im];
        if (ip < i) dth += 2.0 * kPi;
        if (im > i) dth += 2.0 * kPi;
        k_[i] = dth / (ds_[im] + ds_[i]);
    }

    if (!is_simple(pts_)) throw CurveError("self-intersecting curve");
}

Vec2 MarkerCurve::inward_normal(std::size_t i) const {
    return {-std::sin(theta_[i]), std::cos(theta_[i])};
}

double MarkerCurve::area() const {
    double a2 = 0.0;
    const std::size_t n = pts_.size();
    for (std::size_t i = 0; i < n; ++i) a2 += cross(pts_[i], pts_[(i + 1) % n]);
    return 0.5 * a2;
}

double MarkerCurve::length() const {
    double l = 0.0;
    for (double d : ds_) l += d;
    return l;
}

Vec2 MarkerCurve::centroid() const {
    // area centroid of the enclosed polygon
    double a2 = 0.0, cx = 0.0, cy = 0.0;
    const std::size_t n = pts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = pts_[i];
        const Vec2& q = pts_[(i + 1) % n];
        double w = cross(p, q);
        a2 += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

double MarkerCurve::diameter() const {
    double lo_x = pts_[0].x, hi_x = lo_x, lo_y = pts_[0].y, hi_y = lo_y;
    for (const Vec2& p : pts_) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    return std::max(hi_x - lo_x, hi_y - lo_y);
}

double MarkerCurve::max_abs_curvature() const {
    double m = 0.0;
    for (double k : k_) m = std::max(m, std::abs(k));
    return m;
}

double MarkerCurve::turning_number() const {
    double s = 0.0;
    const std::size_t n = pts_.size();
    for (std::size_t i = 0; i < n; ++i)
        s += k_[i] * 0.5 * (ds_[(i + n - 1) % n] + ds_[i]);
    return s;
}

MarkerCurve MarkerCurve::offset(double x) const {
    if (std::abs(x) >= reach())
        throw CurveError("offset exceeds reach; result would self-intersect");
    std::vector<Vec2> out(pts_.size());
    for (std::size_t i = 0; i < pts_.size(); ++i)
        out[i] = pts_[i] + inward_normal(i) * x;
    return MarkerCurve(std::move(out));
}

double MarkerCurve::reach() const {
    const std::size_t n = pts_.size();
    double r = 1.0 / std::max(max_abs_curvature(), 1e-300);

    double max_ds = *std::max_element(ds_.begin(), ds_.end());

    // cumulative arc-length, for the neighbor-exclusion band
    std::vector<double> s(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) s[i + 1] = s[i] + ds_[i];
    double total = s[n];
    double band = 4.0 * max_ds;

    auto arc_sep = [&](std::size_t i, std::size_t j) {
        double d = std::abs(s[i] - s[j]);
        return std::min(d, total - d);
    };
    auto dist = [&](std::size_t i, std::size_t j) {
        return (pts_[i] - pts_[j]).norm();
    };

    double u = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (arc_sep(i, j) <= band) continue;
            double dij = dist(i, j);
            if (dij >= u) continue;
            // keep only pairs that are local minima of the marker-pair
            // distance; arcs sliding past each other never qualify
            bool local_min = true;
            for (int di = -1; di <= 1 && local_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    std::size_t ii = (i + n + di) % n;
                    std::size_t jj = (j + n + dj) % n;
                    if (dist(ii, jj) < dij - 1e-15) {
                        local_min = false;
                        break;
                    }
                }
            }
            if (!local_min) continue;
            // refine against the neighboring segments of the opposite arc
            double refined = dij;
            for (int dj = -1; dj <= 0; ++dj) {
                std::size_t a = (j + n + dj) % n;
                refined = std::min(refined, point_segment_distance(
                                                pts_[i], pts_[a], pts_[(a + 1) % n]));
            }
            for (int di = -1; di <= 0; ++di) {
                std::size_t a = (i + n + di) % n;
                refined = std::min(refined, point_segment_distance(
                                                pts_[j], pts_[a], pts_[(a + 1) % n]));
            }
            u = std::min(u, refined);
        }
    }
    return std::min(u / 2.0, r);
}

MarkerCurve MarkerCurve::resample(std::size_t n) const {
    return resample_closed(pts_, n);
}

MarkerCurve MarkerCurve::resample_closed(const std::vector<Vec2>& pts_,
                                         std::size_t n) {
    const std::size_t m = pts_.size();
    std::vector<double> s(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        s[i + 1] = s[i] + (pts_[(i + 1) % m] - pts_[i]).norm();
    double total = s[m];

    auto catmull_rom = [&](std::size_t i, double t) {
        // chordal Catmull-Rom through p_{i-1}, p_i, p_{i+1}, p_{i+2}
        const Vec2& p0 = pts_[(i + m - 1) % m];
        const Vec2& p1 = pts_[i];
        const Vec2& p2 = pts_[(i + 1) % m];
        const Vec2& p3 = pts_[(i + 2) % m];
        double d0 = std::max((p1 - p0).norm(), 1e-300);
        double d1 = std::max((p2 - p1).norm(), 1e-300);
        double d2 = std::max((p3 - p2).norm(), 1e-300);
        Vec2 m1 = ((p2 - p1) * (d0 / d1) + (p1 - p0)) * (d1 / (d0 + d1));
        Vec2 m2 = ((p2 - p1) * (d2 / d1) + (p3 - p2)) * (d1 / (d1 + d2));
        double t2 = t * t, t3 = t2 * t;
        return p1 * (2 * t3 - 3 * t2 + 1) + m1 * (t3 - 2 * t2 + t) +
               p2 * (-2 * t3 + 3 * t2) + m2 * (t3 - t2);
    };

    std::vector<Vec2> out(n);
    std::size_t seg = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double target = total * double(j) / double(n);
        while (seg + 1 < m && s[seg + 1] <= target) ++seg;
        double t = (target - s[seg]) / (s[seg + 1] - s[seg]);
        out[j] = catmull_rom(seg, t);
    }
    return MarkerCurve(std::move(out));
}

bool MarkerCurve::is_simple(const std::vector<Vec2>& pts) {
    const std::size_t n = pts.size();
    double max_len = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_len = std::max(max_len, (pts[(i + 1) % n] - pts[i]).norm());
    double cell = std::max(max_len, 1e-12);

    auto key = [&](double x, double y) {
        int64_t ix = (int64_t)std::floor(x / cell);
        int64_t iy = (int64_t)std::floor(y / cell);
        return (uint64_t)ix * 0x9e3779b97f4a7c15ULL ^ (uint64_t)iy;
    };

    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets;
    buckets.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[(i + 1) % n];
        // a segment spans at most 2x2 cells when cell >= segment length
        double lox = std::min(a.x, b.x), hix = std::max(a.x, b.x);
        double loy = std::min(a.y, b.y), hiy = std::max(a.y, b.y);
        for (int64_t ix = (int64_t)std::floor(lox / cell);
             ix <= (int64_t)std::floor(hix / cell); ++ix)
            for (int64_t iy = (int64_t)std::floor(loy / cell);
                 iy <= (int64_t)std::floor(hiy / cell); ++iy)
                buckets[(uint64_t)ix * 0x9e3779b97f4a7c15ULL ^ (uint64_t)iy]
                    .push_back((uint32_t)i);
    }
    (void)key;

    auto adjacent = [&](std::size_t i, std::size_t j) {
        std::size_t d = i > j ? i - j : j - i;
        return d <= 1 || d == n - 1;
    };

    for (const auto& [h, segs] : buckets) {
        for (std::size_t a = 0; a < segs.size(); ++a) {
            for (std::size_t b = a + 1; b < segs.size(); ++b) {
                std::size_t i = segs[a], j = segs[b];
                if (i == j || adjacent(i, j)) continue;
                if (segments_intersect(pts[i], pts[(i + 1) % n], pts[j],
                                       pts[(j + 1) % n]))
                    return false;
            }
        }
    }
    return true;
}

} // namespace droplets
