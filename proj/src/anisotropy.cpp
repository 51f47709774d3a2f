#include "droplets/anisotropy.hpp"

#include <array>
#include <cmath>

namespace droplets {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = kPi / 2.0;

// fold into [0, pi/2)
double fold(double theta) {
    double r = std::fmod(theta, kHalfPi);
    if (r < 0.0) r += kHalfPi;
    return r;
}

// exact profile on the folded interval, where cos and sin are nonnegative
double a_exact(double theta) {
    double t = fold(theta);
    double d = std::cos(t) + std::sin(t);
    return 1.0 / (2.0 * d * d);
}

double a_exact_derivative_folded(double t) {
    double c = std::cos(t), s = std::sin(t);
    double d = c + s;
    return -(c - s) / (d * d * d);
}

// 64-point Gauss-Legendre rule on [-1,1], nodes by Newton on P_64
struct GaussRule {
    static constexpr int n = 64;
    std::array<double, n> x{}, w{};
    GaussRule() {
        for (int i = 0; i < n / 2; ++i) {
            double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = xi;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
                double dx = p1 / dp;
                xi -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            x[i] = -xi;
            x[n - 1 - i] = xi;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
        }
    }
};

const GaussRule& rule() {
    static const GaussRule r;
    return r;
}

double bump(double v) {
    double u = 1.0 - v * v;
    return u > 0.0 ? std::exp(-1.0 / u) : 0.0;
}

// Normalized quadrature weights of the bump; they sum to 1 exactly, so the
// mollified value is a genuine convex combination of translates of a.
const std::array<double, GaussRule::n>& bump_weights() {
    static const std::array<double, GaussRule::n> cw = [] {
        std::array<double, GaussRule::n> c{};
        const auto& r = rule();
        double total = 0.0;
        for (int i = 0; i < GaussRule::n; ++i) {
            c[i] = r.w[i] * bump(r.x[i]);
            total += c[i];
        }
        for (auto& v : c) v /= total;
        return c;
    }();
    return cw;
}

double a_mollified(double theta, double omega) {
    const auto& r = rule();
    const auto& cw = bump_weights();
    double sum = 0.0;
    for (int i = 0; i < GaussRule::n; ++i)
        sum += cw[i] * a_exact(theta - omega * r.x[i]);
    return sum;
}

double a_mollified_derivative(double theta, double omega) {
    const auto& r = rule();
    const auto& cw = bump_weights();
    double sum = 0.0;
    for (int i = 0; i < GaussRule::n; ++i) {
        double t = fold(theta - omega * r.x[i]);
        sum += cw[i] * a_exact_derivative_folded(t);
    }
    return sum;
}

template <typename F>
double adaptive_simpson(F f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

template <typename F>
double integrate(F f, double a, double b, double tol) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

} // namespace

AnisotropyProfile AnisotropyProfile::exact() {
    return AnisotropyProfile(AnisotropyKind::Exact, 0.0, 1.0);
}

AnisotropyProfile AnisotropyProfile::mollified(double omega) {
    if (!(omega > 0.0) || omega > kPi / 8.0)
        throw std::invalid_argument("mollification width must be in (0, pi/8]");
    return AnisotropyProfile(AnisotropyKind::Mollified, omega, 1.0);
}

AnisotropyProfile AnisotropyProfile::constant(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("constant speed must be positive");
    return AnisotropyProfile(AnisotropyKind::Constant, 0.0, c);
}

double AnisotropyProfile::eval(double theta) const {
    switch (kind_) {
    case AnisotropyKind::Exact:
        return a_exact(theta);
    case AnisotropyKind::Mollified:
        return a_mollified(theta, omega_);
    case AnisotropyKind::Constant:
        return c_;
    }
    return 0.0; // unreachable
}

double AnisotropyProfile::eval_derivative(double theta) const {
    switch (kind_) {
    case AnisotropyKind::Exact: {
        double t = fold(theta);
        double dist = std::min(t, kHalfPi - t);
        if (dist < 1e-12)
            throw std::domain_error(
                "exact anisotropy is not differentiable at multiples of pi/2");
        return a_exact_derivative_folded(t);
    }
    case AnisotropyKind::Mollified:
        return a_mollified_derivative(theta, omega_);
    case AnisotropyKind::Constant:
        return 0.0;
    }
    return 0.0; // unreachable
}

double AnisotropyProfile::total_integral() const {
    if (kind_ == AnisotropyKind::Constant) return 2.0 * kPi * c_;
    // a is pi/2-periodic and smooth strictly inside (0, pi/2)
    auto f = [this](double t) { return eval(t); };
    return 4.0 * integrate(f, 0.0, kHalfPi, 1e-13);
}

double AnisotropyProfile::min_value() const {
    // 1/4 is a valid lower bound in Exact and Mollified modes (the mollified
    // value is a convex combination of exact values in [1/4, 1/2])
    return kind_ == AnisotropyKind::Constant ? c_ : 0.25;
}

double AnisotropyProfile::max_value() const {
    return kind_ == AnisotropyKind::Constant ? c_ : 0.5;
}

} // namespace droplets
