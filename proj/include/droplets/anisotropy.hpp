#pragma once

#include <stdexcept>

namespace droplets {

enum class AnisotropyKind { Exact, Mollified, Constant };

// Orientation-dependent mobility a(theta) = 1/(2(|cos|+|sin|)^2) together
// with a smooth pi/2-periodic mollification a^omega and a constant mode for
// isotropic validation runs.
//
// The mollified profile is the convolution of the exact profile with a C-inf
// bump of half-width omega, evaluated by fixed-order Gauss-Legendre
// quadrature on every call. Being an exact convex combination of translates,
// a^omega inherits the 1-Lipschitz bound and sup|a^omega - a| <= omega.
class AnisotropyProfile {
public:
    static AnisotropyProfile exact();
    static AnisotropyProfile mollified(double omega);   // 0 < omega <= pi/8
    static AnisotropyProfile constant(double c);        // c > 0

    AnisotropyKind kind() const { return kind_; }
    double omega() const { return omega_; }
    double constant_speed() const { return c_; }

    // a(theta); total in theta (argument folded to [0, pi/2) internally so
    // the pi/2-periodicity is exact, not approximate).
    double eval(double theta) const;

    // d a/d theta. Exact mode throws std::domain_error within 1e-12 of a
    // multiple of pi/2 (kink of the exact profile).
    double eval_derivative(double theta) const;

    // integral of a over [0, 2pi) by adaptive Simpson; 2 exactly for the
    // exact profile, 2*pi*c for the constant one.
    double total_integral() const;

    // range of a over all angles (a_min, a_max); used by stability bounds
    // and the |g|max ODE check.
    double min_value() const;
    double max_value() const;

private:
    AnisotropyProfile(AnisotropyKind k, double omega, double c)
        : kind_(k), omega_(omega), c_(c) {}

    AnisotropyKind kind_;
    double omega_ = 0.0;
    double c_ = 1.0;
};

} // namespace droplets
