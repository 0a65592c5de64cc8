#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "thermocount/thermo.hpp"

// The two-parameter pressure surface PP(z) = P(z1 f + z2 g), its derivatives,
// and the Legendre transform PP*.  Gradients are analytic (equilibrium
// averages); Hessians are central differences of the gradient.

namespace tc {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct PressureSurface {
    Shift shift;
    Potential f, g;       // common depth
    Independence flag = Independence::assumed;

    // Advisory domain predicate.  On a finite alphabet the pressure is finite
    // everywhere, so this is recorded for reporting only, never enforced;
    // truncation-family studies re-check series convergence separately.
    std::function<bool(const Vec2&)> domain_guard;

    // memoized RPF solves keyed by the exact z doubles
    mutable std::map<std::array<double, 2>, std::shared_ptr<const RpfData>> cache;

    const RpfData& rpf_at(const Vec2& z) const;
};

PressureSurface make_surface(const PotentialPair& pair);

double surface_pressure(const PressureSurface& S, const Vec2& z);

// (int f dmu_z, int g dmu_z)
Vec2 grad_pressure(const PressureSurface& S, const Vec2& z);

// central differences of grad_pressure with step 1e-4, symmetrized
Mat2 hess_pressure(const PressureSurface& S, const Vec2& z);

struct LegendrePoint {
    Vec2 x;            // requested gradient
    Vec2 z;            // a maximizer of <x,.> - PP
    double pstar = 0;  // PP*(x)
    Mat2 hess_star;    // (hess PP(z))^{-1}; pseudo-inverse when singular
    bool hess_singular = false;
    double residual = 0; // ||grad PP(z) - x|| at the returned z
};

// damped Newton on z -> grad PP(z) - x; throws OutsideGradientRange when the
// target is not attained to 1e-10 within 200 iterations / 40 backtracks.
LegendrePoint legendre(const PressureSurface& S, const Vec2& x);

struct ProfilePoint {
    double t = 0;
    double value = 0; // -t PP*((1,m)/t)
    bool ok = false;
};
struct Profile {
    std::vector<ProfilePoint> samples;
    double t_hat = 0;     // golden-section refined maximizer
    double value_hat = 0; // profile value there
};

Profile profile_neg_t_pstar(const PressureSurface& S, double m, const std::vector<double>& t_grid);

} // namespace tc
