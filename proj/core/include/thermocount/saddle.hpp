#pragma once

#include <complex>
#include <functional>

#include "thermocount/convex.hpp"

// Two-dimensional saddle-point leading term  e^{nF(0)} G(0) 2 pi / (n sqrt(det
// hess F(0)))  for integrals  int_Omega G(i theta) e^{n F(i theta)} d theta
// over a disc, plus a direct midpoint-quadrature oracle to validate it.

namespace tc {

struct SaddleProblem {
    // real field with a stationary point at 0 (value/gradient/Hessian)
    std::function<double(const Vec2&)> F;
    std::function<Vec2(const Vec2&)> gradF;
    std::function<Mat2(const Vec2&)> hessF;

    // theta -> G(i theta); may be merely Lipschitz (kinks allowed)
    std::function<std::complex<double>(const Vec2&)> G;

    // optional explicit complex extension theta -> F(i theta); when absent the
    // quadrature substitutes the Taylor form F(0) - theta' hessF(0) theta / 2
    std::function<std::complex<double>(const Vec2&)> F_itheta;

    double epsilon = 0.5; // disc radius
    double n = 1;         // asymptotic parameter
};

// Throws NotPositiveDefinite when hess F(0) is not PD; requires
// |grad F(0)| <= 1e-10.
std::complex<double> saddle_leading_term(const SaddleProblem& prob);

// Tensor-product midpoint rule over the disc; grid_step must resolve the
// Gaussian width: step <= epsilon / (4 sqrt(n)), else GridTooCoarse.
std::complex<double> quadrature_oracle(const SaddleProblem& prob, double grid_step);

// canned validation cases
SaddleProblem gaussian_case(double n, double eps = 0.7);
// quartic phase correction plus a Lipschitz-kinked amplitude 1 + |theta|,
// whose expected radius under the Gaussian drives the 1/sqrt(n) error term
SaddleProblem quartic_case(double n, double eps = 0.7);
// pressure-surface instance: F(y) = <x, y-z> + PP(z-y) with x = grad PP(z),
// so F(0) = -PP*(x); used for the leading term only
SaddleProblem pressure_case(const PressureSurface& S, const Vec2& z, double n,
                            double eps = 0.25);

} // namespace tc
