#include "thermocount/saddle.hpp"

#include <cmath>
#include <numbers>

#include "thermocount/kahan.hpp"

namespace tc {

std::complex<double> saddle_leading_term(const SaddleProblem& prob) {
    const Vec2 zero(0.0, 0.0);
    Vec2 g = prob.gradF(zero);
    if (g.norm() > 1e-10)
        throw Error("saddle_leading_term: gradient at the origin is not zero");
    Mat2 H = prob.hessF(zero);
    double det = H.determinant();
    if (!(H(0, 0) > 0) || !(det > 0))
        throw NotPositiveDefinite("saddle_leading_term: hessian at the origin not PD");
    double scale = std::exp(prob.n * prob.F(zero)) * 2.0 * std::numbers::pi /
                   (prob.n * std::sqrt(det));
    return scale * prob.G(zero);
}

std::complex<double> quadrature_oracle(const SaddleProblem& prob, double grid_step) {
    const double eps = prob.epsilon;
    if (!(grid_step > 0)) throw Error("quadrature_oracle: need a positive step");
    if (grid_step > eps / (4.0 * std::sqrt(prob.n)))
        throw GridTooCoarse("quadrature_oracle: step does not resolve the Gaussian width");

    const Vec2 zero(0.0, 0.0);
    const double F0 = prob.F(zero);
    const Mat2 H = prob.hessF(zero);

    auto F_i = [&](const Vec2& th) -> std::complex<double> {
        if (prob.F_itheta) return prob.F_itheta(th);
        return {F0 - 0.5 * th.dot(H * th), 0.0};
    };

    const int cells = (int)std::ceil(2.0 * eps / grid_step);
    KahanSum re, im;
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            Vec2 th(-eps + (i + 0.5) * grid_step, -eps + (j + 0.5) * grid_step);
            if (th.squaredNorm() > eps * eps) continue;
            std::complex<double> v = prob.G(th) * std::exp(prob.n * F_i(th));
            re.add(v.real());
            im.add(v.imag());
        }
    }
    double w = grid_step * grid_step;
    return {re.value() * w, im.value() * w};
}

SaddleProblem gaussian_case(double n, double eps) {
    SaddleProblem p;
    p.F = [](const Vec2& th) { return 0.5 * th.squaredNorm(); };
    p.gradF = [](const Vec2& th) { return th; };
    p.hessF = [](const Vec2&) { return Mat2::Identity(); };
    p.G = [](const Vec2&) { return std::complex<double>(1.0, 0.0); };
    p.F_itheta = [](const Vec2& th) {
        return std::complex<double>(-0.5 * th.squaredNorm(), 0.0);
    };
    p.epsilon = eps;
    p.n = n;
    return p;
}

SaddleProblem quartic_case(double n, double eps) {
    SaddleProblem p;
    p.F = [](const Vec2& th) {
        double q = th(0) * th(0) * th(0) * th(0) + th(1) * th(1) * th(1) * th(1);
        return 0.5 * th.squaredNorm() + 0.25 * q;
    };
    p.gradF = [](const Vec2& th) {
        return Vec2(th(0) + th(0) * th(0) * th(0), th(1) + th(1) * th(1) * th(1));
    };
    p.hessF = [](const Vec2& th) {
        Mat2 h = Mat2::Identity();
        h(0, 0) += 3.0 * th(0) * th(0);
        h(1, 1) += 3.0 * th(1) * th(1);
        return h;
    };
    // kinked amplitude: E|theta| under the n-Gaussian is the 1/sqrt(n) term
    p.G = [](const Vec2& th) { return std::complex<double>(1.0 + th.norm(), 0.0); };
    // (i theta)^2 = -theta^2 but (i theta)^4 = +theta^4
    p.F_itheta = [](const Vec2& th) {
        double q = th(0) * th(0) * th(0) * th(0) + th(1) * th(1) * th(1) * th(1);
        return std::complex<double>(-0.5 * th.squaredNorm() + 0.25 * q, 0.0);
    };
    p.epsilon = eps;
    p.n = n;
    return p;
}

SaddleProblem pressure_case(const PressureSurface& S, const Vec2& z, double n, double eps) {
    Vec2 x = grad_pressure(S, z);
    SaddleProblem p;
    p.F = [&S, z, x](const Vec2& y) {
        return x.dot(y - z) + surface_pressure(S, z - y);
    };
    p.gradF = [&S, z, x](const Vec2& y) -> Vec2 {
        return x - grad_pressure(S, z - y);
    };
    p.hessF = [&S, z](const Vec2& y) { return hess_pressure(S, z - y); };
    p.G = [](const Vec2&) { return std::complex<double>(1.0, 0.0); };
    p.epsilon = eps;
    p.n = n;
    return p;
}

} // namespace tc
