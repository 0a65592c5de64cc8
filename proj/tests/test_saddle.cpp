#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "fixtures.hpp"
#include "thermocount/saddle.hpp"

using namespace tc;

namespace {

double rel_err(std::complex<double> lead, std::complex<double> quad) {
    return std::abs(lead - quad) / std::abs(quad);
}

double max_step(const SaddleProblem& p) { return p.epsilon / (4.0 * std::sqrt(p.n)); }

} // namespace

TEST_SUITE("saddle") {

TEST_CASE("pure gaussian: leading term is exactly 2 pi / n") {
    for (double n : {16.0, 64.0, 1024.0}) {
        std::complex<double> lead = saddle_leading_term(gaussian_case(n));
        CHECK(lead.real() == doctest::Approx(2.0 * std::numbers::pi / n).epsilon(1e-14));
        CHECK(lead.imag() == 0.0);
    }
}

TEST_CASE("pure gaussian: quadrature agrees to the disc-truncation tail") {
    SaddleProblem p = gaussian_case(64.0);
    std::complex<double> lead = saddle_leading_term(p);
    std::complex<double> quad = quadrature_oracle(p, max_step(p));
    CHECK(rel_err(lead, quad) < 1e-5);
    CHECK(std::abs(quad.imag()) < 1e-12);
}

TEST_CASE("anisotropic hessian enters through sqrt(det)") {
    SaddleProblem p;
    p.F = [](const Vec2& th) { return 0.5 * (2.0 * th(0) * th(0) + 3.0 * th(1) * th(1)); };
    p.gradF = [](const Vec2& th) { return Vec2(2.0 * th(0), 3.0 * th(1)); };
    p.hessF = [](const Vec2&) {
        Mat2 h;
        h << 2, 0, 0, 3;
        return h;
    };
    p.G = [](const Vec2&) { return std::complex<double>(1.0, 0.0); };
    p.F_itheta = [](const Vec2& th) {
        return std::complex<double>(-0.5 * (2.0 * th(0) * th(0) + 3.0 * th(1) * th(1)), 0.0);
    };
    p.epsilon = 0.7;
    p.n = 64.0;

    std::complex<double> lead = saddle_leading_term(p);
    CHECK(lead.real() ==
          doctest::Approx(2.0 * std::numbers::pi / (p.n * std::sqrt(6.0))).epsilon(1e-14));
    std::complex<double> quad = quadrature_oracle(p, max_step(p));
    CHECK(rel_err(lead, quad) < 1e-5);
}

TEST_CASE("complex amplitude: even corrections shrink like 1/n") {
    auto make = [](double n) {
        SaddleProblem p = gaussian_case(n);
        p.G = [](const Vec2& th) {
            return std::exp(std::complex<double>(0.0, th(0))) * (1.0 + th(1) * th(1));
        };
        return p;
    };
    SaddleProblem p64 = make(64.0), p256 = make(256.0);
    double e64 = rel_err(saddle_leading_term(p64), quadrature_oracle(p64, max_step(p64)));
    double e256 = rel_err(saddle_leading_term(p256), quadrature_oracle(p256, max_step(p256)));
    CHECK(e64 < 0.05);
    CHECK(e256 < e64 / 2.5); // 1/n decay, not 1/sqrt(n)

    // theta1 -> -theta1 symmetry of the grid cancels the imaginary part
    CHECK(std::abs(quadrature_oracle(p64, max_step(p64)).imag()) < 1e-12);
}

TEST_CASE("odd amplitude perturbations cancel exactly on the symmetric grid") {
    SaddleProblem base = gaussian_case(64.0);
    SaddleProblem odd = gaussian_case(64.0);
    odd.G = [](const Vec2& th) { return std::complex<double>(1.0 + th(0), 0.0); };

    std::complex<double> q0 = quadrature_oracle(base, max_step(base));
    std::complex<double> q1 = quadrature_oracle(odd, max_step(odd));
    CHECK(std::abs(q0 - q1) / std::abs(q0) < 1e-12);
    // and the leading term only sees G(0) = 1
    CHECK(saddle_leading_term(odd).real() ==
          doctest::Approx(saddle_leading_term(base).real()).epsilon(1e-14));
}

TEST_CASE("quartic phase with kinked amplitude: error halves per 4x in n") {
    double prev = 0.0;
    int idx = 0;
    for (double n : {64.0, 256.0, 1024.0}) {
        SaddleProblem p = quartic_case(n);
        double err = rel_err(saddle_leading_term(p), quadrature_oracle(p, max_step(p)));
        CHECK(err > 0.0);
        if (idx > 0) {
            double ratio = err / prev;
            CHECK(ratio > 0.4);
            CHECK(ratio < 0.6);
        }
        prev = err;
        ++idx;
    }
}

TEST_CASE("pressure-surface instance reproduces the closed-form leading term") {
    PressureSurface S = make_surface(fx::std3());
    const Vec2 z(-0.2, -0.1);
    const double n = 40.0;

    SaddleProblem p = pressure_case(S, z, n);
    CHECK(p.gradF(Vec2(0, 0)).norm() <= 1e-10); // stationary at the origin by construction

    double F0 = surface_pressure(S, z) - grad_pressure(S, z).dot(z); // = -PP*(grad PP(z))
    double det = hess_pressure(S, z).determinant();
    std::complex<double> lead = saddle_leading_term(p);
    CHECK(lead.real() ==
          doctest::Approx(std::exp(n * F0) * 2.0 * std::numbers::pi / (n * std::sqrt(det)))
              .epsilon(1e-10));
    CHECK(lead.imag() == 0.0);
}

TEST_CASE("guard rails: coarse grids, moving saddles, indefinite phases") {
    SaddleProblem p = gaussian_case(64.0);
    CHECK_THROWS_AS(quadrature_oracle(p, 1.01 * max_step(p)), GridTooCoarse);
    CHECK_THROWS_AS(quadrature_oracle(p, 0.0), Error);
    CHECK_THROWS_AS(quadrature_oracle(p, -0.1), Error);

    SaddleProblem moved = gaussian_case(64.0);
    moved.gradF = [](const Vec2&) { return Vec2(0.1, 0.0); };
    CHECK_THROWS_AS(saddle_leading_term(moved), Error);

    SaddleProblem indef = gaussian_case(64.0);
    indef.hessF = [](const Vec2&) {
        Mat2 h;
        h << 1, 0, 0, -1;
        return h;
    };
    CHECK_THROWS_AS(saddle_leading_term(indef), NotPositiveDefinite);

    SaddleProblem negdef = gaussian_case(64.0);
    negdef.hessF = [](const Vec2&) { return Mat2(-Mat2::Identity()); };
    CHECK_THROWS_AS(saddle_leading_term(negdef), NotPositiveDefinite);
}

} // TEST_SUITE
