#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace tc;
using namespace fx;

TEST_SUITE("convex") {

TEST_CASE("surface pressure matches the direct solver and caches") {
    PotentialPair pair = std3();
    PressureSurface S = make_surface(pair);
    Vec2 z(-0.4, -0.3);
    Potential u = combine(pair.f, z(0), pair.g, z(1));
    CHECK(surface_pressure(S, z) ==
          doctest::Approx(pressure(pair.f.shift, u)).epsilon(1e-13));
    // repeated evaluation hits the cache and stays bit-identical
    CHECK(surface_pressure(S, z) == surface_pressure(S, z));
}

TEST_CASE("gradient equals equilibrium averages and matches finite differences") {
    PotentialPair pair = std3();
    PressureSurface S = make_surface(pair);
    Vec2 z(-0.2, -0.5);
    Vec2 g = grad_pressure(S, z);
    const double h = 1e-6;
    double dfd = (surface_pressure(S, Vec2(z(0) + h, z(1))) -
                  surface_pressure(S, Vec2(z(0) - h, z(1)))) / (2 * h);
    double dgd = (surface_pressure(S, Vec2(z(0), z(1) + h)) -
                  surface_pressure(S, Vec2(z(0), z(1) - h))) / (2 * h);
    CHECK(g(0) == doctest::Approx(dfd).epsilon(1e-7));
    CHECK(g(1) == doctest::Approx(dgd).epsilon(1e-7));
    // strictly positive averages for strictly positive tables
    CHECK(g(0) > 0);
    CHECK(g(1) > 0);
}

TEST_CASE("hessian: symmetric, PSD, matches wide finite differences") {
    PotentialPair pair = std3();
    PressureSurface S = make_surface(pair);
    Vec2 z(-0.3, -0.2);
    Mat2 H = hess_pressure(S, z);
    CHECK(std::abs(H(0, 1) - H(1, 0)) < 1e-9);
    Eigen::SelfAdjointEigenSolver<Mat2> es(H);
    CHECK(es.eigenvalues().minCoeff() > -1e-9);
    const double h = 1e-4;
    double d2f = (surface_pressure(S, Vec2(z(0) + h, z(1))) -
                  2 * surface_pressure(S, z) +
                  surface_pressure(S, Vec2(z(0) - h, z(1)))) / (h * h);
    CHECK(H(0, 0) == doctest::Approx(d2f).epsilon(1e-4));
}

TEST_CASE("legendre round-trip on a strictly convex surface") {
    PotentialPair pair = std3();
    PressureSurface S = make_surface(pair);
    for (double z1 = -0.8; z1 <= 0.21; z1 += 0.25) {
        for (double z2 = -0.7; z2 <= 0.11; z2 += 0.2) {
            Vec2 z(z1, z2);
            Vec2 x = grad_pressure(S, z);
            LegendrePoint lp = legendre(S, x);
            CHECK((lp.z - z).cwiseAbs().maxCoeff() < 1e-7);
            CHECK(lp.residual < 1e-10);
            // Young's equality at the maximizer
            CHECK(std::abs(lp.pstar + surface_pressure(S, lp.z) - x.dot(lp.z)) < 1e-9);
            CHECK(!lp.hess_singular);
        }
    }
}

TEST_CASE("legendre on the affinely dependent pair: flat direction") {
    PotentialPair raw = raw2();
    PressureSurface S = make_surface(raw);
    // the surface is affine along d = (sqrt3 - 1, sqrt2 - 1), so the hessian
    // is singular everywhere and only the gradient round-trip is well posed
    Vec2 z(-0.25, -0.35);
    Mat2 H = hess_pressure(S, z);
    CHECK(std::abs(H.determinant()) < 1e-7);
    Vec2 x = grad_pressure(S, z);
    LegendrePoint lp = legendre(S, x);
    CHECK(lp.residual < 1e-8);
    CHECK((grad_pressure(S, lp.z) - x).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(lp.pstar + surface_pressure(S, lp.z) - x.dot(lp.z)) < 1e-9);
    CHECK(lp.hess_singular);
}

TEST_CASE("legendre rejects gradients outside the admissible range") {
    PotentialPair pair = std3();
    PressureSurface S = make_surface(pair);
    // averages of f live in [vmin, vmax]; far beyond vmax is unreachable
    Vec2 x(pair.f.vmax + 1.0, pair.g.vmax + 1.0);
    CHECK_THROWS_AS(legendre(S, x), OutsideGradientRange);
}

TEST_CASE("rate profile: max over t of -t P*((1,m)/t) recovers H(m) at t_m") {
    PotentialPair pair = std3();
    PressureSurface S = make_surface(pair);
    std::vector<double> grid;
    for (double t = 0.55; t <= 1.3001; t += 0.025) grid.push_back(t);
    Profile pr = profile_neg_t_pstar(S, fx::kStd3MStar, grid);
    REQUIRE(pr.samples.size() == grid.size());
    for (const auto& pt : pr.samples)
        if (pt.ok) CHECK(std::isfinite(pt.value));
    CHECK(pr.value_hat == doctest::Approx(fx::kStd3H).epsilon(1e-6));
    CHECK(pr.t_hat == doctest::Approx(fx::kStd3Tm).epsilon(1e-4));
}

} // TEST_SUITE
