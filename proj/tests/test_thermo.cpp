#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"

using namespace tc;
using namespace fx;

TEST_SUITE("thermo") {

TEST_CASE("closed-form pressure on the full 2-shift") {
    Shift s = full_shift(2);
    // P(u) = ln(e^a + e^b) for depth-1 u = (a, b)
    for (double a = -2.0; a <= 2.01; a += 0.8) {
        for (double b = -1.0; b <= 1.01; b += 0.5) {
            Potential u = make_potential(s, 1, {a, b});
            CHECK(pressure(s, u) ==
                  doctest::Approx(std::log(std::exp(a) + std::exp(b))).epsilon(1e-12));
        }
    }
}

TEST_CASE("golden mean entropy is ln phi") {
    Shift s = golden_mean_shift();
    Potential zero = constant_potential(s, 0.0);
    CHECK(pressure(s, zero) == doctest::Approx(fx::kLnPhi).epsilon(1e-12));
}

TEST_CASE("pressure is monotone and shifts by constants") {
    PotentialPair pair = std3();
    Shift s = pair.f.shift;
    double P = pressure(s, pair.f);
    CHECK(pressure(s, combine(pair.f, 1.0, constant_potential(s, 0.7), 1.0)) ==
          doctest::Approx(P + 0.7).epsilon(1e-12));
    // adding a nonnegative bump cannot lower the pressure
    std::vector<double> bumped = pair.f.values;
    bumped[3] += 0.4;
    CHECK(pressure(s, make_potential(s, 2, bumped)) >= P - 1e-13);
}

TEST_CASE("transfer matrix realizes the operator on indicator overlaps") {
    Shift s = golden_mean_shift();
    Potential u = make_potential(s, 1, {0.3, -0.2});
    TransferMatrix tm = transfer_matrix(s, u);
    REQUIRE(tm.L.rows() == 2);
    // L(q,p) = e^{u(p)} iff p -> q admissible; golden mean forbids 1 -> 1
    CHECK(tm.L(0, 0) == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
    CHECK(tm.L(0, 1) == doctest::Approx(std::exp(-0.2)).epsilon(1e-15));
    CHECK(tm.L(1, 0) == doctest::Approx(std::exp(0.3)).epsilon(1e-15));
    CHECK(tm.L(1, 1) == 0.0);
}

TEST_CASE("rpf data: eigen residuals, normalization, positivity, gap") {
    PotentialPair pair = std3();
    Shift s = pair.f.shift;
    RpfData r = rpf_data(s, pair.f, true);
    TransferMatrix tm = transfer_matrix(s, pair.f);
    double lam = std::exp(r.pressure);
    CHECK((tm.L * r.h - lam * r.h).cwiseAbs().maxCoeff() / lam < 1e-11);
    CHECK((tm.L.transpose() * r.nu - lam * r.nu).cwiseAbs().maxCoeff() / lam < 1e-11);
    CHECK(r.nu.sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.h.dot(r.nu) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.mu.sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(r.h.minCoeff() > 0);
    CHECK(r.nu.minCoeff() > 0);
    CHECK(r.has_gap);
    CHECK(r.gap > 0);
    CHECK(r.gap < 1);
}

TEST_CASE("cylinder chain is row-stochastic with stationary mu") {
    PotentialPair pair = std3();
    RpfData r = rpf_data(pair.f.shift, pair.f, false);
    Vec ones = Vec::Ones(r.chain.cols());
    CHECK((r.chain * ones - ones).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r.chain.transpose() * r.mu - r.mu).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gibbs constant is exactly 1 for depth-1 full-shift weights") {
    Shift s = full_shift(2);
    Potential u = make_potential(s, 1, {0.4, -0.3});
    RpfData r = rpf_data(s, u, false);
    double Q = gibbs_constant(s, u, r, 7);
    CHECK(Q == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gibbs constant bounded for markov constraints and deeper tables") {
    Shift s = golden_mean_shift();
    Potential u = make_potential(s, 1, {0.2, 0.9});
    RpfData r = rpf_data(s, u, false);
    double Q = gibbs_constant(s, u, r, 8);
    CHECK(Q >= 1.0 - 1e-12);
    CHECK(Q < 1e3);
    PotentialPair pair = std3();
    RpfData r2 = rpf_data(pair.f.shift, pair.f, false);
    double Q2 = gibbs_constant(pair.f.shift, pair.f, r2, 6);
    CHECK(Q2 >= 1.0 - 1e-12);
    CHECK(Q2 < 1e3);
}

TEST_CASE("cylinder measures are consistent across depths") {
    PotentialPair pair = std3();
    Shift s = pair.f.shift;
    RpfData r = rpf_data(s, pair.f, false);
    // all depth-3 cylinder masses sum to 1 and refine the depth-2 masses
    auto c3 = cylinders(s, 3);
    double total = 0;
    for (const auto& c : c3) total += cylinder_measure(r, s, c);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    Cylinder base{{0, 2}};
    double mbase = cylinder_measure(r, s, base);
    double split = 0;
    for (int a = 0; a < 3; ++a) {
        Cylinder ext{{0, 2, a}};
        split += cylinder_measure(r, s, ext);
    }
    CHECK(split == doctest::Approx(mbase).epsilon(1e-12));
}

TEST_CASE("bowen root: log2 of the golden ratio") {
    Shift s = full_shift(2);
    Potential f = make_potential(s, 1, {std::log(2.0), std::log(4.0)});
    CHECK(bowen_root(s, f) == doctest::Approx(fx::kLog2Phi).epsilon(1e-10));
}

TEST_CASE("bowen root leaves zero pressure and needs positivity") {
    PotentialPair pair = std3();
    Shift s = pair.f.shift;
    double d = bowen_root(s, pair.f);
    CHECK(std::abs(pressure(s, scale(pair.f, -d))) < 1e-10);
    CHECK(d == doctest::Approx(fx::kStd3DeltaF).epsilon(1e-10));
    CHECK(bowen_root(s, pair.g) == doctest::Approx(fx::kStd3DeltaG).epsilon(1e-10));
    Potential bad = make_potential(s, 1, {1.0, -1.0, 1.0});
    CHECK_THROWS_AS(bowen_root(s, bad), Error);
}

} // TEST_SUITE
