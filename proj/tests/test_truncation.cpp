#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "thermocount/truncation.hpp"

using namespace tc;

TEST_SUITE("truncation") {

TEST_CASE("named families and their letter rules") {
    TruncationFamily two = named_truncation_family("2log1p");
    TruncationFamily one = named_truncation_family("log1p");
    TruncationFamily lin = named_truncation_family("linear");
    CHECK(two.rule(1) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(one.rule(3) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
    CHECK(lin.rule(7) == doctest::Approx(7.0));
    CHECK_THROWS_AS(named_truncation_family("zeta"), ConfigError);
}

TEST_CASE("partial sums: first term, zeta limit, monotonicity") {
    TruncationFamily fam = named_truncation_family("2log1p");

    // single term: e^{-s * 2 ln 2} = 4^{-s}
    CHECK(entropy_gap_series(fam, 1.0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(entropy_gap_series(fam, 0.5, 1) == doctest::Approx(0.5).epsilon(1e-15));

    // at s = 1 the full series is sum (a+1)^{-2} = zeta(2) - 1; the N-tail
    // is below 1/(N+1)
    double deep = entropy_gap_series(fam, 1.0, 65536);
    CHECK(deep < fx::kZeta2Minus1);
    CHECK(fx::kZeta2Minus1 - deep < 1.0 / 65536.0);

    // increasing in N (positive terms), decreasing in s (larger damping)
    double a = entropy_gap_series(fam, 1.0, 64);
    double b = entropy_gap_series(fam, 1.0, 128);
    double c = entropy_gap_series(fam, 1.2, 128);
    CHECK(a < b);
    CHECK(c < b);

    CHECK_THROWS_AS(entropy_gap_series(fam, 0.0, 8), Error);
    CHECK_THROWS_AS(entropy_gap_series(fam, -1.0, 8), Error);
    CHECK_THROWS_AS(entropy_gap_series(fam, 1.0, 0), Error);
    TruncationFamily capped = fam;
    capped.N_max = 16;
    CHECK_THROWS_AS(entropy_gap_series(capped, 1.0, 17), Error);
}

TEST_CASE("doubling the rule equals doubling the inverse temperature") {
    TruncationFamily two = named_truncation_family("2log1p");
    TruncationFamily one = named_truncation_family("log1p");
    for (double s : {0.3, 0.7, 1.1}) {
        for (long long N : {16LL, 256LL, 4096LL}) {
            double lhs = entropy_gap_series(two, s, N);
            double rhs = entropy_gap_series(one, 2.0 * s, N);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
        }
    }
}

TEST_CASE("truncated alphabet potentials") {
    TruncationFamily fam = named_truncation_family("2log1p");
    Potential u = truncation_potential(fam, 5);
    CHECK(u.depth == 1);
    CHECK(u.index.A == 5);
    // letter a lives at symbol index a-1
    CHECK(u.vmin == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK(u.vmax == doctest::Approx(2.0 * std::log(6.0)).epsilon(1e-15));
    int w0 = 0, w4 = 4;
    CHECK(u.value_at(&w0) == doctest::Approx(fam.rule(1)).epsilon(1e-15));
    CHECK(u.value_at(&w4) == doctest::Approx(fam.rule(5)).epsilon(1e-15));
    CHECK(u.vmin > 0.0); // strict positivity feeds the Bowen-root machinery

    CHECK_THROWS_AS(truncation_potential(fam, 1), Error);
    TruncationFamily capped = fam;
    capped.N_max = 4;
    CHECK_THROWS_AS(truncation_potential(capped, 5), Error);
}

TEST_CASE("critical exponent estimates on the named families") {
    const std::vector<long long> grid{1024, 4096, 16384, 65536};

    // terms (a+1)^{-2s}: boundary at s = 1/2
    CriticalExponent half = estimate_critical_exponent(named_truncation_family("2log1p"), grid);
    CHECK(!half.converges_all);
    CHECK(half.d_hat > 0.45);
    CHECK(half.d_hat < 0.55);
    CHECK(!half.probes.empty());

    // terms (a+1)^{-s}: boundary at s = 1
    CriticalExponent unit = estimate_critical_exponent(named_truncation_family("log1p"), grid);
    CHECK(unit.d_hat > 0.9);
    CHECK(unit.d_hat < 1.1);

    // geometric terms e^{-s a} are summable for every s > 0; the checkpoints
    // must reach deep enough that slow geometric decay beats the block growth
    CriticalExponent geo = estimate_critical_exponent(named_truncation_family("linear"), grid);
    CHECK(geo.converges_all);
    CHECK(geo.d_hat == 0.0);
}

TEST_CASE("critical exponent guard rails") {
    TruncationFamily fam = named_truncation_family("2log1p");
    CHECK_THROWS_AS(estimate_critical_exponent(fam, {8, 16}), Error);
    CHECK_THROWS_AS(estimate_critical_exponent(fam, {8, 8, 16}), Error);
    CHECK_THROWS_AS(estimate_critical_exponent(fam, {16, 8, 32}), Error);
    TruncationFamily capped = fam;
    capped.N_max = 1000;
    CHECK_THROWS_AS(estimate_critical_exponent(capped, {256, 512, 2048}), Error);

    // constant rule: the series diverges at every s, and the bisection says so
    TruncationFamily flat;
    flat.name = "flat";
    flat.rule = [](long long) { return 0.0; };
    CHECK_THROWS_AS(estimate_critical_exponent(flat, {64, 128, 256}), Inconclusive);
}

} // TEST_SUITE
