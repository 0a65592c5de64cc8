#include <doctest.h>

#include "fixtures.hpp"

using namespace tc;
using namespace fx;

TEST_SUITE("potential") {

TEST_CASE("table lookup and min/max") {
    Shift s = full_shift(2);
    Potential f = make_potential(s, 1, {1.0, 2.0});
    CHECK(f.vmin == 1.0);
    CHECK(f.vmax == 2.0);
    int w0[] = {0}, w1[] = {1};
    CHECK(f.value_at(w0) == 1.0);
    CHECK(f.value_at(w1) == 2.0);
    CHECK_THROWS_AS(make_potential(s, 1, {1.0}), Error); // wrong table size
}

TEST_CASE("ergodic sums on explicit words") {
    Shift s = full_shift(2);
    Potential f = make_potential(s, 2, {0.5, 1.0, 2.0, 4.0}); // 00,01,10,11
    // word 01 repeated: pairs 01, 10 -> 1.0 + 2.0
    CHECK(ergodic_sum(f, Word{0, 1}) == doctest::Approx(3.0).epsilon(1e-15));
    // fixed word 0: pair 00
    CHECK(ergodic_sum(f, Word{0}) == doctest::Approx(0.5).epsilon(1e-15));
    // word 011: pairs 01, 11, 10
    CHECK(ergodic_sum(f, Word{0, 1, 1}) == doctest::Approx(7.0).epsilon(1e-15));
}

TEST_CASE("cyclic rotation invariance of periodic sums") {
    PotentialPair pair = std3();
    Word w = {0, 2, 1, 1, 0, 2};
    double base = ergodic_sum(pair.f, w);
    for (int r = 1; r < 6; ++r) {
        Word rot = w;
        std::rotate(rot.begin(), rot.begin() + r, rot.end());
        CHECK(ergodic_sum(pair.f, rot) == doctest::Approx(base).epsilon(1e-14));
    }
}

TEST_CASE("combine and scale are pointwise linear on sums") {
    PotentialPair pair = std3();
    Potential u = combine(pair.f, 2.0, pair.g, -0.25);
    Potential v = scale(pair.f, -1.5);
    Word w = {2, 0, 1};
    CHECK(ergodic_sum(u, w) ==
          doctest::Approx(2.0 * ergodic_sum(pair.f, w) - 0.25 * ergodic_sum(pair.g, w))
              .epsilon(1e-13));
    CHECK(ergodic_sum(v, w) ==
          doctest::Approx(-1.5 * ergodic_sum(pair.f, w)).epsilon(1e-13));
}

TEST_CASE("depth refinement changes the table, not the function") {
    PotentialPair pair = std3();
    Potential f4 = refine_depth(pair.f, 4);
    CHECK(f4.depth == 4);
    CHECK(f4.values.size() == 81);
    Word w = {0, 1, 2, 2, 1};
    CHECK(ergodic_sum(f4, w) == doctest::Approx(ergodic_sum(pair.f, w)).epsilon(1e-13));
    CHECK(sup_difference(pair.f, f4) < 1e-14);
    CHECK_THROWS_AS(refine_depth(pair.f, 1), DepthTooShallow);
}

TEST_CASE("preimage sums split into free part plus target head") {
    Shift s = full_shift(3);
    PotentialPair pair = std3();
    Cylinder p{{1}};
    SampleWord z = pick_sample_word(s, p);
    Word w = {1, 0, 2};
    // S_3 f(w . z) = f(w0 w1) + f(w1 w2) + f(w2 z0)
    int b0[] = {w[0], w[1]}, b1[] = {w[1], w[2]}, b2[] = {w[2], z.letter(0)};
    double expect = pair.f.value_at(b0) + pair.f.value_at(b1) + pair.f.value_at(b2);
    CHECK(preimage_ergodic_sum(pair.f, w, z) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("pairs must be strictly positive") {
    Shift s = full_shift(2);
    Potential ok = make_potential(s, 1, {1.0, 2.0});
    Potential zero = make_potential(s, 1, {0.0, 1.0});
    Potential neg = make_potential(s, 1, {-0.1, 1.0});
    CHECK_THROWS_AS(make_pair_potentials(ok, zero), Error);
    CHECK_THROWS_AS(make_pair_potentials(neg, ok), Error);
    PotentialPair pair = make_pair_potentials(ok, ok);
    CHECK(pair.f.depth == pair.g.depth);
}

TEST_CASE("arithmetic witness flags the affinely dependent pair") {
    // (sqrt3-1) f + (sqrt2-1) g is constant, so the orbit-sum difference
    // vectors are rank deficient: the lattice test must fire
    PotentialPair raw = raw2();
    CHECK(arithmetic_witness(raw, 6) == Independence::violated);
}

TEST_CASE("arithmetic witness accepts the nine-cylinder pair") {
    PotentialPair pair = std3();
    Independence w = arithmetic_witness(pair, 6);
    CHECK(w != Independence::violated);
}

TEST_CASE("constant potentials and to_string") {
    Shift s = golden_mean_shift();
    Potential c = constant_potential(s, 2.5);
    CHECK(c.vmin == 2.5);
    CHECK(c.vmax == 2.5);
    CHECK(ergodic_sum(c, Word{0, 1, 0}) == doctest::Approx(7.5).epsilon(1e-15));
    CHECK(std::string(to_string(Independence::assumed)) == "assumed");
    CHECK(std::string(to_string(Independence::verified)) == "verified");
    CHECK(std::string(to_string(Independence::violated)) == "violated");
}

} // TEST_SUITE
