#include <doctest.h>

#include <set>

#include "fixtures.hpp"

using namespace tc;

TEST_SUITE("shift") {

TEST_CASE("full shift basics") {
    Shift s = full_shift(3);
    CHECK(s.A == 3);
    CHECK(s.primitivity_index == 1);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(s.edge(a, b));
    CHECK(cylinder_count(s, 1) == 3);
    CHECK(cylinder_count(s, 2) == 9);
    CHECK(cylinder_count(s, 5) == 243);
    CHECK(fix_count(s, 1) == 3);
    CHECK(fix_count(s, 4) == 81);
}

TEST_CASE("golden mean shift: Lucas traces and Fibonacci cylinder counts") {
    Shift s = golden_mean_shift();
    CHECK(s.A == 2);
    CHECK(s.edge(0, 0));
    CHECK(s.edge(0, 1));
    CHECK(s.edge(1, 0));
    CHECK(!s.edge(1, 1));
    CHECK(s.primitivity_index == 2);
    // trace T^n gives the Lucas numbers 1, 3, 4, 7, 11, 18, ...
    long long lucas[] = {0, 1, 3, 4, 7, 11, 18, 29, 47};
    for (int n = 1; n <= 8; ++n) CHECK(fix_count(s, n) == lucas[n]);
    // 1^T T^{k-1} 1 gives 2, 3, 5, 8, 13, ...
    long long fib[] = {0, 2, 3, 5, 8, 13, 21};
    for (int k = 1; k <= 6; ++k) CHECK(cylinder_count(s, k) == fib[k]);
}

TEST_CASE("rejects matrices without a mixing certificate") {
    // permutation matrix: irreducible but periodic, never primitive
    CHECK_THROWS_AS(build_shift(2, {0, 1, 1, 0}), NotMixing);
    // dead letter
    CHECK_THROWS_AS(build_shift(2, {1, 1, 0, 0}), EmptyRowOrColumn);
    CHECK_THROWS_AS(build_shift(2, {1, 0, 1, 0}), EmptyRowOrColumn);
}

TEST_CASE("cylinder enumeration matches the matrix count and stays sorted") {
    for (const Shift& s : {full_shift(2), golden_mean_shift(), full_shift(3)}) {
        for (int k = 1; k <= 5; ++k) {
            auto cyls = cylinders(s, k);
            CHECK(static_cast<long long>(cyls.size()) == cylinder_count(s, k));
            for (size_t i = 0; i + 1 < cyls.size(); ++i)
                CHECK(cyls[i].prefix < cyls[i + 1].prefix);
            for (const auto& c : cyls) CHECK(word_admissible(s, c.prefix));
        }
    }
}

TEST_CASE("cylinder index ranks round-trip") {
    Shift s = golden_mean_shift();
    CylinderIndex idx = make_cylinder_index(s, 3);
    auto cyls = cylinders(s, 3);
    REQUIRE(idx.list.size() == cyls.size());
    for (size_t i = 0; i < cyls.size(); ++i)
        CHECK(idx.rank_of(cyls[i].prefix.data()) == static_cast<int>(i));
    int bad[] = {0, 1, 1}; // contains the forbidden 11
    CHECK(idx.rank_of(bad) == -1);
}

TEST_CASE("periodic enumeration agrees with the trace") {
    for (const Shift& s : {full_shift(2), golden_mean_shift(), full_shift(3)}) {
        for (int n = 1; n <= 7; ++n) {
            long long cnt = 0;
            for_each_fix(s, n, [&](const Word& w) {
                CHECK(static_cast<int>(w.size()) == n);
                CHECK(word_cyclically_admissible(s, w));
                ++cnt;
            });
            CHECK(cnt == fix_count(s, n));
        }
    }
}

TEST_CASE("preimage enumeration: full-shift count is A^(n-k) x A-ish") {
    Shift s = full_shift(3);
    Cylinder p{{0, 2}};
    SampleWord z = pick_sample_word(s, p);
    // free letters: positions k..n-1, last constrained to reach z0; on the
    // full shift every edge exists, so the count is 3^(n-2)
    for (int n = 2; n <= 6; ++n) {
        long long cnt = 0;
        for_each_preimage(s, z, n, p, [&](const Word& w) {
            CHECK(static_cast<int>(w.size()) == n);
            CHECK(w[0] == 0);
            CHECK(w[1] == 2);
            ++cnt;
        });
        long long expect = 1;
        for (int i = 0; i < n - 2; ++i) expect *= 3;
        CHECK(cnt == expect);
    }
}

TEST_CASE("preimage enumeration respects forbidden words") {
    Shift s = golden_mean_shift();
    Cylinder p{{1}};
    SampleWord z = pick_sample_word(s, p);
    for (int n = 1; n <= 8; ++n) {
        long long cnt = 0;
        for_each_preimage(s, z, n, p, [&](const Word& w) {
            CHECK(word_admissible(s, w));
            CHECK(s.edge(w.back(), z.letter(0)));
            ++cnt;
        });
        long long brute = 0;
        // brute force over all 2^n words
        for (long long mask = 0; mask < (1LL << n); ++mask) {
            Word w(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = (mask >> i) & 1;
            if (w[0] != 1) continue;
            if (!word_admissible(s, w)) continue;
            if (!s.edge(w.back(), z.letter(0))) continue;
            ++brute;
        }
        CHECK(cnt == brute);
    }
}

TEST_CASE("sample words live in their cylinder and are not periodic") {
    for (const Shift& s : {full_shift(2), golden_mean_shift(), full_shift(3)}) {
        auto cyls = cylinders(s, 2);
        for (const auto& p : cyls) {
            SampleWord z = pick_sample_word(s, p);
            for (int i = 0; i < p.depth(); ++i)
                CHECK(z.letter(static_cast<size_t>(i)) == p.prefix[static_cast<size_t>(i)]);
            // admissibility along a long stretch, including the cycle seam
            for (size_t i = 0; i + 1 < 4 * (z.prefix.size() + z.cycle.size()); ++i)
                CHECK(s.edge(z.letter(i), z.letter(i + 1)));
            // not fixed by any small shift power: some position must differ
            for (size_t sh = 1; sh <= 6; ++sh) {
                bool differs = false;
                for (size_t i = 0; i < z.prefix.size() + 2 * z.cycle.size() + sh; ++i)
                    if (z.letter(i) != z.letter(i + sh)) { differs = true; break; }
                CHECK(differs);
            }
        }
    }
}

TEST_CASE("deterministic enumeration order") {
    Shift s = full_shift(2);
    std::vector<Word> first, second;
    for_each_fix(s, 5, [&](const Word& w) { first.push_back(w); });
    for_each_fix(s, 5, [&](const Word& w) { second.push_back(w); });
    CHECK(first == second);
    CHECK(std::is_sorted(first.begin(), first.end()));
}

} // TEST_SUITE
