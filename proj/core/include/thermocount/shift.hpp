#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thermocount/errors.hpp"

// Finite Markov shifts: alphabet, 0/1 transition matrix, mixing certificate,
// cylinder/periodic-word enumeration and deterministic sample words.
//
// Countable alphabets are handled only through finite truncations; a shift is
// always a concrete A x A matrix here.

namespace tc {

using Word = std::vector<int>;

// ---------------------------------------------------------------- Shift ----

struct Shift {
    int A = 0;                       // alphabet size, letters 0..A-1
    std::vector<std::uint8_t> T;     // row-major A x A transition matrix
    int primitivity_index = 0;       // smallest N with T^N entrywise positive

    bool edge(int a, int b) const { return T[std::size_t(a) * A + b] != 0; }

    bool operator==(const Shift& o) const { return A == o.A && T == o.T; }
};

// Throws EmptyRowOrColumn / NotMixing.  The primitivity index is found by
// boolean powering up to A^2 (Wielandt's bound).
Shift build_shift(int alphabet_size, const std::vector<std::uint8_t>& transitions);

Shift full_shift(int alphabet_size);
Shift golden_mean_shift(); // 2 letters, 11 forbidden ... T = [[1,1],[1,0]]

// ------------------------------------------------------------- Cylinder ----

struct Cylinder {
    Word prefix;
    int depth() const { return int(prefix.size()); }
};

bool word_admissible(const Shift& s, const Word& w);
bool word_cyclically_admissible(const Shift& s, const Word& w);

// All admissible k-cylinders in lexicographic order.
std::vector<Cylinder> cylinders(const Shift& s, int k);

// #cylinders(k) = 1^T T^{k-1} 1 and #Fix^n = trace T^n, both as exact
// integers (64-bit; throws Error on overflow).
long long cylinder_count(const Shift& s, int k);
long long fix_count(const Shift& s, int n);

// Dense rank lookup for admissible k-words: rank[code] with
// code = sum w_i A^{k-1-i}; -1 marks inadmissible codes.
struct CylinderIndex {
    int A = 0, k = 0;
    std::vector<Cylinder> list;      // lex ordered
    std::vector<int> rank;           // size A^k

    int code(const int* w) const {
        int c = 0;
        for (int i = 0; i < k; ++i) c = c * A + w[i];
        return c;
    }
    int rank_of(const int* w) const { return rank[code(w)]; }
};
CylinderIndex make_cylinder_index(const Shift& s, int k);

// -------------------------------------------------------- SampleWord -------

// Eventually periodic point stored exactly: prefix then cycle^infinity.
struct SampleWord {
    Word prefix;
    Word cycle; // nonempty; last letter connects back to cycle[0]

    int letter(std::size_t i) const {
        if (i < prefix.size()) return prefix[i];
        return cycle[(i - prefix.size()) % cycle.size()];
    }
};

// Deterministic non-periodic point of the cylinder p: the prefix of p
// followed by the aperiodic marker pattern a b aa b aaa b ... realized on
// admissible letters (stored prefix length >= 64), closed off with the
// shortest reachable cycle.  Non-periodicity of the result is verified.
SampleWord pick_sample_word(const Shift& s, const Cylinder& p);

// ------------------------------------------------------- enumeration -------

// Depth-first lexicographic enumeration of Fix^n; vis(const Word&) is called
// once per periodic word.  Consumers needing running sums should track them
// in the visitor (or use the counting module's pruned engine).
template <class V>
void for_each_fix(const Shift& s, int n, V&& vis) {
    Word w(std::size_t(n), 0);
    // iterative DFS over positions
    auto rec = [&](auto&& self, int d) -> void {
        if (d == n) {
            if (s.edge(w[std::size_t(n) - 1], w[0])) vis(const_cast<const Word&>(w));
            return;
        }
        for (int a = 0; a < s.A; ++a) {
            if (d > 0 && !s.edge(w[std::size_t(d) - 1], a)) continue;
            w[std::size_t(d)] = a;
            self(self, d + 1);
        }
    };
    if (n >= 1) rec(rec, 0);
}

// Preimages y = w_1..w_n z of the sample word z under sigma^n that lie in the
// cylinder p: w starts with prefix(p), all internal edges admissible, and
// w_n -> z_0 admissible.  vis(const Word&) receives the free block w.
template <class V>
void for_each_preimage(const Shift& s, const SampleWord& z, int n, const Cylinder& p, V&& vis) {
    const int k = p.depth();
    if (k < 1) throw Error("for_each_preimage: cylinder must have depth >= 1");
    if (n < k) throw Error("for_each_preimage: n < depth(p)");
    if (!word_admissible(s, p.prefix)) return;
    Word w(std::size_t(n), 0);
    for (int i = 0; i < k; ++i) w[std::size_t(i)] = p.prefix[std::size_t(i)];
    const int z0 = z.letter(0);
    auto rec = [&](auto&& self, int d) -> void {
        if (d == n) {
            if (s.edge(w[std::size_t(n) - 1], z0)) vis(const_cast<const Word&>(w));
            return;
        }
        for (int a = 0; a < s.A; ++a) {
            if (!s.edge(w[std::size_t(d) - 1], a)) continue;
            w[std::size_t(d)] = a;
            self(self, d + 1);
        }
    };
    if (n == 0) return;
    if (k == n) {
        if (s.edge(w[std::size_t(n) - 1], z0)) vis(const_cast<const Word&>(w));
        return;
    }
    rec(rec, k);
}

} // namespace tc
