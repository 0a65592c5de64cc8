#include "thermocount/shift.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>

namespace tc {

// ------------------------------------------------------------ building ----

namespace {

// boolean row-bitset matrix, A <= 64*W
struct BoolMat {
    int A;
    int W;
    std::vector<std::uint64_t> rows; // A * W words

    explicit BoolMat(int a) : A(a), W((a + 63) / 64), rows(std::size_t(a) * W, 0) {}
    void set(int i, int j) { rows[std::size_t(i) * W + j / 64] |= (1ull << (j % 64)); }
    bool get(int i, int j) const { return (rows[std::size_t(i) * W + j / 64] >> (j % 64)) & 1ull; }

    bool all_ones() const {
        for (int i = 0; i < A; ++i) {
            for (int w = 0; w < W; ++w) {
                std::uint64_t need = (w == W - 1 && A % 64) ? ((1ull << (A % 64)) - 1) : ~0ull;
                if ((rows[std::size_t(i) * W + w] & need) != need) return false;
            }
        }
        return true;
    }
};

// C = M * T  (boolean)
BoolMat bool_mul(const BoolMat& M, const Shift& s) {
    BoolMat C(M.A);
    for (int i = 0; i < M.A; ++i) {
        for (int j = 0; j < M.A; ++j) {
            if (!M.get(i, j)) continue;
            // OR in row j of T
            for (int b = 0; b < M.A; ++b)
                if (s.T[std::size_t(j) * s.A + b]) C.set(i, b);
        }
    }
    return C;
}

} // namespace

Shift build_shift(int alphabet_size, const std::vector<std::uint8_t>& transitions) {
    if (alphabet_size < 1) throw Error("build_shift: alphabet_size must be >= 1");
    if (transitions.size() != std::size_t(alphabet_size) * alphabet_size)
        throw Error("build_shift: transition matrix has wrong size");

    Shift s;
    s.A = alphabet_size;
    s.T.resize(transitions.size());
    for (std::size_t i = 0; i < transitions.size(); ++i) s.T[i] = transitions[i] ? 1 : 0;

    for (int a = 0; a < s.A; ++a) {
        bool row = false, col = false;
        for (int b = 0; b < s.A; ++b) {
            row = row || s.edge(a, b);
            col = col || s.edge(b, a);
        }
        if (!row) throw EmptyRowOrColumn("letter " + std::to_string(a) + " has no successor");
        if (!col) throw EmptyRowOrColumn("letter " + std::to_string(a) + " has no predecessor");
    }

    // smallest N <= (A-1)^2 + 1 (Wielandt bound) with T^N > 0; once T^N is
    // positive every higher power stays positive because no column is empty,
    // so the first hit is the minimum.
    BoolMat M(s.A);
    for (int i = 0; i < s.A; ++i)
        for (int j = 0; j < s.A; ++j)
            if (s.edge(i, j)) M.set(i, j);
    const int bound = (s.A - 1) * (s.A - 1) + 1;
    int index = 0;
    for (int N = 1; N <= bound; ++N) {
        if (N > 1) M = bool_mul(M, s);
        if (M.all_ones()) { index = N; break; }
    }
    if (index == 0)
        throw NotMixing("no power of the transition matrix up to the Wielandt bound is positive");
    s.primitivity_index = index;
    return s;
}

Shift full_shift(int alphabet_size) {
    std::vector<std::uint8_t> T(std::size_t(alphabet_size) * alphabet_size, 1);
    return build_shift(alphabet_size, T);
}

Shift golden_mean_shift() {
    return build_shift(2, {1, 1, 1, 0});
}

// ------------------------------------------------------------ cylinders ----

bool word_admissible(const Shift& s, const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!s.edge(w[i], w[i + 1])) return false;
    for (int a : w)
        if (a < 0 || a >= s.A) return false;
    return true;
}

bool word_cyclically_admissible(const Shift& s, const Word& w) {
    if (w.empty()) return false;
    return word_admissible(s, w) && s.edge(w.back(), w.front());
}

std::vector<Cylinder> cylinders(const Shift& s, int k) {
    if (k < 1) throw Error("cylinders: k must be >= 1");
    std::vector<Cylinder> out;
    Word w(std::size_t(k), 0);
    auto rec = [&](auto&& self, int d) -> void {
        if (d == k) { out.push_back(Cylinder{w}); return; }
        for (int a = 0; a < s.A; ++a) {
            if (d > 0 && !s.edge(w[std::size_t(d) - 1], a)) continue;
            w[std::size_t(d)] = a;
            self(self, d + 1);
        }
    };
    rec(rec, 0);
    return out;
}

namespace {

// exact 64-bit nonnegative matrix power sums with overflow guard
std::vector<long long> int_mat_mul(const Shift& s, const std::vector<long long>& M) {
    const int A = s.A;
    std::vector<long long> C(std::size_t(A) * A, 0);
    const long long lim = std::numeric_limits<long long>::max() / (A + 1);
    for (int i = 0; i < A; ++i)
        for (int j = 0; j < A; ++j) {
            if (!M[std::size_t(i) * A + j]) continue;
            long long v = M[std::size_t(i) * A + j];
            if (v > lim) throw Error("integer matrix power overflow");
            for (int b = 0; b < A; ++b)
                if (s.T[std::size_t(j) * A + b]) C[std::size_t(i) * A + b] += v;
        }
    return C;
}

std::vector<long long> int_mat_power(const Shift& s, int n) {
    const int A = s.A;
    std::vector<long long> M(std::size_t(A) * A, 0);
    for (int i = 0; i < A; ++i) M[std::size_t(i) * A + i] = 1; // T^0
    for (int step = 0; step < n; ++step) M = int_mat_mul(s, M);
    return M;
}

} // namespace

long long cylinder_count(const Shift& s, int k) {
    if (k < 1) throw Error("cylinder_count: k must be >= 1");
    auto M = int_mat_power(s, k - 1);
    long long sum = 0;
    for (long long v : M) sum += v;
    return sum;
}

long long fix_count(const Shift& s, int n) {
    if (n < 1) throw Error("fix_count: n must be >= 1");
    auto M = int_mat_power(s, n);
    long long tr = 0;
    for (int i = 0; i < s.A; ++i) tr += M[std::size_t(i) * s.A + i];
    return tr;
}

CylinderIndex make_cylinder_index(const Shift& s, int k) {
    CylinderIndex ix;
    ix.A = s.A;
    ix.k = k;
    long long codes = 1;
    for (int i = 0; i < k; ++i) {
        codes *= s.A;
        if (codes > (1ll << 26)) throw Error("make_cylinder_index: A^k too large");
    }
    ix.list = cylinders(s, k);
    ix.rank.assign(std::size_t(codes), -1);
    for (std::size_t r = 0; r < ix.list.size(); ++r)
        ix.rank[std::size_t(ix.code(ix.list[r].prefix.data()))] = int(r);
    return ix;
}

// --------------------------------------------------------- sample words ----

namespace {

std::vector<int> successors(const Shift& s, int a) {
    std::vector<int> out;
    for (int b = 0; b < s.A; ++b)
        if (s.edge(a, b)) out.push_back(b);
    return out;
}

// shortest path a -> b (letters after a, ending with b); empty if a == b
Word bfs_path(const Shift& s, int a, int b) {
    if (a == b) return {};
    std::vector<int> parent(std::size_t(s.A), -2);
    std::deque<int> q{a};
    parent[std::size_t(a)] = -1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w = 0; w < s.A; ++w) {
            if (!s.edge(v, w) || parent[std::size_t(w)] != -2) continue;
            parent[std::size_t(w)] = v;
            if (w == b) {
                Word path;
                for (int x = b; x != a; x = parent[std::size_t(x)]) path.push_back(x);
                std::reverse(path.begin(), path.end());
                return path;
            }
            q.push_back(w);
        }
    }
    throw Error("bfs_path: target unreachable (shift not strongly connected?)");
}

// shortest closed walk v -> v, as the letters after v (last letter == v)
Word shortest_cycle(const Shift& s, int v) {
    if (s.edge(v, v)) return {v};
    int best = -1;
    Word bestPath;
    for (int c : successors(s, v)) {
        // path c -> v plus the initial edge
        Word tail;
        try {
            tail = bfs_path(s, c, v);
        } catch (const Error&) {
            continue;
        }
        int len = 1 + int(tail.size());
        if (best < 0 || len < best) {
            best = len;
            bestPath.clear();
            bestPath.push_back(c);
            bestPath.insert(bestPath.end(), tail.begin(), tail.end());
        }
    }
    if (best < 0) throw Error("shortest_cycle: no cycle through letter");
    return bestPath; // ends with v
}

// does prefix.cycle^inf equal its own shift by d?  (checking the first
// |prefix| + cycle + d positions is sufficient for eventually periodic words)
bool equals_shift(const SampleWord& x, std::size_t d) {
    const std::size_t L = x.cycle.size();
    const std::size_t upTo = x.prefix.size() + L + d;
    for (std::size_t i = 0; i < upTo; ++i)
        if (x.letter(i) != x.letter(i + d)) return false;
    return true;
}

bool is_periodic(const SampleWord& x) {
    // a periodic word with eventual period L = |cycle| has minimal period <= L
    for (std::size_t d = 1; d <= x.cycle.size(); ++d)
        if (equals_shift(x, d)) return true;
    return false;
}

} // namespace

SampleWord pick_sample_word(const Shift& s, const Cylinder& p) {
    if (p.depth() < 1 || !word_admissible(s, p.prefix))
        throw Error("pick_sample_word: cylinder prefix must be admissible and nonempty");
    if (s.A == 1) throw Error("pick_sample_word: one-letter shift has no non-periodic point");

    const std::size_t targetLen = std::size_t(std::max(64, p.depth() + 8));

    // marker pattern a b aa b aaa b ... over the symbols {A, B}
    auto patternSymbol = [](std::size_t i) -> int {
        // block j contributes j 'a's then one 'b', cumulative length j(j+3)/2
        std::size_t j = 1, pos = i;
        while (pos > j) { pos -= j + 1; ++j; }
        return pos == j ? 1 : 0; // 1 = B
    };

    SampleWord out;
    for (int attempt = 0; attempt < 4; ++attempt) {
        Word w = p.prefix;
        int cur = w.back();
        std::size_t sym = 0;
        while (w.size() < targetLen) {
            auto succ = successors(s, cur);
            int pick = succ[0];
            if (patternSymbol(sym) == 1 && succ.size() > 1) pick = succ[1];
            // perturbation for retry attempts: flip the very first branching step
            if (attempt > 0 && sym == std::size_t(attempt - 1) && succ.size() > 1)
                pick = succ[succ.size() - 1];
            ++sym;
            w.push_back(pick);
            cur = pick;
        }

        // close off: steer to the vertex minimizing bridge + cycle length
        int bestV = -1;
        std::size_t bestCost = std::size_t(-1);
        Word bestBridge, bestCycle;
        for (int v = 0; v < s.A; ++v) {
            Word bridge, cyc;
            try {
                bridge = bfs_path(s, cur, v);
                cyc = shortest_cycle(s, v);
            } catch (const Error&) {
                continue;
            }
            std::size_t cost = bridge.size() + cyc.size();
            if (cost < bestCost) {
                bestCost = cost;
                bestV = v;
                bestBridge = bridge;
                bestCycle = cyc;
            }
        }
        if (bestV < 0) throw Error("pick_sample_word: no reachable cycle");

        out.prefix = w;
        out.prefix.insert(out.prefix.end(), bestBridge.begin(), bestBridge.end());
        out.cycle = bestCycle;

        if (!is_periodic(out)) {
            // sanity: the whole stored word must be admissible
            Word check = out.prefix;
            check.insert(check.end(), out.cycle.begin(), out.cycle.end());
            check.insert(check.end(), out.cycle.begin(), out.cycle.end());
            if (!word_admissible(s, check))
                throw Error("pick_sample_word: constructed word inadmissible (bug)");
            return out;
        }
    }
    throw Error("pick_sample_word: could not construct a non-periodic point");
}

} // namespace tc
