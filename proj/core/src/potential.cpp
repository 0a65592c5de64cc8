#include "thermocount/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermocount/kahan.hpp"

namespace tc {

Potential make_potential(const Shift& s, int depth, const std::vector<double>& values) {
    if (depth < 1) throw Error("make_potential: depth must be >= 1");
    Potential f;
    f.shift = s;
    f.depth = depth;
    f.index = make_cylinder_index(s, depth);
    if (values.size() != f.index.list.size())
        throw Error("make_potential: need one value per admissible cylinder (" +
                    std::to_string(f.index.list.size()) + " expected, got " +
                    std::to_string(values.size()) + ")");
    f.values = values;
    f.dense.assign(f.index.rank.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t c = 0; c < f.index.rank.size(); ++c)
        if (f.index.rank[c] >= 0) f.dense[c] = values[std::size_t(f.index.rank[c])];
    f.vmin = *std::min_element(values.begin(), values.end());
    f.vmax = *std::max_element(values.begin(), values.end());
    return f;
}

Potential constant_potential(const Shift& s, double c) {
    return make_potential(s, 1, std::vector<double>(std::size_t(s.A), c));
}

Potential refine_depth(const Potential& f, int k2) {
    if (k2 < f.depth) throw DepthTooShallow("refine_depth: cannot coarsen a potential");
    if (k2 == f.depth) return f;
    auto cyls = cylinders(f.shift, k2);
    std::vector<double> vals(cyls.size());
    for (std::size_t i = 0; i < cyls.size(); ++i)
        vals[i] = f.value_at(cyls[i].prefix.data()); // first k letters decide
    return make_potential(f.shift, k2, vals);
}

Potential combine(const Potential& f, double a, const Potential& g, double b) {
    if (!(f.shift == g.shift)) throw Error("combine: potentials live on different shifts");
    const int k = std::max(f.depth, g.depth);
    Potential F = refine_depth(f, k), G = refine_depth(g, k);
    std::vector<double> vals(F.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a * F.values[i] + b * G.values[i];
    return make_potential(f.shift, k, vals);
}

Potential scale(const Potential& f, double a) {
    std::vector<double> vals(f.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = a * f.values[i];
    return make_potential(f.shift, f.depth, vals);
}

double ergodic_sum(const Potential& f, const Word& w) {
    if (w.empty()) throw Error("ergodic_sum: empty word");
    if (!word_cyclically_admissible(f.shift, w))
        throw Error("ergodic_sum: word not cyclically admissible");
    const int n = int(w.size());
    const int k = f.depth;
    KahanSum acc;
    std::vector<int> buf(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) buf[std::size_t(j)] = w[std::size_t((i + j) % n)];
        acc += f.value_at(buf.data());
    }
    return acc.value();
}

double preimage_ergodic_sum(const Potential& f, const Word& w, const SampleWord& z) {
    const int n = int(w.size());
    const int k = f.depth;
    if (n < 1) throw Error("preimage_ergodic_sum: empty word");
    KahanSum acc;
    std::vector<int> buf(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < k; ++j) {
            int pos = i + j;
            buf[std::size_t(j)] = pos < n ? w[std::size_t(pos)] : z.letter(std::size_t(pos - n));
        }
        acc += f.value_at(buf.data());
    }
    return acc.value();
}

double sup_difference(const Potential& f, const Potential& g) {
    if (!(f.shift == g.shift)) throw Error("sup_difference: potentials live on different shifts");
    const int k = std::max(f.depth, g.depth);
    Potential F = refine_depth(f, k), G = refine_depth(g, k);
    double m = 0;
    for (std::size_t i = 0; i < F.values.size(); ++i)
        m = std::max(m, std::abs(F.values[i] - G.values[i]));
    return m;
}

const char* to_string(Independence x) {
    switch (x) {
        case Independence::assumed: return "assumed";
        case Independence::verified: return "verified";
        case Independence::violated: return "violated";
    }
    return "?";
}

PotentialPair make_pair_potentials(const Potential& f, const Potential& g, Independence declared) {
    if (!(f.shift == g.shift)) throw Error("make_pair_potentials: shifts differ");
    const int k = std::max(f.depth, g.depth);
    PotentialPair p{refine_depth(f, k), refine_depth(g, k), declared};
    if (p.f.vmin <= 0 || p.g.vmin <= 0)
        throw Error("make_pair_potentials: potentials must be strictly positive");
    return p;
}

// ----------------------------------------------- arithmetic witness --------

namespace {

// approximate gcd of positive reals (Euclid with absolute cutoff)
double real_gcd(const std::vector<double>& xs, double cut) {
    double g = 0;
    for (double x : xs) {
        double a = std::max(g, std::abs(x)), b = std::min(g, std::abs(x));
        while (b > cut) {
            double r = a - b * std::round(a / b);
            a = b;
            b = std::abs(r);
        }
        g = a;
    }
    return g;
}

bool fits_lattice(const std::vector<double>& xs, double scale) {
    std::vector<double> nz;
    for (double x : xs)
        if (std::abs(x) > 1e-12 * scale) nz.push_back(x);
    if (nz.empty()) return true; // everything ~0: degenerate direction
    double g = real_gcd(nz, 1e-9 * scale);
    if (g < 1e-6 * scale) return false;
    for (double x : nz)
        if (std::abs(x - g * std::round(x / g)) > 1e-9 * scale) return false;
    return true;
}

// continued-fraction rationality probe: is x within 1e-9 of p/q with small q?
bool rationalish(double x) {
    const double tol = 1e-9 * std::max(1.0, std::abs(x));
    double a = x;
    long long p0 = 1, q0 = 0, p1 = (long long)std::floor(a), q1 = 1;
    a -= std::floor(a);
    for (int it = 0; it < 40 && q1 <= 2000; ++it) {
        if (std::abs(x - double(p1) / double(q1)) <= tol) return true;
        if (a < 1e-13) break;
        a = 1.0 / a;
        long long d = (long long)std::floor(a);
        a -= std::floor(a);
        long long p2 = d * p1 + p0, q2 = d * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (q1 <= 0) break; // overflow guard
    }
    return false;
}

} // namespace

Independence arithmetic_witness(const PotentialPair& pair, int n_max) {
    if (n_max < 2) throw Error("arithmetic_witness: n_max must be >= 2");
    const Shift& s = pair.f.shift;

    // choose the largest n with a manageable Fix^n, then collect the orbit-sum
    // difference vectors within each n
    std::vector<std::pair<double, double>> diffs;
    for (int n = std::max(2, n_max - 1); n <= n_max; ++n) {
        if (fix_count(s, n) > 300000) break;
        bool haveBase = false;
        double bf = 0, bg = 0;
        for_each_fix(s, n, [&](const Word& w) {
            double sf = ergodic_sum(pair.f, w);
            double sg = ergodic_sum(pair.g, w);
            if (!haveBase) {
                bf = sf; bg = sg; haveBase = true;
            } else if (diffs.size() < 4000) {
                diffs.emplace_back(sf - bf, sg - bg);
            }
        });
    }
    if (diffs.empty()) return Independence::assumed;

    double scale = 0;
    for (auto& [u, v] : diffs) scale = std::max({scale, std::abs(u), std::abs(v)});
    if (scale < 1e-12) return Independence::violated; // all orbit sums equal per n

    // rank of the difference set
    double maxdet = 0;
    const std::size_t probe = std::min<std::size_t>(diffs.size(), 200);
    for (std::size_t i = 0; i < probe; ++i)
        for (std::size_t j = i + 1; j < probe; ++j)
            maxdet = std::max(maxdet, std::abs(diffs[i].first * diffs[j].second -
                                               diffs[i].second * diffs[j].first));
    if (maxdet < 1e-9 * scale * scale) return Independence::violated;

    // 1-D lattice probes along a few fixed directions
    std::vector<double> pf, pg, ps, pd;
    for (auto& [u, v] : diffs) {
        pf.push_back(u);
        pg.push_back(v);
        ps.push_back(u + v);
        pd.push_back(u - v);
    }
    if (fits_lattice(pf, scale) || fits_lattice(pg, scale) ||
        fits_lattice(ps, scale) || fits_lattice(pd, scale))
        return Independence::violated;

    // witness: three pairwise-independent vectors with irrational component
    // ratios in both coordinates
    const std::size_t nW = std::min<std::size_t>(diffs.size(), 40);
    auto witnessPair = [&](std::size_t i, std::size_t j) {
        double det = diffs[i].first * diffs[j].second - diffs[i].second * diffs[j].first;
        if (std::abs(det) < 1e-6 * scale * scale) return false;
        if (std::abs(diffs[j].first) < 1e-12 * scale ||
            std::abs(diffs[j].second) < 1e-12 * scale) return false;
        double r1 = diffs[i].first / diffs[j].first;
        double r2 = diffs[i].second / diffs[j].second;
        return !rationalish(r1) && !rationalish(r2);
    };
    for (std::size_t i = 0; i < nW; ++i)
        for (std::size_t j = i + 1; j < nW; ++j) {
            if (!witnessPair(i, j)) continue;
            for (std::size_t l = j + 1; l < nW; ++l)
                if (witnessPair(i, l) && witnessPair(j, l)) return Independence::verified;
        }
    return Independence::assumed;
}

} // namespace tc
