#include "thermocount/thermo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace tc {

// ------------------------------------------------------ transfer matrix ----

TransferMatrix transfer_matrix(const Shift& s, const Potential& u) {
    TransferMatrix tm;
    tm.k = u.depth;
    tm.basis = make_cylinder_index(s, u.depth);
    const int n = int(tm.basis.list.size());
    tm.L = Mat::Zero(n, n);
    const int k = u.depth;
    for (int p = 0; p < n; ++p) {
        const Word& wp = tm.basis.list[std::size_t(p)].prefix;
        const double w = std::exp(u.values[std::size_t(p)]);
        if (k == 1) {
            for (int q = 0; q < n; ++q) {
                const Word& wq = tm.basis.list[std::size_t(q)].prefix;
                if (s.edge(wp[0], wq[0])) tm.L(q, p) += w;
            }
        } else {
            // q runs over admissible extensions of the overlap p_2..p_k
            for (int c = 0; c < s.A; ++c) {
                if (!s.edge(wp[std::size_t(k) - 1], c)) continue;
                Word wq(wp.begin() + 1, wp.end());
                wq.push_back(c);
                int q = tm.basis.rank_of(wq.data());
                tm.L(q, p) += w;
            }
        }
    }
    return tm;
}

// ------------------------------------------------------- power iteration ---

namespace {

struct PerronResult {
    double lambda;
    Vec x;
};

// Collatz-Wielandt bracketed power iteration on a nonnegative primitive
// matrix given as a multiply callback.
template <class Mul>
PerronResult perron(int n, Mul&& mul) {
    Vec x = Vec::Ones(n);
    double lambda = 1.0;
    const int cap = 100000;
    double width = 1.0;
    for (int it = 0; it < cap; ++it) {
        Vec y = mul(x);
        double lo = 1e300, hi = 0;
        for (int i = 0; i < n; ++i) {
            if (x[i] <= 0.0) throw NonConvergence("perron: iterate left the positive cone");
            double r = y[i] / x[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        lambda = 0.5 * (lo + hi);
        width = (hi - lo) / hi;
        x = y / y.sum();
        if (width <= 1e-13) return {lambda, x};
    }
    if (width <= 1e-12) return {lambda, x};
    throw NonConvergence("perron: bracket width " + std::to_string(width) +
                         " after iteration cap");
}

} // namespace

double pressure(const Shift& s, const Potential& u) {
    TransferMatrix tm = transfer_matrix(s, u);
    auto r = perron(int(tm.L.rows()), [&](const Vec& v) { return Vec(tm.L * v); });
    return std::log(r.lambda);
}

RpfData rpf_data(const Shift& s, const Potential& u, bool need_gap) {
    TransferMatrix tm = transfer_matrix(s, u);
    const int n = int(tm.L.rows());

    auto right = perron(n, [&](const Vec& v) { return Vec(tm.L * v); });
    auto left = perron(n, [&](const Vec& v) { return Vec(tm.L.transpose() * v); });

    RpfData r;
    r.k = tm.k;
    r.basis = tm.basis;
    r.pressure = std::log(right.lambda);
    r.nu = left.x / left.x.sum();
    double mass = right.x.dot(r.nu);
    r.h = right.x / mass;
    r.mu = r.h.cwiseProduct(r.nu);

    if (need_gap) {
        if (n > 2048) throw Error("rpf_data: dense gap solve limited to 2048 cylinders");
        Eigen::EigenSolver<Mat> es(tm.L, /*computeEigenvectors=*/false);
        std::vector<double> mods(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) mods[std::size_t(i)] = std::abs(es.eigenvalues()[i]);
        std::sort(mods.begin(), mods.end(), std::greater<>());
        r.gap = n > 1 ? mods[1] / mods[0] : 0.0;
        r.has_gap = true;
    }

    // stochasticized cylinder chain: pi[p][q] = L(q,p) nu(q) / (e^P nu(p)).
    // Row sums are exactly the left-eigenvector identity, and mu is the
    // stationary vector.
    const double eP = right.lambda;
    r.chain = Mat::Zero(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (tm.L(q, p) != 0.0) r.chain(p, q) = tm.L(q, p) * r.nu[q] / (eP * r.nu[p]);
    return r;
}

// ------------------------------------------------------------- measures ----

double cylinder_measure(const RpfData& rpf, const Shift& s, const Cylinder& p) {
    const int k = rpf.k;
    const int n = p.depth();
    if (n < 1) throw Error("cylinder_measure: empty cylinder");
    if (!word_admissible(s, p.prefix)) return 0.0;

    if (n >= k) {
        int r0 = rpf.basis.rank_of(p.prefix.data());
        double m = rpf.mu[r0];
        int prev = r0;
        for (int i = 1; i + k <= n; ++i) {
            int r1 = rpf.basis.rank_of(p.prefix.data() + i);
            m *= rpf.chain(prev, r1);
            prev = r1;
        }
        return m;
    }
    // shallow cylinder: sum over admissible depth-k extensions
    double total = 0;
    Word w = p.prefix;
    w.resize(std::size_t(k));
    auto rec = [&](auto&& self, int d) -> void {
        if (d == k) {
            total += rpf.mu[rpf.basis.rank_of(w.data())];
            return;
        }
        for (int a = 0; a < s.A; ++a) {
            if (!s.edge(w[std::size_t(d) - 1], a)) continue;
            w[std::size_t(d)] = a;
            self(self, d + 1);
        }
    };
    rec(rec, n);
    return total;
}

double gibbs_constant(const Shift& s, const Potential& u, const RpfData& rpf, int n_max) {
    if (n_max < u.depth) throw Error("gibbs_constant: n_max must be >= depth(u)");
    double Q = 1.0;
    const int k = u.depth;
    for (int n = 1; n <= n_max; ++n) {
        if (cylinder_count(s, n) > 1000000) break;
        for (const Cylinder& p : cylinders(s, n)) {
            double mu = cylinder_measure(rpf, s, p);
            SampleWord zp = pick_sample_word(s, p);
            double snu = 0;
            std::vector<int> buf(static_cast<std::size_t>(k));
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < k; ++j) buf[std::size_t(j)] = zp.letter(std::size_t(i + j));
                snu += u.value_at(buf.data());
            }
            double gibbs = std::exp(snu - n * rpf.pressure);
            double ratio = gibbs / mu;
            Q = std::max({Q, ratio, 1.0 / ratio});
        }
    }
    return Q;
}

// ------------------------------------------------------------ Bowen root ---

double bowen_root(const Shift& s, const Potential& f) {
    if (f.vmin <= 0) throw Error("bowen_root: potential must be strictly positive");

    auto P = [&](double t) { return pressure(s, scale(f, -t)); };
    auto dP = [&](double t) {
        RpfData r = rpf_data(s, scale(f, -t), /*need_gap=*/false);
        // dP/ds = -int f dmu at u = -s f
        Potential fk = refine_depth(f, r.k);
        double m = 0;
        for (int i = 0; i < r.mu.size(); ++i) m += fk.values[std::size_t(i)] * r.mu[i];
        return -m;
    };

    double lo = 0.0, Plo = P(0.0);
    if (Plo <= 0) throw BracketFail("bowen_root: P(0) <= 0");
    double hi = 1.0, Phi = P(hi);
    int grow = 0;
    while (Phi > 0) {
        lo = hi;
        Plo = Phi;
        hi *= 2;
        Phi = P(hi);
        if (++grow > 200) throw BracketFail("bowen_root: no sign change up to huge s");
    }

    double sroot = 0.5 * (lo + hi), val = P(sroot);
    for (int it = 0; it < 200; ++it) {
        if (std::abs(val) <= 1e-13) break;
        if (val > 0) lo = sroot; else hi = sroot;
        double step = dP(sroot);
        double cand = sroot - val / step;
        if (!(cand > lo && cand < hi)) cand = 0.5 * (lo + hi);
        sroot = cand;
        val = P(sroot);
    }
    if (std::abs(val) > 1e-12)
        throw NonConvergence("bowen_root: residual " + std::to_string(val));
    return sroot;
}

} // namespace tc
