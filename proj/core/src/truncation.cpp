#include "thermocount/truncation.hpp"

#include <cmath>

#include "thermocount/kahan.hpp"

namespace tc {

TruncationFamily named_truncation_family(const std::string& name) {
    TruncationFamily fam;
    fam.name = name;
    if (name == "2log1p") {
        fam.rule = [](long long a) { return 2.0 * std::log((double)a + 1.0); };
    } else if (name == "log1p") {
        fam.rule = [](long long a) { return std::log((double)a + 1.0); };
    } else if (name == "linear") {
        fam.rule = [](long long a) { return (double)a; };
    } else {
        throw ConfigError("unknown truncation family '" + name + "'");
    }
    return fam;
}

double entropy_gap_series(const TruncationFamily& fam, double s, long long N) {
    if (!(s > 0)) throw Error("entropy_gap_series: need s > 0");
    if (N < 1 || N > fam.N_max) throw Error("entropy_gap_series: N outside [1, N_max]");
    KahanSum sum;
    for (long long a = 1; a <= N; ++a) sum.add(std::exp(-s * fam.rule(a)));
    return sum.value();
}

Potential truncation_potential(const TruncationFamily& fam, int N) {
    if (N < 2) throw Error("truncation_potential: need N >= 2");
    if ((long long)N > fam.N_max) throw Error("truncation_potential: N > N_max");
    Shift s = full_shift(N);
    std::vector<double> values((size_t)N);
    for (int a = 1; a <= N; ++a) values[(size_t)(a - 1)] = fam.rule(a);
    return make_potential(s, 1, values);
}

namespace {

// Partial sums of Z1(f,s) at the grid checkpoints, one pass over a.
std::vector<double> checkpoints(const TruncationFamily& fam, double s,
                                const std::vector<long long>& grid) {
    std::vector<double> out;
    out.reserve(grid.size());
    KahanSum sum;
    long long a = 1;
    for (long long N : grid) {
        for (; a <= N; ++a) sum.add(std::exp(-s * fam.rule(a)));
        out.push_back(sum.value());
    }
    return out;
}

// Divergence heuristic: ratio of the last two tail blocks of the partial sums.
// For zeta-like series with term exponent p the ratio approaches
// (geometric-grid) 2^{1-p}: >= 1 exactly on the divergent side, including the
// boundary itself.
double tail_block_ratio(const TruncationFamily& fam, double s,
                        const std::vector<long long>& grid) {
    std::vector<double> S = checkpoints(fam, s, grid);
    size_t n = S.size();
    double d1 = S[n - 2] - S[n - 3];
    double d2 = S[n - 1] - S[n - 2];
    if (d1 <= 0) return 0.0; // tail already dead to fp precision: converged
    return d2 / d1;
}

} // namespace

CriticalExponent estimate_critical_exponent(const TruncationFamily& fam,
                                            const std::vector<long long>& N_grid) {
    if (N_grid.size() < 3) throw Error("estimate_critical_exponent: need >= 3 grid values");
    for (size_t i = 0; i + 1 < N_grid.size(); ++i)
        if (N_grid[i] >= N_grid[i + 1])
            throw Error("estimate_critical_exponent: grid must be strictly increasing");
    if (N_grid.back() > fam.N_max)
        throw Error("estimate_critical_exponent: grid exceeds N_max");

    CriticalExponent ce;
    auto diverges = [&](double s) {
        double r = tail_block_ratio(fam, s, N_grid);
        ce.probes.emplace_back(s, r);
        return r >= 1.0;
    };

    double s_lo = 1e-3, s_hi = 64.0;
    if (!diverges(s_lo)) {
        // even tiny s gives a summable tail: geometric-like family
        ce.converges_all = true;
        ce.d_hat = 0.0;
        return ce;
    }
    if (diverges(s_hi))
        throw Inconclusive("estimate_critical_exponent: still divergent at s = 64");

    for (int it = 0; it < 60 && (s_hi - s_lo) > 1e-4; ++it) {
        double mid = 0.5 * (s_lo + s_hi);
        if (diverges(mid)) s_lo = mid; else s_hi = mid;
    }
    ce.d_hat = 0.5 * (s_lo + s_hi);
    return ce;
}

} // namespace tc
