#pragma once

#include <functional>
#include <string>
#include <vector>

#include "thermocount/potential.hpp"

// Truncation families for countable-alphabet studies: a value rule
// a -> S(f,a) on letters a = 1, 2, ... restricted to finite alphabets
// {1..N}, the series Z1(f,s) = sum_a e^{-s S(f,a)}, and a numerical
// estimate of its critical exponent (the divergence boundary in s).

namespace tc {

struct TruncationFamily {
    std::string name;                          // "2log1p", "log1p", "linear", or custom
    std::function<double(long long)> rule;     // a -> S(f,a), defined for a >= 1
    long long N_max = 1LL << 20;
};

// the three named rules: 2*ln(a+1), ln(a+1), a
TruncationFamily named_truncation_family(const std::string& name);

// partial sum  sum_{a=1}^{N} e^{-s S(f,a)}  in increasing a, compensated
double entropy_gap_series(const TruncationFamily& fam, double s, long long N);

// depth-1 potential on the full N-shift with value S(f,a) on letter a
// (letter a corresponds to symbol index a-1)
Potential truncation_potential(const TruncationFamily& fam, int N);

struct CriticalExponent {
    double d_hat = 0;
    bool converges_all = false;  // partial sums Cauchy for every probed s
    // (s, tail-block ratio) probes recorded during the bisection; ratio >= 1
    // is the divergence heuristic
    std::vector<std::pair<double, double>> probes;
};

// Bisection on s of the tail-block growth heuristic over the given partial-sum
// checkpoints (at least 3, strictly increasing).  Throws Inconclusive when the
// heuristic cannot separate convergence from divergence on the probed range.
CriticalExponent estimate_critical_exponent(const TruncationFamily& fam,
                                            const std::vector<long long>& N_grid);

} // namespace tc
