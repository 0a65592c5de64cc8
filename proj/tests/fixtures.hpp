#pragma once

#include <cmath>
#include <vector>

#include "thermocount/counting.hpp"

// Shared fixtures.  The nine-cylinder pair below is the workhorse: a full
// 3-shift with depth-2 strictly positive tables whose entries mix rationals
// with sqrt(2)/sqrt(3) multiples so no integer combination of the two tables
// is arithmetic.  All derived constants were frozen from independent
// prototype runs (power iteration + curve tracing at 1e-13 brackets) and act
// as regression bands, not definitions.

namespace fx {

using namespace tc;

// ---------------------------------------------------------------- shifts ----

inline Shift full2() { return full_shift(2); }
inline Shift full3() { return full_shift(3); }
inline Shift gmean() { return golden_mean_shift(); }

// ------------------------------------------------------------- potentials ----

// depth-2 pair on the full 3-shift, cylinder order 00,01,02,10,11,12,20,21,22
inline PotentialPair std3() {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    Shift s = full3();
    std::vector<double> fv = {1.98, 1.95 + r2 / 5, 2.56,
                              0.66, 0.01 + r2 / 2, 0.64,
                              1.40, 1.46,          0.23 + 0.7 * r2};
    std::vector<double> gv = {0.72 + 0.75 * r3, 1.77, 2.30,
                              0.82, -0.49 + 0.75 * r3, 1.03,
                              0.57, 0.10 + r3 / 2,     0.59};
    return make_pair_potentials(make_potential(s, 2, fv), make_potential(s, 2, gv));
}

// depth-1 pair on the full 2-shift: f = (1, sqrt2), g = (sqrt3, 1).  Affinely
// dependent ((sqrt3-1) f + (sqrt2-1) g is constant), so its pressure surface
// has a flat direction -- useful for exercising the degenerate paths.
inline PotentialPair raw2() {
    Shift s = full2();
    std::vector<double> fv = {1.0, std::sqrt(2.0)};
    std::vector<double> gv = {std::sqrt(3.0), 1.0};
    return make_pair_potentials(make_potential(s, 1, fv), make_potential(s, 1, gv));
}

// proportional pair g = 1.7 f: the rigid case, curve degenerates to a secant
inline PotentialPair rigid3() {
    const double r2 = std::sqrt(2.0);
    Shift s = full3();
    std::vector<double> fv = {1.98, 1.95 + r2 / 5, 2.56,
                              0.66, 0.01 + r2 / 2, 0.64,
                              1.40, 1.46,          0.23 + 0.7 * r2};
    std::vector<double> gv(fv);
    for (double& v : gv) v *= 1.7;
    return make_pair_potentials(make_potential(s, 2, fv), make_potential(s, 2, gv));
}

// ---------------------------------------------------------------- oracles ----

// log_2 of the golden ratio: Bowen root of (ln2, ln4) on the full 2-shift,
// from scalar bisection on 2^{-s} + 4^{-s} = 1
inline constexpr double kLog2Phi = 0.6942419136306174;

// ln of the golden ratio: entropy of the golden-mean shift
inline constexpr double kLnPhi = 0.4812118250596035;

// zeta(2) - 1: limit of sum (a+1)^{-2} = the 2ln(a+1) family at s = 1
inline constexpr double kZeta2Minus1 = 0.6449340668482264;

// ------------------------------------------- frozen std3 regression bands ----
// independently recomputed by the build under test; bands are loose enough to
// absorb summation-order noise but pin 10+ digits

inline constexpr double kStd3DeltaF = 0.8621521559663139;
inline constexpr double kStd3DeltaG = 1.0225391461850264;
inline constexpr double kStd3MStar = 0.8431483128865066;
inline constexpr double kStd3H = 0.8501465304244133;     // at m*
inline constexpr double kStd3A = 0.40538992145216957;    // curve point at m*
inline constexpr double kStd3B = 0.5274951063468607;
inline constexpr double kStd3Tm = 0.8508647480232976;
inline constexpr double kBand = 1e-9;

} // namespace fx
