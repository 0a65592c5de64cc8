#pragma once

#include <vector>

#include "thermocount/shift.hpp"

// Depth-k locally constant potentials: a real table on admissible k-cylinders.
// Ergodic sums are exact (table lookups), which is the whole point of the
// locally constant restriction.

namespace tc {

struct Potential {
    Shift shift;                  // value copy; shifts are tiny
    int depth = 1;                // k >= 1
    std::vector<double> values;   // by lex rank of admissible k-cylinders
    CylinderIndex index;
    std::vector<double> dense;    // by letter code, quiet-NaN on inadmissible
    double vmin = 0, vmax = 0;

    // w points at k letters
    double value_at(const int* w) const { return dense[std::size_t(index.code(w))]; }
};

// values are indexed by the lexicographic rank of admissible k-cylinders,
// i.e. aligned with cylinders(shift, k).
Potential make_potential(const Shift& s, int depth, const std::vector<double>& values);
Potential constant_potential(const Shift& s, double c);

// a f + b g on the common refined depth (no positivity requirement)
Potential combine(const Potential& f, double a, const Potential& g, double b);
Potential scale(const Potential& f, double a);

// S_n f on the periodic extension of w (n = |w|), Kahan-compensated.
double ergodic_sum(const Potential& f, const Word& w);

// S_n f on the concatenation w . z (preimage of z under sigma^n).
double preimage_ergodic_sum(const Potential& f, const Word& w, const SampleWord& z);

Potential refine_depth(const Potential& f, int k2);

// max |f - g| over cylinders at the common refined depth
double sup_difference(const Potential& f, const Potential& g);

// ---------------------------------------------------------------- pairs ----

enum class Independence { assumed, verified, violated };

const char* to_string(Independence x);

struct PotentialPair {
    Potential f, g;               // same shift, refined to a common depth
    Independence flag = Independence::assumed;
};

// Strict positivity of both tables is enforced here (standing assumption for
// everything downstream of a pair: Bowen roots, curves, counting windows).
PotentialPair make_pair_potentials(const Potential& f, const Potential& g,
                                   Independence declared = Independence::assumed);

// Lattice-dependency heuristic on orbit-sum difference vectors:
//   violated  — differences are rank-deficient or sit on a 1-D lattice in
//               some tested direction (so some a f + b g is arithmetic);
//   verified  — three pairwise-independent difference vectors with pairwise
//               irrational component ratios were found;
//   assumed   — neither test fired.
Independence arithmetic_witness(const PotentialPair& pair, int n_max);

} // namespace tc
