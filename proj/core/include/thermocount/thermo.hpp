#pragma once

#include <Eigen/Dense>

#include "thermocount/potential.hpp"

// Transfer operators as weighted matrices on k-cylinders, their
// Ruelle-Perron-Frobenius data, Gibbs comparison constants, Bowen roots.

namespace tc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// L(q,p) = e^{u(p)} when the 1-step overlap p -> q is admissible, so that
// (L phi)(q) = sum_{p -> q} e^{u(p)} phi(p) realizes the transfer operator on
// depth-k locally constant test functions.
struct TransferMatrix {
    int k = 1;
    CylinderIndex basis;
    Mat L;
};

TransferMatrix transfer_matrix(const Shift& s, const Potential& u);

struct RpfData {
    double pressure = 0;  // ln(leading eigenvalue)
    Vec h;                // right eigenvector, normalized so <h, nu> = 1
    Vec nu;               // left eigenvector, probability normalization
    Vec mu;               // equilibrium cylinder weights h .* nu
    double gap = 0;       // |lambda_2| / lambda_1 (dense solve); <1 when mixing
    bool has_gap = false;
    int k = 1;
    CylinderIndex basis;
    Mat chain;            // row-stochastic cylinder chain pi[p][q] with
                          // stationary vector mu (used for deep Gibbs weights)
};

// Perron root by power iteration with Collatz-Wielandt bracketing; relative
// bracket width target 1e-13, NonConvergence past 1e5 iterations if the
// bracket is still wider than 1e-12.
double pressure(const Shift& s, const Potential& u);

RpfData rpf_data(const Shift& s, const Potential& u, bool need_gap = true);

// Gibbs comparison constant: max over n <= n_max and admissible n-cylinders p
// of the two-sided ratio between e^{S_n u (z_p)} e^{-nP} and mu(p).
double gibbs_constant(const Shift& s, const Potential& u, const RpfData& rpf, int n_max);

// mu-measure of an arbitrary-depth cylinder from the Markov structure
double cylinder_measure(const RpfData& rpf, const Shift& s, const Cylinder& p);

// unique s with P(-s f) = 0 (f strictly positive); |P| residual < 1e-12
double bowen_root(const Shift& s, const Potential& f);

} // namespace tc
