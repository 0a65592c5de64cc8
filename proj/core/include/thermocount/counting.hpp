#pragma once

#include <atomic>
#include <limits>
#include <vector>

#include "thermocount/convex.hpp"
#include "thermocount/manhattan.hpp"
#include "thermocount/potential.hpp"
#include "thermocount/thermo.hpp"

// Brute-force verification engine: window counts over Fix^n and preimage
// sets, growth-rate fits, deviation profiles, the Laplace-Fourier identity,
// the Gibbs upper bound, and the local-estimate predictor.
//
// Periodic words of period n are in bijection with closed n-edge walks on the
// block graph whose states are the admissible (k-1)-letter words: the walk
// starting at the word's own leading block visits it exactly once, and edge
// weights make the walk total equal the wrapped ergodic sum exactly.  Pruning
// uses endpoint-aware min/max remaining-path tables, so pruned counts are
// exact, not approximate.

namespace tc {

// ---------------------------------------------------------------------------
// windows, budgets, counts
// ---------------------------------------------------------------------------

// Open window (t, t+xi) x (m t, m t + xi) on the pair (S_n f, S_n g).
struct WindowSpec {
    double m = 1.0;
    double xi = 0.5;
    double t = 0.0;
};

struct Window {
    double flo = 0, fhi = 0, glo = 0, ghi = 0;
    bool empty() const { return !(flo < fhi) || !(glo < ghi); }
    Window inflated(double ef, double eg) const {
        return {flo - ef, fhi + ef, glo - eg, ghi + eg};
    }
};

inline Window window_of(const WindowSpec& w) {
    return {w.t, w.t + w.xi, w.m * w.t, w.m * w.t + w.xi};
}

struct CountBudget {
    long long max_nodes = 5'000'000'000LL; // per scan/scenario
};

// Running budget shared by the counting calls of one scan.
struct BudgetState {
    long long cap = 5'000'000'000LL;
    long long used = 0;
    bool exceeded = false;
};

struct WindowCount {
    long long count = 0;
    bool exact = true;           // false = budget cut enumeration short (count unknown)
    long long nodes = 0;
    long long boundary_hits = 0; // exact window-boundary sums (excluded, logged)
};

// ---------------------------------------------------------------------------
// the enumeration engine
// ---------------------------------------------------------------------------

struct OrbitCounter {
    Shift shift;
    Potential f, g;       // refined to common depth k >= 2
    int k = 2;            // block depth; states are (k-1)-words
    CylinderIndex states;
    int S = 0, A = 0;

    // dense step tables indexed [state*A + letter]; -1 = inadmissible
    std::vector<int> step;
    std::vector<double> fw, gw;

    // r-edge path bounds, target-major layout: bf_min[r][u*S + v] is the
    // minimal f-weight over r-edge paths v -> u (big sentinel if none)
    std::vector<std::vector<double>> bf_min, bf_max, bg_min, bg_max;
    void ensure_bounds(int r_need);
};

OrbitCounter make_counter(const Shift& s, const PotentialPair& pair);

// #{x in Fix^n : (S_n f, S_n g)(x) inside win}, exact branch-and-bound.
WindowCount count_fix_window(OrbitCounter& oc, const Window& win, int n,
                             BudgetState& budget, int threads = 1);

// #{y in [p], sigma^n y = z_p, window test on (S_n f, S_n g)(y)}
WindowCount count_preimage_window(OrbitCounter& oc, const Window& win,
                                  const Cylinder& p, const SampleWord& z_p, int n,
                                  BudgetState& budget);

// contract-shaped one-shot wrappers
WindowCount count_fix_window(const Shift& s, const PotentialPair& pair,
                             const WindowSpec& spec, int n, const CountBudget& budget = {});
WindowCount count_W(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
                    const Cylinder& p, const SampleWord& z_p, int n,
                    const CountBudget& budget = {});

// independent unpruned oracles (word-level enumeration, no block graph)
long long count_fix_window_unpruned(const Shift& s, const PotentialPair& pair,
                                    const WindowSpec& spec, int n);
long long count_W_unpruned(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
                           const Cylinder& p, const SampleWord& z_p, int n);

// ---------------------------------------------------------------------------
// aggregation over n
// ---------------------------------------------------------------------------

// contributing periods: n in [ceil(t/max f) - 1, floor((t+xi)/min f) + 1]
int n_range_lo(const Potential& f, const WindowSpec& spec);
int n_range_hi(const Potential& f, const WindowSpec& spec);

struct NCell {
    int n = 0;
    long long count = 0;
    bool exact = true;
    long long nodes = 0;
};

struct MCount {
    double M = 0; // sum_n count(n)/n, compensated, ascending n
    std::vector<NCell> per_n;
    bool exact = true;
    long long nodes = 0;
    long long boundary_hits = 0;
};

MCount count_M(OrbitCounter& oc, const WindowSpec& spec, BudgetState& budget, int threads = 1);
MCount count_M(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
               const CountBudget& budget = {});

// ---------------------------------------------------------------------------
// t-scans
// ---------------------------------------------------------------------------

struct ScanRow {
    double t = 0;
    MCount M;
    // per tracked cylinder: counts aligned with M.per_n and their (1/n)-sum
    std::vector<std::vector<long long>> W_n;
    std::vector<double> W_agg;
};

struct CountScan {
    double m = 0, xi = 0;
    std::vector<Cylinder> tracked;
    std::vector<SampleWord> z_p;
    std::vector<ScanRow> rows;   // only budget-complete rows are kept
    bool budget_hit = false;     // true = scan truncated at rows.back().t
    long long total_nodes = 0;
};

CountScan scan_counts(const Shift& s, const PotentialPair& pair, double m, double xi,
                      double t_min, double t_max, double t_step,
                      const std::vector<Cylinder>& tracked,
                      const CountBudget& budget = {}, int threads = 1);

// ---------------------------------------------------------------------------
// fits and profiles
// ---------------------------------------------------------------------------

struct GrowthFit {
    double alpha_hat = 0;        // LS slope of ln M(t) on t
    double stderr_alpha = 0;
    double alpha_corrected = 0;  // LS slope of ln M(t) + (3/2) ln t on t
    double stderr_corrected = 0; // (removes the known t^{-3/2} prefactor bias)
    int points = 0;
    double t_lo = 0, t_hi = 0;
};

// window_t_lo = NaN means "top half of the t range".
GrowthFit fit_growth_rate(const std::vector<double>& t, const std::vector<double>& M,
                          double window_t_lo = std::numeric_limits<double>::quiet_NaN());

struct DeviationProfile {
    std::vector<double> t, near_mass, far_mass; // (1/n)-weighted split by |n/t - t_m| < eps
    double epsilon = 0, t_m = 0;
};

DeviationProfile deviation_profile(const CountScan& scan, double t_m, double epsilon,
                                   double t_min = -1e300);

// far/(near+far) aggregated over `bins` equal t-intervals of the profile
std::vector<double> binned_far_fraction(const DeviationProfile& prof, int bins);

// ---------------------------------------------------------------------------
// structural checks
// ---------------------------------------------------------------------------

struct SandwichReport {
    int k = 0, n = 0;
    double eps_f = 0, eps_g = 0;
    bool exact_path = false; // both depths <= k+1, so the window shift is 0
    long long M_n = 0;
    long long W_lower = 0, W_upper = 0; // sums over all k-cylinders
    bool lower_ok = false, upper_ok = false, equality = false;
    bool exact = true;
};

SandwichReport sandwich_check(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
                              int k, int n, const CountBudget& budget = {});

struct LaplaceFourier {
    double lhs = 0;          // weighted preimage sum  sum_y e^{<z, S_n (f,g)(y)>}
    double rhs = 0;          // transfer-matrix power applied to the indicator of p
    double rel_residual = 0;
};

LaplaceFourier laplace_fourier_check(const Shift& s, const PotentialPair& pair,
                                     const Cylinder& p, const SampleWord& z_p, int n,
                                     const Vec2& z);

struct GibbsBoundReport {
    std::vector<int> n;
    std::vector<double> What, bound, ratio; // ratio = What / bound
    double Q_hat = 0;      // measured Gibbs constant
    double slack = 1;      // e^{(k-1) osc u} continuation allowance (1 for depth 1)
    double mu_p = 0;
    double pressure = 0;
    double max_ratio = 0;  // tightest point of the bound
    bool ok = false;       // all ratios <= 1 + 1e-9
};

GibbsBoundReport gibbs_bound_check(const Shift& s, const PotentialPair& pair,
                                   const Cylinder& p, const SampleWord& z_p, const Vec2& z,
                                   int n_lo, int n_hi);

// ---------------------------------------------------------------------------
// local-estimate predictor
// ---------------------------------------------------------------------------

struct LocalEstimate {
    double m = 0, a = 0, b = 0, H = 0, t_m = 0;
    double Pbar_second = 0; // t_m^3 x' hess(PP*)(x) x at the curve point
    double det_star = 0;    // det hess(PP*)(x) at the curve point
    double C_p = 0;         // h(cylinder of z_p) * nu(p)
    double wf = 0, wg = 0;  // window factors (e^{a xi}-1)/a and (e^{b xi}-1)/b
    // e^{tH} t^{-3/2} (2 pi Pbar")^{-1/2} sqrt(det_star) C_p wf wg
    double value_at(double t) const;
};

LocalEstimate local_estimate_prediction(const PressureSurface& S, const ManhattanCurve& curve,
                                        double m, const Cylinder& p, const SampleWord& z_p,
                                        double xi);

} // namespace tc
