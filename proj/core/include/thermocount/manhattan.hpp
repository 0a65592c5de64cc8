#pragma once

#include "thermocount/convex.hpp"

// The Manhattan curve {(a,b) in the positive quadrant : P(-af-bg) = 0},
// normal slopes, correlation numbers H(m) = a_m + m b_m, Bishop-Steger
// entropies, the rigidity gap, and the swap identity.

namespace tc {

struct CurvePoint {
    double s = 0;       // a_m
    double q = 0;       // b_m, the root of P(-sf-qg) = 0 at this s
    double m = 0;       // normal slope  int g dmu / int f dmu  ( = -1/q'(s) )
    double H = 0;       // s + m q
    double t_m = 0;     // 1 / int f dmu
    Vec2 grad;          // (int f dmu, int g dmu) = x_m
    bool extended = false; // s outside [0, delta_f]
};

struct ManhattanCurve {
    std::vector<CurvePoint> samples; // uniform s-grid over [0, delta_f]
    double delta_f = 0, delta_g = 0;
    bool rigid = false;          // curve coincides with the secant line
    double max_secant_dev = 0;   // max |q(s) - secant| over samples
    double m_min = 0, m_max = 0; // slopes at s = 0 and s = delta_f
};

// Solve the defining equation at parameter s (works slightly outside
// [0, delta_f] too; the sample is then flagged `extended`).
CurvePoint curve_point(const PressureSurface& S, double s);

ManhattanCurve trace_curve(const PressureSurface& S, int n_samples);

struct CorrPoint {
    double H = 0, a = 0, b = 0, s = 0, m = 0;
};

// Invert the (strictly increasing) slope map m(s) and return the correlation
// number; throws SlopeOutOfRange outside the open slope interval.  On a rigid
// curve only the single degenerate slope is admissible.
CorrPoint correlation_number(const PressureSurface& S, const ManhattanCurve& c, double m);

// Bowen root of alpha f + beta g
double bishop_steger(const PressureSurface& S, double alpha, double beta);

struct BsScanReport {
    double h_bs = 0;
    double max_ratio = 0;   // max over sampled m of H(m) / (alpha + m beta)
    double argmax_m = 0;
    double argmax_ab = 0;   // a_m / b_m at the argmax
    bool degenerate = false;
};
BsScanReport bs_inequality_scan(const PressureSurface& S, const ManhattanCurve& c,
                                double alpha, double beta);

// |H_{f,g}(m) - m * H_{g,f}(1/m)|
double swap_residual(const PressureSurface& S_fg, const ManhattanCurve& c_fg,
                     const PressureSurface& S_gf, const ManhattanCurve& c_gf, double m);

struct RigidityReport {
    double m_star = 0;
    double gap = 0;          // delta_f - H(m*)  (>= 0; = 0 iff rigid)
    bool rigid = false;
    double max_secant_dev = 0;
};
RigidityReport rigidity_gap(const PressureSurface& S, const ManhattanCurve& c);

} // namespace tc
