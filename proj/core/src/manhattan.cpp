#include "thermocount/manhattan.hpp"

#include <algorithm>
#include <cmath>

namespace tc {

// ---------------------------------------------------------------------------
// curve point: root of F(q) = P(-sf - qg) in q
// ---------------------------------------------------------------------------

namespace {

struct QEval {
    double P;      // pressure at (-s, -q)
    double df, dg; // int f dmu, int g dmu  (both > 0)
};

QEval eval_at(const PressureSurface& S, double s, double q) {
    Vec2 z(-s, -q);
    const RpfData& r = S.rpf_at(z);
    Vec2 gr = grad_pressure(S, z);
    return {r.pressure, gr(0), gr(1)};
}

} // namespace

CurvePoint curve_point(const PressureSurface& S, double s) {
    // F(q) = P(-sf - qg) is strictly decreasing in q with slope -int g dmu,
    // so a sign-changing bracket always pins the unique root.
    double lo = 0.0, hi = 0.0;
    QEval e0 = eval_at(S, s, 0.0);
    if (e0.P > 0) {
        hi = 1.0;
        QEval eh = eval_at(S, s, hi);
        int guard = 0;
        while (eh.P > 0) {
            lo = hi;
            hi *= 2;
            eh = eval_at(S, s, hi);
            if (++guard > 200) throw RootBracketFail("curve_point: no sign change for q > 0");
        }
    } else if (e0.P < 0) {
        // extension territory (s beyond delta_f): the root sits at q < 0
        lo = -1.0;
        QEval el = eval_at(S, s, lo);
        int guard = 0;
        while (el.P < 0) {
            hi = lo;
            lo *= 2;
            el = eval_at(S, s, lo);
            if (++guard > 200) throw RootBracketFail("curve_point: no sign change for q < 0");
        }
    }

    // Newton with the analytic derivative dF/dq = -int g dmu, clamped to the
    // bracket; bisection step whenever Newton escapes.
    double q = 0.5 * (lo + hi);
    QEval e = eval_at(S, s, q);
    double residual = std::abs(e.P);
    for (int it = 0; it < 200 && residual > 1e-13; ++it) {
        if (e.P > 0) lo = q; else hi = q;
        double step = e.P / e.dg;       // q_next = q + P/dg  (since dF/dq = -dg)
        double qn = q + step;
        if (!(qn > std::min(lo, hi) && qn < std::max(lo, hi)))
            qn = 0.5 * (lo + hi);
        if (qn == q) break;
        q = qn;
        e = eval_at(S, s, q);
        residual = std::abs(e.P);
    }
    if (residual > 1e-12)
        throw NonConvergence("curve_point: q-root residual " + std::to_string(residual));

    CurvePoint pt;
    pt.s = s;
    pt.q = q;
    pt.grad = Vec2(e.df, e.dg);
    pt.m = e.dg / e.df;
    pt.H = s + pt.m * q;
    pt.t_m = 1.0 / e.df;
    pt.extended = (s < 0.0) || (q < 0.0);
    return pt;
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

ManhattanCurve trace_curve(const PressureSurface& S, int n_samples) {
    if (n_samples < 2) throw Error("trace_curve: need at least 2 samples");

    ManhattanCurve c;
    c.delta_f = bowen_root(S.shift, S.f);
    c.delta_g = bowen_root(S.shift, S.g);

    c.samples.reserve((size_t)n_samples);
    for (int i = 0; i < n_samples; ++i) {
        double s = c.delta_f * (double)i / (double)(n_samples - 1);
        c.samples.push_back(curve_point(S, s));
    }

    // deviation from the secant joining (0, delta_g) and (delta_f, 0)
    double dev = 0;
    for (const CurvePoint& p : c.samples) {
        double secant = c.delta_g * (1.0 - p.s / c.delta_f);
        dev = std::max(dev, std::abs(p.q - secant));
    }
    c.max_secant_dev = dev;
    c.rigid = dev < 1e-9;
    c.m_min = c.samples.front().m;
    c.m_max = c.samples.back().m;
    return c;
}

// ---------------------------------------------------------------------------
// slope inversion / correlation number
// ---------------------------------------------------------------------------

CorrPoint correlation_number(const PressureSurface& S, const ManhattanCurve& c, double m) {
    if (c.rigid) {
        // the curve is a straight line; every point has the same normal slope
        double m0 = c.samples[c.samples.size() / 2].m;
        if (std::abs(m - m0) > 1e-9)
            throw SlopeOutOfRange("correlation_number: rigid curve only attains slope " +
                                  std::to_string(m0));
        double s = 0.5 * c.delta_f;
        CurvePoint p = curve_point(S, s);
        return {p.H, p.s, p.q, p.s, p.m};
    }

    if (!(m > c.m_min && m < c.m_max))
        throw SlopeOutOfRange("correlation_number: slope " + std::to_string(m) +
                              " outside (" + std::to_string(c.m_min) + ", " +
                              std::to_string(c.m_max) + ")");

    // seed the bracket from the traced samples (m is increasing in s)
    double lo = 0.0, hi = c.delta_f;
    for (size_t i = 0; i + 1 < c.samples.size(); ++i) {
        if (c.samples[i].m <= m && m <= c.samples[i + 1].m) {
            lo = c.samples[i].s;
            hi = c.samples[i + 1].s;
            break;
        }
    }

    CurvePoint p = curve_point(S, 0.5 * (lo + hi));
    for (int it = 0; it < 200 && std::abs(p.m - m) > 1e-11; ++it) {
        if (p.m < m) lo = p.s; else hi = p.s;
        double mid = 0.5 * (lo + hi);
        if (mid == p.s) break;
        p = curve_point(S, mid);
    }
    if (std::abs(p.m - m) > 1e-8)
        throw NonConvergence("correlation_number: slope residual " +
                             std::to_string(std::abs(p.m - m)));
    return {p.s + m * p.q, p.s, p.q, p.s, p.m};
}

// ---------------------------------------------------------------------------
// Bishop-Steger entropy and the inequality scan
// ---------------------------------------------------------------------------

double bishop_steger(const PressureSurface& S, double alpha, double beta) {
    if (alpha < 0 || beta < 0 || alpha + beta == 0)
        throw Error("bishop_steger: need alpha, beta >= 0, not both zero");
    Potential comb = combine(S.f, alpha, S.g, beta);
    return bowen_root(S.shift, comb);
}

BsScanReport bs_inequality_scan(const PressureSurface& S, const ManhattanCurve& c,
                                double alpha, double beta) {
    BsScanReport rep;
    rep.h_bs = bishop_steger(S, alpha, beta);
    rep.degenerate = c.rigid;

    auto ratio_of = [&](const CurvePoint& p) {
        return p.H / (alpha + p.m * beta);
    };

    const CurvePoint* best = &c.samples.front();
    double best_ratio = ratio_of(*best);
    for (const CurvePoint& p : c.samples) {
        double r = ratio_of(p);
        if (r > best_ratio) { best_ratio = r; best = &p; }
    }
    rep.max_ratio = best_ratio;
    rep.argmax_m = best->m;
    rep.argmax_ab = (best->q != 0) ? best->s / best->q : std::numeric_limits<double>::infinity();

    // Refine: the touching point solves beta*s - alpha*q(s) = 0 (increasing in
    // s since q decreases), provided both coefficients are active.
    if (!c.rigid && alpha > 0 && beta > 0) {
        double lo = 0.0, hi = c.delta_f;
        CurvePoint p = curve_point(S, 0.5 * (lo + hi));
        for (int it = 0; it < 100; ++it) {
            double gval = beta * p.s - alpha * p.q;
            if (gval < 0) lo = p.s; else hi = p.s;
            double mid = 0.5 * (lo + hi);
            if (mid == p.s) break;
            p = curve_point(S, mid);
        }
        double r = ratio_of(p);
        if (r > rep.max_ratio) {
            rep.max_ratio = r;
            rep.argmax_m = p.m;
            rep.argmax_ab = (p.q != 0) ? p.s / p.q : std::numeric_limits<double>::infinity();
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// swap identity and rigidity gap
// ---------------------------------------------------------------------------

double swap_residual(const PressureSurface& S_fg, const ManhattanCurve& c_fg,
                     const PressureSurface& S_gf, const ManhattanCurve& c_gf, double m) {
    double H1 = correlation_number(S_fg, c_fg, m).H;
    double H2 = correlation_number(S_gf, c_gf, 1.0 / m).H;
    return std::abs(H1 - m * H2);
}

RigidityReport rigidity_gap(const PressureSurface& S, const ManhattanCurve& c) {
    RigidityReport rep;
    rep.m_star = c.delta_f / c.delta_g;
    rep.max_secant_dev = c.max_secant_dev;
    rep.rigid = c.rigid;
    if (c.rigid) {
        rep.gap = 0.0;
        return rep;
    }
    CorrPoint cp = correlation_number(S, c, rep.m_star);
    rep.gap = c.delta_f - cp.H;
    return rep;
}

} // namespace tc
