#pragma once

// Compensated accumulation.  Window scans sum up to ~1e8 terms; plain double
// accumulation would lose ~1e-8 relative there, which eats directly into the
// 1e-9 identity tolerances.

namespace tc {

struct KahanSum {
    double s = 0.0;
    double c = 0.0; // running compensation

    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    KahanSum& operator+=(double x) { add(x); return *this; }
    double value() const { return s; }
};

} // namespace tc
