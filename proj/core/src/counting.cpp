#include "thermocount/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "thermocount/kahan.hpp"

namespace tc {

namespace {
constexpr double KINF = 1e300; // path-bound sentinel; survives a few additions
}

// ---------------------------------------------------------------------------
// engine construction
// ---------------------------------------------------------------------------

OrbitCounter make_counter(const Shift& s, const PotentialPair& pair) {
    OrbitCounter oc;
    oc.shift = s;
    int k = std::max({2, pair.f.depth, pair.g.depth});
    oc.k = k;
    oc.f = refine_depth(pair.f, k);
    oc.g = refine_depth(pair.g, k);
    oc.states = make_cylinder_index(s, k - 1);
    oc.S = (int)oc.states.list.size();
    oc.A = s.A;

    oc.step.assign((size_t)oc.S * oc.A, -1);
    oc.fw.assign((size_t)oc.S * oc.A, 0.0);
    oc.gw.assign((size_t)oc.S * oc.A, 0.0);

    std::vector<int> kword((size_t)k);
    for (int v = 0; v < oc.S; ++v) {
        const Word& w = oc.states.list[(size_t)v].prefix;
        std::copy(w.begin(), w.end(), kword.begin());
        for (int c = 0; c < oc.A; ++c) {
            if (!s.edge(w[(size_t)(k - 2)], c)) continue;
            kword[(size_t)(k - 1)] = c;
            size_t e = (size_t)v * oc.A + c;
            oc.step[e] = oc.states.rank_of(kword.data() + 1);
            oc.fw[e] = oc.f.value_at(kword.data());
            oc.gw[e] = oc.g.value_at(kword.data());
        }
    }
    return oc;
}

void OrbitCounter::ensure_bounds(int r_need) {
    const size_t SS = (size_t)S * S;
    if (bf_min.empty()) {
        std::vector<double> mn(SS, KINF), mx(SS, -KINF);
        for (int u = 0; u < S; ++u) mn[(size_t)u * S + u] = mx[(size_t)u * S + u] = 0.0;
        bf_min.push_back(mn);
        bf_max.push_back(mx);
        bg_min.push_back(mn);
        bg_max.push_back(mx);
    }
    for (int r = (int)bf_min.size() - 1; r < r_need; ++r) {
        std::vector<double> nfmin(SS, KINF), nfmax(SS, -KINF), ngmin(SS, KINF), ngmax(SS, -KINF);
        const double* pfmin = bf_min[(size_t)r].data();
        const double* pfmax = bf_max[(size_t)r].data();
        const double* pgmin = bg_min[(size_t)r].data();
        const double* pgmax = bg_max[(size_t)r].data();
        for (int v = 0; v < S; ++v) {
            for (int c = 0; c < A; ++c) {
                int w = step[(size_t)v * A + c];
                if (w < 0) continue;
                double ef = fw[(size_t)v * A + c];
                double eg = gw[(size_t)v * A + c];
                for (int u = 0; u < S; ++u) {
                    size_t iu = (size_t)u * S;
                    nfmin[iu + v] = std::min(nfmin[iu + v], ef + pfmin[iu + w]);
                    nfmax[iu + v] = std::max(nfmax[iu + v], ef + pfmax[iu + w]);
                    ngmin[iu + v] = std::min(ngmin[iu + v], eg + pgmin[iu + w]);
                    ngmax[iu + v] = std::max(ngmax[iu + v], eg + pgmax[iu + w]);
                }
            }
        }
        bf_min.push_back(std::move(nfmin));
        bf_max.push_back(std::move(nfmax));
        bg_min.push_back(std::move(ngmin));
        bg_max.push_back(std::move(ngmax));
    }
}

// ---------------------------------------------------------------------------
// closed-walk enumeration (Fix^n)
// ---------------------------------------------------------------------------

namespace {

struct DfsCtx {
    const OrbitCounter* oc = nullptr;
    Window win;
    int n = 0, s0 = 0;

    long long node_cap = 0;
    long long nodes = 0;
    bool exceeded = false;
    std::atomic<bool>* stop = nullptr;

    long long count = 0, boundary = 0;

    // Pruning is strict (>, <), so sums landing exactly on a window edge
    // reach the leaf, are excluded by the open-window test, and get logged.
    void run(int v, int r, double F, double G) {
        if (exceeded || nodes > node_cap ||
            (stop && stop->load(std::memory_order_relaxed))) {
            exceeded = true;
            return;
        }
        const OrbitCounter& o = *oc;
        const int rem = n - r - 1; // edges left after the one taken now
        const size_t row = (size_t)s0 * o.S;
        const double* fmin = o.bf_min[(size_t)rem].data() + row;
        const double* fmax = o.bf_max[(size_t)rem].data() + row;
        const double* gmin = o.bg_min[(size_t)rem].data() + row;
        const double* gmax = o.bg_max[(size_t)rem].data() + row;
        const size_t base = (size_t)v * o.A;
        for (int c = 0; c < o.A; ++c) {
            const int w = o.step[base + c];
            if (w < 0) continue;
            ++nodes;
            const double Fn = F + o.fw[base + c];
            const double Gn = G + o.gw[base + c];
            if (rem == 0) {
                if (w != s0) continue;
                if (Fn > win.flo && Fn < win.fhi && Gn > win.glo && Gn < win.ghi) {
                    ++count;
                } else if (Fn >= win.flo && Fn <= win.fhi && Gn >= win.glo && Gn <= win.ghi) {
                    ++boundary;
                }
                continue;
            }
            if (Fn + fmin[w] > win.fhi || Fn + fmax[w] < win.flo) continue;
            if (Gn + gmin[w] > win.ghi || Gn + gmax[w] < win.glo) continue;
            run(w, r + 1, Fn, Gn);
        }
    }
};

bool root_admits(const OrbitCounter& oc, const Window& win, int n, int s0) {
    size_t i = (size_t)s0 * oc.S + s0;
    return !(oc.bf_min[(size_t)n][i] > win.fhi || oc.bf_max[(size_t)n][i] < win.flo ||
             oc.bg_min[(size_t)n][i] > win.ghi || oc.bg_max[(size_t)n][i] < win.glo);
}

} // namespace

WindowCount count_fix_window(OrbitCounter& oc, const Window& win, int n,
                             BudgetState& budget, int threads) {
    if (n < 1) throw Error("count_fix_window: need n >= 1");
    WindowCount out;
    if (win.empty()) return out;
    if (budget.exceeded) {
        out.exact = false;
        return out;
    }
    oc.ensure_bounds(n);
    const long long allowance = budget.cap - budget.used;

    if (threads <= 1 || oc.S == 1) {
        DfsCtx ctx;
        ctx.oc = &oc;
        ctx.win = win;
        ctx.n = n;
        ctx.node_cap = allowance;
        for (int s0 = 0; s0 < oc.S && !ctx.exceeded; ++s0) {
            if (!root_admits(oc, win, n, s0)) continue;
            ctx.s0 = s0;
            ctx.run(s0, 0, 0.0, 0.0);
        }
        out.count = ctx.count;
        out.nodes = ctx.nodes;
        out.boundary_hits = ctx.boundary;
        out.exact = !ctx.exceeded;
        budget.used += ctx.nodes;
        if (ctx.exceeded) budget.exceeded = true;
        return out;
    }

    // Start states are processed in disjoint stripes; exact integer counts
    // merge order-independently.  The budget outcome is deterministic at the
    // call granularity: a call either completes (identical totals) or is
    // discarded as inexact.
    std::atomic<bool> stop{false};
    std::atomic<long long> shared_nodes{0};
    std::vector<DfsCtx> ctxs((size_t)threads);
    std::vector<std::thread> pool;
    pool.reserve((size_t)threads);
    for (int j = 0; j < threads; ++j) {
        DfsCtx& ctx = ctxs[(size_t)j];
        ctx.oc = &oc;
        ctx.win = win;
        ctx.n = n;
        ctx.node_cap = std::numeric_limits<long long>::max();
        ctx.stop = &stop;
        pool.emplace_back([&oc, &win, n, j, threads, allowance, &stop, &shared_nodes, &ctx] {
            long long flushed = 0;
            for (int s0 = j; s0 < oc.S; s0 += threads) {
                if (stop.load(std::memory_order_relaxed)) {
                    ctx.exceeded = true;
                    break;
                }
                if (!root_admits(oc, win, n, s0)) continue;
                ctx.s0 = s0;
                ctx.run(s0, 0, 0.0, 0.0);
                long long delta = ctx.nodes - flushed;
                flushed = ctx.nodes;
                if (shared_nodes.fetch_add(delta) + delta > allowance) {
                    stop.store(true);
                    ctx.exceeded = true;
                    break;
                }
                if (ctx.exceeded) break;
            }
            shared_nodes.fetch_add(ctx.nodes - flushed);
        });
    }
    for (auto& th : pool) th.join();
    for (const DfsCtx& ctx : ctxs) {
        out.count += ctx.count;
        out.boundary_hits += ctx.boundary;
        out.nodes += ctx.nodes;
        if (ctx.exceeded) out.exact = false;
    }
    budget.used += out.nodes;
    if (!out.exact) budget.exceeded = true;
    return out;
}

// ---------------------------------------------------------------------------
// preimage enumeration (W counts)
// ---------------------------------------------------------------------------

namespace {

struct PreDfs {
    const OrbitCounter* oc = nullptr;
    Window win;
    int n = 0, sz = 0; // sz = state of the target word's leading block
    const Cylinder* p = nullptr;
    const SampleWord* z = nullptr;

    long long node_cap = 0;
    long long nodes = 0;
    bool exceeded = false;
    long long count = 0, boundary = 0;

    // letter at position j of y = w_0..w_{n-1} z: pinned by p at the front
    // and by z from position n on
    int forced(int j) const {
        if (j < (int)p->prefix.size()) return p->prefix[(size_t)j];
        if (j >= n) return z->letter((size_t)(j - n));
        return -1;
    }

    void run(int v, int r, double F, double G) {
        if (exceeded || nodes > node_cap) {
            exceeded = true;
            return;
        }
        const OrbitCounter& o = *oc;
        const int rem = n - r - 1;
        const size_t row = (size_t)sz * o.S;
        const double* fmin = o.bf_min[(size_t)rem].data() + row;
        const double* fmax = o.bf_max[(size_t)rem].data() + row;
        const double* gmin = o.bg_min[(size_t)rem].data() + row;
        const double* gmax = o.bg_max[(size_t)rem].data() + row;
        const size_t base = (size_t)v * o.A;
        const int pin = forced(o.k - 1 + r); // position consumed by this edge
        const int c_lo = (pin >= 0) ? pin : 0;
        const int c_hi = (pin >= 0) ? pin + 1 : o.A;
        for (int c = c_lo; c < c_hi; ++c) {
            const int w = o.step[base + c];
            if (w < 0) continue;
            ++nodes;
            const double Fn = F + o.fw[base + c];
            const double Gn = G + o.gw[base + c];
            if (rem == 0) {
                if (w != sz) continue; // cannot happen: tail letters are pinned
                if (Fn > win.flo && Fn < win.fhi && Gn > win.glo && Gn < win.ghi) {
                    ++count;
                } else if (Fn >= win.flo && Fn <= win.fhi && Gn >= win.glo && Gn <= win.ghi) {
                    ++boundary;
                }
                continue;
            }
            if (Fn + fmin[w] > win.fhi || Fn + fmax[w] < win.flo) continue;
            if (Gn + gmin[w] > win.ghi || Gn + gmax[w] < win.glo) continue;
            run(w, r + 1, Fn, Gn);
        }
    }

    // choose the k-1 letters of the leading block (positions 0..k-2), then
    // hand over to the edge walk
    void head(Word& buf, int j) {
        if (exceeded) return;
        const OrbitCounter& o = *oc;
        if (j == o.k - 1) {
            int v0 = o.states.rank_of(buf.data());
            if (v0 < 0) return;
            size_t i = (size_t)sz * o.S + v0;
            if (o.bf_min[(size_t)n][i] > win.fhi || o.bf_max[(size_t)n][i] < win.flo ||
                o.bg_min[(size_t)n][i] > win.ghi || o.bg_max[(size_t)n][i] < win.glo)
                return;
            run(v0, 0, 0.0, 0.0);
            return;
        }
        const int pin = forced(j);
        const int c_lo = (pin >= 0) ? pin : 0;
        const int c_hi = (pin >= 0) ? pin + 1 : oc->A;
        for (int c = c_lo; c < c_hi; ++c) {
            if (j > 0 && !oc->shift.edge(buf[(size_t)j - 1], c)) continue;
            ++nodes;
            buf[(size_t)j] = c;
            head(buf, j + 1);
        }
    }
};

} // namespace

WindowCount count_preimage_window(OrbitCounter& oc, const Window& win, const Cylinder& p,
                                  const SampleWord& z_p, int n, BudgetState& budget) {
    if (p.depth() < 1) throw Error("count_preimage_window: cylinder must have depth >= 1");
    if (n < p.depth()) throw Error("count_preimage_window: need n >= depth(p)");
    WindowCount out;
    if (win.empty()) return out;
    if (budget.exceeded) {
        out.exact = false;
        return out;
    }
    oc.ensure_bounds(n);

    PreDfs ctx;
    ctx.oc = &oc;
    ctx.win = win;
    ctx.n = n;
    ctx.p = &p;
    ctx.z = &z_p;
    ctx.node_cap = budget.cap - budget.used;

    std::vector<int> zh((size_t)(oc.k - 1));
    for (int i = 0; i < oc.k - 1; ++i) zh[(size_t)i] = z_p.letter((size_t)i);
    ctx.sz = oc.states.rank_of(zh.data());
    if (ctx.sz < 0) throw Error("count_preimage_window: sample word has inadmissible head");

    Word buf((size_t)(oc.k - 1), 0);
    ctx.head(buf, 0);

    out.count = ctx.count;
    out.nodes = ctx.nodes;
    out.boundary_hits = ctx.boundary;
    out.exact = !ctx.exceeded;
    budget.used += ctx.nodes;
    if (ctx.exceeded) budget.exceeded = true;
    return out;
}

// ---------------------------------------------------------------------------
// one-shot wrappers and unpruned oracles
// ---------------------------------------------------------------------------

WindowCount count_fix_window(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
                             int n, const CountBudget& budget) {
    if (!(spec.xi > 0)) throw Error("count_fix_window: window width must be positive");
    OrbitCounter oc = make_counter(s, pair);
    BudgetState bud{budget.max_nodes, 0, false};
    return count_fix_window(oc, window_of(spec), n, bud);
}

WindowCount count_W(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
                    const Cylinder& p, const SampleWord& z_p, int n, const CountBudget& budget) {
    if (!(spec.xi > 0)) throw Error("count_W: window width must be positive");
    OrbitCounter oc = make_counter(s, pair);
    BudgetState bud{budget.max_nodes, 0, false};
    return count_preimage_window(oc, window_of(spec), p, z_p, n, bud);
}

long long count_fix_window_unpruned(const Shift& s, const PotentialPair& pair,
                                    const WindowSpec& spec, int n) {
    const Window win = window_of(spec);
    long long cnt = 0;
    for_each_fix(s, n, [&](const Word& w) {
        double F = ergodic_sum(pair.f, w);
        double G = ergodic_sum(pair.g, w);
        if (F > win.flo && F < win.fhi && G > win.glo && G < win.ghi) ++cnt;
    });
    return cnt;
}

long long count_W_unpruned(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
                           const Cylinder& p, const SampleWord& z_p, int n) {
    const Window win = window_of(spec);
    long long cnt = 0;
    for_each_preimage(s, z_p, n, p, [&](const Word& w) {
        double F = preimage_ergodic_sum(pair.f, w, z_p);
        double G = preimage_ergodic_sum(pair.g, w, z_p);
        if (F > win.flo && F < win.fhi && G > win.glo && G < win.ghi) ++cnt;
    });
    return cnt;
}

// ---------------------------------------------------------------------------
// aggregation over n and t
// ---------------------------------------------------------------------------

int n_range_lo(const Potential& f, const WindowSpec& spec) {
    return std::max(1, (int)std::ceil(spec.t / f.vmax) - 1);
}

int n_range_hi(const Potential& f, const WindowSpec& spec) {
    return (int)std::floor((spec.t + spec.xi) / f.vmin) + 1;
}

MCount count_M(OrbitCounter& oc, const WindowSpec& spec, BudgetState& budget, int threads) {
    if (!(spec.xi > 0)) throw Error("count_M: window width must be positive");
    MCount out;
    const Window win = window_of(spec);
    const int lo = n_range_lo(oc.f, spec), hi = n_range_hi(oc.f, spec);
    KahanSum acc;
    for (int n = lo; n <= hi; ++n) {
        WindowCount wc = count_fix_window(oc, win, n, budget, threads);
        out.per_n.push_back({n, wc.count, wc.exact, wc.nodes});
        out.nodes += wc.nodes;
        out.boundary_hits += wc.boundary_hits;
        if (!wc.exact) {
            out.exact = false;
            break;
        }
        acc.add((double)wc.count / n);
    }
    out.M = acc.value();
    return out;
}

MCount count_M(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
               const CountBudget& budget) {
    OrbitCounter oc = make_counter(s, pair);
    BudgetState bud{budget.max_nodes, 0, false};
    return count_M(oc, spec, bud);
}

CountScan scan_counts(const Shift& s, const PotentialPair& pair, double m, double xi,
                      double t_min, double t_max, double t_step,
                      const std::vector<Cylinder>& tracked, const CountBudget& budget,
                      int threads) {
    if (!(t_step > 0)) throw Error("scan_counts: need t_step > 0");
    OrbitCounter oc = make_counter(s, pair);
    BudgetState bud{budget.max_nodes, 0, false};

    CountScan scan;
    scan.m = m;
    scan.xi = xi;
    scan.tracked = tracked;
    for (const Cylinder& p : tracked) scan.z_p.push_back(pick_sample_word(s, p));

    const int nt = (int)std::floor((t_max - t_min) / t_step + 1e-9) + 1;
    for (int i = 0; i < nt; ++i) {
        const double t = t_min + i * t_step;
        WindowSpec spec{m, xi, t};
        ScanRow row;
        row.t = t;
        row.M = count_M(oc, spec, bud, threads);
        bool ok = row.M.exact;

        const Window win = window_of(spec);
        row.W_n.resize(tracked.size());
        row.W_agg.assign(tracked.size(), 0.0);
        for (size_t ci = 0; ci < tracked.size() && ok; ++ci) {
            KahanSum agg;
            for (const NCell& cell : row.M.per_n) {
                if (cell.n < tracked[ci].depth()) {
                    row.W_n[ci].push_back(0);
                    continue;
                }
                WindowCount wc =
                    count_preimage_window(oc, win, tracked[ci], scan.z_p[ci], cell.n, bud);
                row.W_n[ci].push_back(wc.count);
                if (!wc.exact) {
                    ok = false;
                    break;
                }
                agg.add((double)wc.count / cell.n);
            }
            row.W_agg[ci] = agg.value();
        }

        if (!ok) {
            // keep only budget-complete rows so output is reproducible
            scan.budget_hit = true;
            break;
        }
        scan.rows.push_back(std::move(row));
    }
    scan.total_nodes = bud.used;
    return scan;
}

// ---------------------------------------------------------------------------
// growth fit
// ---------------------------------------------------------------------------

namespace {

struct LsFit {
    double slope = 0, se = 0;
};

LsFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= (double)n;
    my /= (double)n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LsFit fit;
    fit.slope = sxy / sxx;
    double icept = my - fit.slope * mx;
    double ssr = 0;
    for (size_t i = 0; i < n; ++i) {
        double r = y[i] - (icept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.se = std::sqrt(ssr / ((double)n - 2.0) / sxx);
    return fit;
}

} // namespace

GrowthFit fit_growth_rate(const std::vector<double>& t, const std::vector<double>& M,
                          double window_t_lo) {
    if (t.size() != M.size()) throw Error("fit_growth_rate: length mismatch");
    double lo = window_t_lo;
    if (std::isnan(lo)) {
        double tmin = 1e300, tmax = -1e300;
        for (double v : t) {
            tmin = std::min(tmin, v);
            tmax = std::max(tmax, v);
        }
        lo = tmin + 0.5 * (tmax - tmin); // top half of the scan
    }
    std::vector<double> xs, ys, yc;
    for (size_t i = 0; i < t.size(); ++i) {
        if (t[i] < lo || !(M[i] > 0)) continue;
        xs.push_back(t[i]);
        ys.push_back(std::log(M[i]));
        yc.push_back(std::log(M[i]) + 1.5 * std::log(t[i]));
    }
    if (xs.size() < 5)
        throw InsufficientData("fit_growth_rate: need >= 5 positive counts in the window");
    GrowthFit out;
    LsFit raw = least_squares(xs, ys);
    LsFit cor = least_squares(xs, yc);
    out.alpha_hat = raw.slope;
    out.stderr_alpha = raw.se;
    out.alpha_corrected = cor.slope;
    out.stderr_corrected = cor.se;
    out.points = (int)xs.size();
    out.t_lo = xs.front();
    out.t_hi = xs.back();
    return out;
}

// ---------------------------------------------------------------------------
// deviation profile
// ---------------------------------------------------------------------------

DeviationProfile deviation_profile(const CountScan& scan, double t_m, double epsilon,
                                   double t_min) {
    DeviationProfile prof;
    prof.epsilon = epsilon;
    prof.t_m = t_m;
    for (const ScanRow& row : scan.rows) {
        if (row.t < t_min) continue;
        KahanSum near_acc, far_acc;
        for (const NCell& cell : row.M.per_n) {
            double mass = (double)cell.count / cell.n;
            if (std::abs(cell.n / row.t - t_m) < epsilon)
                near_acc.add(mass);
            else
                far_acc.add(mass);
        }
        prof.t.push_back(row.t);
        prof.near_mass.push_back(near_acc.value());
        prof.far_mass.push_back(far_acc.value());
    }
    return prof;
}

std::vector<double> binned_far_fraction(const DeviationProfile& prof, int bins) {
    if (bins < 1 || prof.t.empty()) throw Error("binned_far_fraction: empty profile");
    const double t0 = prof.t.front(), t1 = prof.t.back();
    std::vector<double> near_b((size_t)bins, 0.0), far_b((size_t)bins, 0.0);
    for (size_t i = 0; i < prof.t.size(); ++i) {
        int b = (t1 > t0) ? (int)((prof.t[i] - t0) / (t1 - t0) * bins) : 0;
        b = std::clamp(b, 0, bins - 1);
        near_b[(size_t)b] += prof.near_mass[i];
        far_b[(size_t)b] += prof.far_mass[i];
    }
    std::vector<double> frac((size_t)bins, 0.0);
    for (int b = 0; b < bins; ++b) {
        double tot = near_b[(size_t)b] + far_b[(size_t)b];
        frac[(size_t)b] = tot > 0 ? far_b[(size_t)b] / tot : std::numeric_limits<double>::quiet_NaN();
    }
    return frac;
}

// ---------------------------------------------------------------------------
// sandwich between Fix^n-window and preimage-window counts
// ---------------------------------------------------------------------------

SandwichReport sandwich_check(const Shift& s, const PotentialPair& pair, const WindowSpec& spec,
                              int k, int n, const CountBudget& budget) {
    if (k < 1) throw Error("sandwich_check: need k >= 1");
    if (n < k) throw Error("sandwich_check: need n >= k");
    SandwichReport rep;
    rep.k = k;
    rep.n = n;

    // A periodic word and its preimage twin differ only in letters past
    // position n; a depth-d term can straddle that point only when d >= k+2
    // (the sample word repeats the cylinder's k letters).  Below that the
    // window shift is exactly zero.
    rep.eps_f =
        (pair.f.depth <= k + 1) ? 0.0 : (pair.f.depth - 1) * (pair.f.vmax - pair.f.vmin);
    rep.eps_g =
        (pair.g.depth <= k + 1) ? 0.0 : (pair.g.depth - 1) * (pair.g.vmax - pair.g.vmin);
    rep.exact_path = rep.eps_f == 0.0 && rep.eps_g == 0.0;

    OrbitCounter oc = make_counter(s, pair);
    BudgetState bud{budget.max_nodes, 0, false};
    const Window base = window_of(spec);

    WindowCount m = count_fix_window(oc, base, n, bud);
    rep.M_n = m.count;
    rep.exact = m.exact;

    for (const Cylinder& p : cylinders(s, k)) {
        SampleWord z = pick_sample_word(s, p);
        WindowCount wl =
            count_preimage_window(oc, base.inflated(-rep.eps_f, -rep.eps_g), p, z, n, bud);
        WindowCount wu =
            count_preimage_window(oc, base.inflated(rep.eps_f, rep.eps_g), p, z, n, bud);
        rep.W_lower += wl.count;
        rep.W_upper += wu.count;
        rep.exact = rep.exact && wl.exact && wu.exact;
    }

    rep.lower_ok = rep.W_lower <= rep.M_n;
    rep.upper_ok = rep.M_n <= rep.W_upper;
    rep.equality = rep.exact_path && rep.W_lower == rep.M_n && rep.W_upper == rep.M_n;
    return rep;
}

// ---------------------------------------------------------------------------
// Laplace-Fourier identity
// ---------------------------------------------------------------------------

LaplaceFourier laplace_fourier_check(const Shift& s, const PotentialPair& pair,
                                     const Cylinder& p, const SampleWord& z_p, int n,
                                     const Vec2& z) {
    if (n > 20) throw Error("laplace_fourier_check: n too large for exhaustive enumeration");

    KahanSum lhs;
    for_each_preimage(s, z_p, n, p, [&](const Word& w) {
        double sf = preimage_ergodic_sum(pair.f, w, z_p);
        double sg = preimage_ergodic_sum(pair.g, w, z_p);
        lhs.add(std::exp(z(0) * sf + z(1) * sg));
    });

    Potential u = combine(pair.f, z(0), pair.g, z(1));
    const int kk = std::max(u.depth, p.depth());
    Potential uk = refine_depth(u, kk);
    TransferMatrix tm = transfer_matrix(s, uk);

    Vec v = Vec::Zero((Eigen::Index)tm.basis.list.size());
    for (size_t i = 0; i < tm.basis.list.size(); ++i) {
        const Word& w = tm.basis.list[i].prefix;
        bool in_p = true;
        for (int j = 0; j < p.depth(); ++j)
            if (w[(size_t)j] != p.prefix[(size_t)j]) {
                in_p = false;
                break;
            }
        if (in_p) v((Eigen::Index)i) = 1.0;
    }
    for (int step = 0; step < n; ++step) v = tm.L * v;

    std::vector<int> zh((size_t)kk);
    for (int i = 0; i < kk; ++i) zh[(size_t)i] = z_p.letter((size_t)i);
    int r = tm.basis.rank_of(zh.data());
    if (r < 0) throw Error("laplace_fourier_check: sample word head inadmissible");

    LaplaceFourier out;
    out.lhs = lhs.value();
    out.rhs = v(r);
    out.rel_residual =
        std::abs(out.lhs - out.rhs) / std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-300});
    return out;
}

// ---------------------------------------------------------------------------
// Gibbs upper bound on weighted preimage sums
// ---------------------------------------------------------------------------

GibbsBoundReport gibbs_bound_check(const Shift& s, const PotentialPair& pair,
                                   const Cylinder& p, const SampleWord& z_p, const Vec2& z,
                                   int n_lo, int n_hi) {
    if (n_lo < p.depth() || n_hi < n_lo) throw Error("gibbs_bound_check: bad n range");
    if (n_hi > 20) throw Error("gibbs_bound_check: n too large for exhaustive enumeration");

    Potential u = combine(pair.f, z(0), pair.g, z(1));
    RpfData rpf = rpf_data(s, u, false);

    GibbsBoundReport rep;
    rep.pressure = rpf.pressure;
    rep.Q_hat = gibbs_constant(s, u, rpf, std::min(8, n_hi));
    // Sample-word Gibbs ratios see one point per cylinder; a preimage's tail
    // continuation can move a depth-k sum by up to (k-1) osc(u).
    rep.slack = u.depth >= 2 ? std::exp((u.depth - 1) * (u.vmax - u.vmin)) : 1.0;
    rep.mu_p = cylinder_measure(rpf, s, p);

    for (int n = n_lo; n <= n_hi; ++n) {
        KahanSum what;
        for_each_preimage(s, z_p, n, p, [&](const Word& w) {
            what.add(std::exp(preimage_ergodic_sum(u, w, z_p)));
        });
        double W = what.value();
        double bound = rep.Q_hat * rep.slack * rep.mu_p * std::exp(n * rpf.pressure);
        rep.n.push_back(n);
        rep.What.push_back(W);
        rep.bound.push_back(bound);
        rep.ratio.push_back(W / bound);
        rep.max_ratio = std::max(rep.max_ratio, W / bound);
    }
    rep.ok = rep.max_ratio <= 1.0 + 1e-9;
    return rep;
}

// ---------------------------------------------------------------------------
// local-estimate predictor
// ---------------------------------------------------------------------------

double LocalEstimate::value_at(double t) const {
    return std::exp(t * H) / std::pow(t, 1.5) *
           std::pow(2.0 * std::numbers::pi * Pbar_second, -0.5) * std::sqrt(det_star) *
           C_p * wf * wg;
}

LocalEstimate local_estimate_prediction(const PressureSurface& S, const ManhattanCurve& curve,
                                        double m, const Cylinder& p, const SampleWord& z_p,
                                        double xi) {
    LocalEstimate est;
    est.m = m;

    CorrPoint cp = correlation_number(S, curve, m);
    est.a = cp.a;
    est.b = cp.b;
    est.H = cp.H;

    CurvePoint pt = curve_point(S, cp.s);
    est.t_m = pt.t_m;

    LegendrePoint lp = legendre(S, pt.grad);
    est.Pbar_second = est.t_m * est.t_m * est.t_m * pt.grad.dot(lp.hess_star * pt.grad);
    est.det_star = lp.hess_star.determinant();
    if (!(est.det_star > 0))
        throw Error("local_estimate_prediction: dispersion matrix not positive definite");

    const RpfData& rpf = S.rpf_at(Vec2(-cp.a, -cp.b));
    if (p.depth() > rpf.k)
        throw DepthTooShallow("local_estimate_prediction: cylinder deeper than transfer basis");
    std::vector<int> zh((size_t)rpf.k);
    for (int i = 0; i < rpf.k; ++i) zh[(size_t)i] = z_p.letter((size_t)i);
    int zr = rpf.basis.rank_of(zh.data());
    if (zr < 0) throw Error("local_estimate_prediction: sample word head inadmissible");
    double nu_p = 0;
    for (size_t i = 0; i < rpf.basis.list.size(); ++i) {
        const Word& w = rpf.basis.list[i].prefix;
        bool in_p = true;
        for (int j = 0; j < p.depth(); ++j)
            if (w[(size_t)j] != p.prefix[(size_t)j]) {
                in_p = false;
                break;
            }
        if (in_p) nu_p += rpf.nu((Eigen::Index)i);
    }
    est.C_p = rpf.h(zr) * nu_p;

    est.wf = std::abs(cp.a) < 1e-14 ? xi : std::expm1(cp.a * xi) / cp.a;
    est.wg = std::abs(cp.b) < 1e-14 ? xi : std::expm1(cp.b * xi) / cp.b;
    return est;
}

} // namespace tc
