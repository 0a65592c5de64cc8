#include "thermocount/convex.hpp"

#include <cmath>

namespace tc {

PressureSurface make_surface(const PotentialPair& pair) {
    PressureSurface S;
    S.shift = pair.f.shift;
    S.f = pair.f;
    S.g = pair.g;
    S.flag = pair.flag;
    return S;
}

const RpfData& PressureSurface::rpf_at(const Vec2& z) const {
    std::array<double, 2> key{z[0], z[1]};
    auto it = cache.find(key);
    if (it == cache.end()) {
        Potential u = combine(f, z[0], g, z[1]);
        auto data = std::make_shared<const RpfData>(rpf_data(shift, u, /*need_gap=*/false));
        it = cache.emplace(key, std::move(data)).first;
    }
    return *it->second;
}

double surface_pressure(const PressureSurface& S, const Vec2& z) {
    return S.rpf_at(z).pressure;
}

Vec2 grad_pressure(const PressureSurface& S, const Vec2& z) {
    const RpfData& r = S.rpf_at(z);
    double df = 0, dg = 0;
    for (int i = 0; i < r.mu.size(); ++i) {
        df += S.f.values[std::size_t(i)] * r.mu[i];
        dg += S.g.values[std::size_t(i)] * r.mu[i];
    }
    return {df, dg};
}

Mat2 hess_pressure(const PressureSurface& S, const Vec2& z) {
    const double h = 1e-4;
    Mat2 H;
    for (int j = 0; j < 2; ++j) {
        Vec2 e = Vec2::Zero();
        e[j] = h;
        Vec2 d = (grad_pressure(S, z + e) - grad_pressure(S, z - e)) / (2 * h);
        H.col(j) = d;
    }
    return 0.5 * (H + H.transpose());
}

LegendrePoint legendre(const PressureSurface& S, const Vec2& x) {
    Vec2 z = Vec2::Zero();
    Vec2 r = grad_pressure(S, z) - x;
    double rn = r.norm();

    for (int it = 0; it < 200 && rn >= 1e-10; ++it) {
        Mat2 H = hess_pressure(S, z);
        // pseudo-inverse step handles the rank-1 Hessians of dependent pairs
        Eigen::JacobiSVD<Mat2> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-12);
        Vec2 step = svd.solve(r);
        if (!step.allFinite()) throw OutsideGradientRange("legendre: singular step");

        double scale = 1.0;
        Vec2 zNew;
        double rnNew = rn;
        bool improved = false;
        for (int bt = 0; bt < 40; ++bt) {
            zNew = z - scale * step;
            try {
                Vec2 rNew = grad_pressure(S, zNew) - x;
                if (rNew.allFinite() && rNew.norm() < rn) {
                    z = zNew;
                    r = rNew;
                    rnNew = rNew.norm();
                    improved = true;
                    break;
                }
            } catch (const NonConvergence&) {
                // the eigenproblem blows up far outside the gradient range;
                // treat it like any other overlong trial step
            }
            scale *= 0.5;
        }
        if (!improved) break;
        rn = rnNew;
    }
    if (!(rn < 1e-10))
        throw OutsideGradientRange("legendre: ||grad - x|| stalled at " + std::to_string(rn));

    LegendrePoint L;
    L.x = x;
    L.z = z;
    L.residual = rn;
    L.pstar = x.dot(z) - surface_pressure(S, z);
    Mat2 H = hess_pressure(S, z);
    double det = H.determinant();
    if (std::abs(det) > 1e-10 * H.norm() * H.norm()) {
        L.hess_star = H.inverse();
    } else {
        Eigen::JacobiSVD<Mat2> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
        svd.setThreshold(1e-12);
        L.hess_star = svd.solve(Mat2::Identity());
        L.hess_singular = true;
    }
    return L;
}

Profile profile_neg_t_pstar(const PressureSurface& S, double m, const std::vector<double>& t_grid) {
    Profile out;
    auto eval = [&](double t) -> double {
        Vec2 x(1.0 / t, m / t);
        return -t * legendre(S, x).pstar;
    };
    for (double t : t_grid) {
        ProfilePoint p;
        p.t = t;
        try {
            p.value = eval(t);
            p.ok = true;
        } catch (const OutsideGradientRange&) {
            p.ok = false;
        }
        out.samples.push_back(p);
    }

    // bracket the best ok sample and refine by golden section
    int best = -1;
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        if (out.samples[i].ok && (best < 0 || out.samples[i].value > out.samples[std::size_t(best)].value))
            best = int(i);
    if (best < 0) throw OutsideGradientRange("profile_neg_t_pstar: no admissible samples");

    double a = out.samples[std::size_t(best)].t, b = a;
    if (best > 0 && out.samples[std::size_t(best) - 1].ok) a = out.samples[std::size_t(best) - 1].t;
    if (best + 1 < int(out.samples.size()) && out.samples[std::size_t(best) + 1].ok)
        b = out.samples[std::size_t(best) + 1].t;
    if (a == b) {
        out.t_hat = a;
        out.value_hat = out.samples[std::size_t(best)].value;
        return out;
    }

    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval(c), fd = eval(d);
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = eval(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = eval(d);
        }
    }
    out.t_hat = 0.5 * (a + b);
    out.value_hat = eval(out.t_hat);
    return out;
}

} // namespace tc
