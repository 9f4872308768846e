#include "bykov/tangency_lab.hpp"

#include <algorithm>
#include <cmath>

namespace bykov {

namespace {

double gain_shift(const ModelConfig& c) { return std::log(c.psi_vw_gain) / c.saddles.E_w; }

// Out(w) angle of eta along the h-curve, and its derivative.
double out_angle(double s, const ModelConfig& c) {
    const double x = c.unfolding.x_star() + s;
    return x - c.saddles.K() * std::log(h_curve(c.unfolding, x)) - gain_shift(c);
}

double out_angle_d(double s, const ModelConfig& c) {
    const double x = c.unfolding.x_star() + s;
    return 1.0 - c.saddles.K() * h_prime(c.unfolding, x) / h_curve(c.unfolding, x);
}

double profile_value(double s, const ModelConfig& c) {
    const double x = c.unfolding.x_star() + s;
    return zeta_lift({SectionId::InV, x, h_curve(c.unfolding, x), 1}, c).b;
}

double profile_slope(double s, const ModelConfig& c) {
    const auto& u = c.unfolding;
    const double x = u.x_star() + s;
    const double h = h_curve(u, x), hp = h_prime(u, x);
    const double G = std::pow(c.psi_vw_gain, c.saddles.delta_w());
    const double d = c.saddles.delta();
    return G * d * std::pow(h, d - 1.0) * hp - g_prime(u, out_angle(s, c)) * out_angle_d(s, c);
}

template <class F>
double bisect(F f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0) return m;
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

SectionPoint fold_point(double lambda, const ModelConfig& c) {
    if (!(lambda > 0)) throw BykovError(ErrorCode::DegenerateUnfolding, "fold_point: lambda must be > 0");
    const double G = std::pow(c.psi_vw_gain, c.saddles.delta_w());
    return {SectionId::OutW, c.unfolding.x_star() - c.saddles.K() * std::log(lambda) - gain_shift(c),
            G * std::pow(lambda, c.saddles.delta()), 1};
}

double fold_window(const ModelConfig& c) { return 0.5 * (c.unfolding.Pw2() - c.unfolding.Pw1); }

ReturnProfile curve_return_profile(double lambda, double window, int resolution, const ModelConfig& base) {
    if (!(lambda > 0)) throw BykovError(ErrorCode::DegenerateUnfolding, "curve_return_profile: lambda must be > 0");
    if (resolution < 8 || !(window > 0))
        throw BykovError(ErrorCode::InsufficientResolution, "curve_return_profile: resolution >= 8 and window > 0");
    const ModelConfig c = base.with_lambda(lambda);
    ReturnProfile p;
    p.lambda = lambda;

    // the h-curve is cut where its height drops below y_floor
    const double edge = std::acos(std::min(1.0, c.numeric.y_floor / lambda));
    const double left = -edge, right = edge;
    p.s_fold = bisect([&](double s) { return out_angle_d(s, c); }, left, 0.0);
    const double target = out_angle(p.s_fold, c) + window;
    if (!(out_angle(left, c) > target) || !(out_angle(right, c) > target))
        throw BykovError(ErrorCode::InsufficientResolution, "curve_return_profile: window reaches y_floor");
    p.s_lo = bisect([&](double s) { return out_angle(s, c) - target; }, left, p.s_fold);
    p.s_hi = bisect([&](double s) { return out_angle(s, c) - target; }, p.s_fold, right);

    p.samples.resize(static_cast<std::size_t>(resolution));
    std::size_t imin = 0;
    for (int i = 0; i < resolution; ++i) {
        const double s = p.s_lo + (p.s_hi - p.s_lo) * i / (resolution - 1);
        p.samples[i] = {s, profile_value(s, c)};
        if (p.samples[i].value < p.samples[imin].value) imin = static_cast<std::size_t>(i);
    }
    p.s_min = p.samples[imin].s;
    p.min_value = p.samples[imin].value;
    p.interior_min = imin > 0 && imin + 1 < p.samples.size();
    if (p.interior_min) {
        const double a = p.samples[imin - 1].s, b = p.samples[imin + 1].s;
        auto slope = [&](double s) { return profile_slope(s, c); };
        if (slope(a) < 0 && slope(b) > 0) {
            p.s_min = bisect(slope, a, b);
        } else {
            // golden section on the value
            constexpr double gr = 0.6180339887498949;
            double lo = a, hi = b;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
                if (profile_value(x1, c) < profile_value(x2, c)) hi = x2;
                else lo = x1;
            }
            p.s_min = 0.5 * (lo + hi);
        }
        p.min_value = profile_value(p.s_min, c);
    }
    p.slope_at_min = profile_slope(p.s_min, c);
    return p;
}

std::pair<double, double> alignment_window(long k, const ModelConfig& c) {
    const auto& u = c.unfolding;
    const double K = c.saddles.K();
    const double base = u.x_star() - gain_shift(c);
    const double l1 = std::exp((base - u.x_m() - kTwoPi * k) / K);
    const double l2 = std::exp((base - (u.Pw1 + 1.5 * kPi) - kTwoPi * k) / K);
    return {l2, l1};
}

std::vector<TangencyRecord> find_tangencies(double lambda_hi, double lambda_lo, const ModelConfig& c) {
    if (!(lambda_lo > 0)) throw BykovError(ErrorCode::Precondition, "find_tangencies: lambda_lo must be > 0");
    std::vector<TangencyRecord> out;
    if (!(lambda_lo < lambda_hi)) return out;

    const auto& u = c.unfolding;
    const double K = c.saddles.K();
    const double W = fold_window(c);
    constexpr int res = 2001;
    auto m = [&](double lam) { return curve_return_profile(lam, W, res, c).min_value; };

    long k = static_cast<long>(std::floor((u.x_star() - gain_shift(c) - u.x_m() - K * std::log(lambda_hi)) / kTwoPi));
    for (;; ++k) {
        const auto [l2, l1] = alignment_window(k, c);
        if (!(l1 > lambda_lo)) break;
        const double a = std::max(l2, lambda_lo), b = std::min(l1, lambda_hi);
        if (!(a < b)) continue;
        double lo = a, hi = b;
        const double mlo = m(lo), mhi = m(hi);
        if (!(mlo > 0 && mhi < 0)) continue;
        double best = mlo < -mhi ? lo : hi, best_abs = std::min(mlo, -mhi);
        for (int it = 0; it < 400; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (!(mid > lo && mid < hi)) break;
            const double mm = m(mid);
            if (std::abs(mm) < best_abs) {
                best_abs = std::abs(mm);
                best = mid;
            }
            if (std::abs(mm) <= 0.01 * c.numeric.tol_root) break;
            (mm > 0 ? lo : hi) = mid;
        }
        if (best < lambda_lo || best > lambda_hi) continue;

        const ReturnProfile p = curve_return_profile(best, W, res, c);
        const ModelConfig cl = c.with_lambda(best);
        TangencyRecord r;
        r.lambda_star = best;
        r.lambda_lo = l2;
        r.lambda_hi = l1;
        r.winding = k;
        r.preimage_x = u.x_star() + p.s_min;
        r.preimage_y = h_curve(cl.unfolding, r.preimage_x);
        const SectionPoint t = zeta_lift({SectionId::InV, r.preimage_x, r.preimage_y, 1}, cl);
        r.touch_x = wrap_angle(t.a);
        r.touch_y = t.b;
        r.s_fold = p.s_fold;
        r.value_residual = p.min_value;
        r.slope_residual = p.slope_at_min;
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(),
              [](const TangencyRecord& a, const TangencyRecord& b) { return a.lambda_star > b.lambda_star; });
    return out;
}

HyperbolicityScan horseshoe_tangency_scan(const Rectangle& rect, double lambda_lo, double lambda_hi,
                                          const ModelConfig& c) {
    if (!(lambda_lo > 0) || !(lambda_lo < lambda_hi))
        throw BykovError(ErrorCode::Precondition, "horseshoe_tangency_scan: need 0 < lambda_lo < lambda_hi");
    auto pass = [&](double lam) { return cone_hyperbolicity({rect}, 1.0, 16, c.with_lambda(lam)).pass; };
    HyperbolicityScan scan;
    scan.pass_at_hi = pass(lambda_hi);
    scan.pass_at_lo = pass(lambda_lo);
    if (!scan.pass_at_hi) return scan;

    constexpr int n = 48;
    const double r = std::log(lambda_lo / lambda_hi);
    double prev_l = lambda_hi;
    bool prev = true;
    for (int i = 1; i <= n; ++i) {
        const double l = i == n ? lambda_lo : lambda_hi * std::exp(r * i / n);
        const bool cur = i == n ? scan.pass_at_lo : pass(l);
        if (prev && !cur) {
            double hi = prev_l, lo = l;
            for (int it = 0; it < 60 && hi / lo - 1 > 1e-12; ++it) {
                const double mid = std::sqrt(lo * hi);
                (pass(mid) ? hi : lo) = mid;
            }
            scan.thresholds.push_back(std::sqrt(lo * hi));
        }
        prev = cur;
        prev_l = l;
    }
    return scan;
}

}  // namespace bykov
