#include <algorithm>
#include <cmath>

#include "bykov/chaos_analysis.hpp"

namespace bykov {

std::vector<HeightInterval> interval_sequence(double x0, int count, const ModelConfig& c) {
    const auto& u = c.unfolding;
    if (!(u.lambda > 0))
        throw BykovError(ErrorCode::DegenerateUnfolding, "interval_sequence: lambda must be > 0");
    if (count < 0) throw BykovError(ErrorCode::Precondition, "interval_sequence: negative count");
    const double K = c.saddles.K(), d = c.saddles.delta();
    const double cg = std::log(c.psi_vw_gain) / c.saddles.E_w;
    int m = static_cast<int>(std::ceil((x0 - u.Pw2() - (K / d) * std::log(u.lambda)) / kTwoPi));
    while (x0 - cg - u.Pw1 - kTwoPi * m > 0) ++m;  // keeps hi <= 1
    const double a = (x0 - cg - u.Pw1 - kTwoPi * m) / K;
    const double b = (x0 - cg - u.Pw2() - kTwoPi * m) / K;
    const double emin = std::min(a, b), emax = std::max(a, b);

    std::vector<HeightInterval> out;
    for (int n = 0; n < count; ++n) {
        const double s = -kTwoPi * n / K;
        out.push_back({x0, std::exp(s + emin), std::exp(s + emax), n, m});
    }
    return out;
}

bool intervals_disjoint(const std::vector<HeightInterval>& iv) {
    for (std::size_t i = 0; i < iv.size(); ++i)
        for (std::size_t j = i + 1; j < iv.size(); ++j)
            if (!(iv[i].hi < iv[j].lo || iv[j].hi < iv[i].lo)) return false;
    return true;
}

namespace {

constexpr double kGolden = 0.6180339887498949;

class Budgeted {
public:
    Budgeted(const std::function<double(double)>& f, int budget) : f_(f), budget_(budget) {}
    double operator()(double s) {
        if (++used_ > budget_)
            throw BykovError(ErrorCode::InsufficientResolution,
                             "crossing refinement exceeded its evaluation budget");
        return f_(s);
    }
    int used() const { return used_; }

private:
    const std::function<double(double)>& f_;
    int budget_;
    int used_ = 0;
};

double bisect_root(Budgeted& f, double a, double b, double fa) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

// Minimises sgn*f on [a, b]; returns the argument.
double golden_min(Budgeted& f, double a, double b, int sgn) {
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = sgn * f(x1), f2 = sgn * f(x2);
    for (int it = 0; it < 100 && b - a > 1e-15 * (1 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = sgn * f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = sgn * f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

}  // namespace

CrossingReport count_sign_changes(const std::function<double(double)>& fn, double s0, double s1,
                                  int samples, double tol, int budget) {
    if (samples < 3 || !(s1 > s0))
        throw BykovError(ErrorCode::InsufficientResolution,
                         "count_sign_changes needs >= 3 samples on a non-empty interval");
    Budgeted f(fn, budget);
    const int n = samples;
    std::vector<double> s(n), v(n);
    std::vector<int> sg(n);
    for (int i = 0; i < n; ++i) {
        s[i] = s0 + (s1 - s0) * i / (n - 1);
        v[i] = f(s[i]);
        sg[i] = std::abs(v[i]) <= tol ? 0 : (v[i] > 0 ? 1 : -1);
    }

    CrossingReport r;
    r.min_abs = std::abs(v[0]);
    for (double x : v) r.min_abs = std::min(r.min_abs, std::abs(x));

    for (int i = 1; i < n; ++i)
        if (sg[i - 1] != 0 && sg[i] != 0 && sg[i - 1] != sg[i]) {
            r.crossings.push_back(bisect_root(f, s[i - 1], s[i], v[i - 1]));
            ++r.count;
        }

    // runs of numerically zero samples
    for (int i = 0; i < n;) {
        if (sg[i] != 0) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && sg[j + 1] == 0) ++j;
        int best = i;
        for (int t = i; t <= j; ++t)
            if (std::abs(v[t]) < std::abs(v[best])) best = t;
        if (i > 0 && j + 1 < n) {
            if (sg[i - 1] != sg[j + 1]) {
                r.crossings.push_back(s[best]);
                ++r.count;
            } else {
                r.tangencies.push_back(s[best]);
                r.tangency_suspected = true;
            }
        }
        i = j + 1;
    }

    // sign-preserving local minima of |f|
    for (int i = 1; i + 1 < n; ++i) {
        const int sgn = sg[i];
        if (sgn == 0 || sg[i - 1] != sgn || sg[i + 1] != sgn) continue;
        if (!(std::abs(v[i]) <= std::abs(v[i - 1]) && std::abs(v[i]) <= std::abs(v[i + 1]))) continue;
        const double sm = golden_min(f, s[i - 1], s[i + 1], sgn);
        const double vm = f(sm);
        r.min_abs = std::min(r.min_abs, std::abs(vm));
        if (std::abs(vm) <= tol) {
            r.tangencies.push_back(sm);
            r.tangency_suspected = true;
        } else if ((vm > 0) != (sgn > 0)) {
            r.crossings.push_back(bisect_root(f, s[i - 1], sm, v[i - 1]));
            r.crossings.push_back(bisect_root(f, sm, s[i + 1], vm));
            r.count += 2;
        }
    }
    std::sort(r.crossings.begin(), r.crossings.end());
    std::sort(r.tangencies.begin(), r.tangencies.end());
    r.evaluations = f.used();
    return r;
}

CrossingReport crossing_count(const std::function<SectionPoint(double)>& curve, double s0, double s1,
                              int samples, const ModelConfig& c) {
    auto f = [&](double s) {
        const SectionPoint p = curve(s);
        return p.b - g_curve(c.unfolding, p.a);
    };
    return count_sign_changes(f, s0, s1, samples, c.numeric.tol_root);
}

CrossingReport crossing_count(const CurveSample& curve, const ModelConfig& c) {
    const auto& pts = curve.points;
    if (pts.size() < 3)
        throw BykovError(ErrorCode::InsufficientResolution, "crossing_count needs >= 3 samples");
    std::vector<double> v(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) v[i] = pts[i].b - g_curve(c.unfolding, pts[i].a);
    const double last = static_cast<double>(pts.size() - 1);
    auto f = [&](double s) {
        const double t = std::clamp(s, 0.0, last);
        const auto i = std::min(static_cast<std::size_t>(t), pts.size() - 2);
        const double w = t - static_cast<double>(i);
        return (1 - w) * v[i] + w * v[i + 1];
    };
    return count_sign_changes(f, 0.0, last, static_cast<int>(pts.size()), c.numeric.tol_root);
}

std::vector<MultipulseConnection> find_multipulse(const ModelConfig& c, int max_winding) {
    const auto& u = c.unfolding;
    if (!(u.lambda > 0))
        throw BykovError(ErrorCode::DegenerateUnfolding, "find_multipulse: lambda must be > 0");
    const double K = c.saddles.K();
    const double cg = std::log(c.psi_vw_gain) / c.saddles.E_w;
    const double v_max = std::min((kTwoPi * (max_winding + 1) + cg) / K + std::log(u.lambda),
                                  std::log(u.lambda) - std::log(c.numeric.y_floor));
    std::vector<MultipulseConnection> out;
    if (!(v_max > 0)) return out;

    for (int branch : {-1, 1}) {
        // v = -ln(h / lambda) runs from the top of the h-curve towards its ends
        auto angle = [&](double v) {
            const double as = std::asin(std::exp(-v));
            return u.Pv1() + (branch < 0 ? kPi + as : kTwoPi - as);
        };
        auto height = [&](double v) {
            const double x = angle(v);
            return zeta_lift({SectionId::InV, x, h_curve(u, x), 1}, c).b;
        };
        const int samples = std::max(64, static_cast<int>(400 * v_max));
        const CrossingReport r = count_sign_changes(height, 0.0, v_max, samples, c.numeric.tol_root);

        auto record = [&](double v, bool tangential) {
            const double x = angle(v);
            const double y = h_curve(u, x);
            const long w = static_cast<long>(std::floor((-K * std::log(y) - cg) / kTwoPi));
            if (w <= max_winding) out.push_back({x, y, branch, w, tangential});
        };
        for (double v : r.crossings) record(v, false);
        for (double v : r.tangencies) record(v, true);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.branch != b.branch ? a.branch < b.branch : a.y > b.y;
    });
    return out;
}

}  // namespace bykov
