#include <algorithm>
#include <cmath>
#include <limits>

#include "bykov/global_maps.hpp"
#include "bykov/tangency_lab.hpp"

namespace bykov {

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::Sink: return "sink";
        case Stability::Saddle: return "saddle";
        case Stability::Source: return "source";
        case Stability::Nonhyperbolic: return "nonhyperbolic";
    }
    return "?";
}

namespace {

struct Power {
    double x = 0, y = 0;  // image under zeta^p, angle unwrapped
    Mat2 J;
    double det = 1;       // product of the one-step determinants; J.det() cancels
    Vec2 dlam;            // derivative of the image with respect to lambda
    bool ok = false;
};

Power zeta_power(double x, double y, double lambda, int p, const ModelConfig& base) {
    const ModelConfig c = base.with_lambda(lambda);
    Power r;
    r.x = x;
    r.y = y;
    for (int i = 0; i < p; ++i) {
        if (!(std::abs(r.y) >= c.numeric.y_floor) || !std::isfinite(r.y)) return r;
        const SectionPoint q{SectionId::InV, r.x, r.y, r.y > 0 ? 1 : -1};
        const SectionPoint e = eta(q, c);
        const Mat2 Ji = d_zeta(q, c);
        r.J = Ji * r.J;
        r.det *= d_eta(q, c).det();  // the shear has determinant 1
        r.dlam = Ji * r.dlam;
        r.dlam.y -= g_curve(c.unfolding, e.a) / lambda;
        const SectionPoint nq = psi_wv(e, c.unfolding);
        r.x = nq.a;
        r.y = nq.b;
    }
    r.ok = std::isfinite(r.x) && std::isfinite(r.y);
    return r;
}

double frob(const Mat2& m) { return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d); }

bool solve3(double A[3][3], double b[3], double x[3]) {
    int idx[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[idx[r]][col]) > std::abs(A[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        const double d = A[idx[col]][col];
        if (!(std::abs(d) > 0) || !std::isfinite(d)) return false;
        for (int r = col + 1; r < 3; ++r) {
            const double f = A[idx[r]][col] / d;
            for (int k = col; k < 3; ++k) A[idx[r]][k] -= f * A[idx[col]][k];
            b[idx[r]] -= f * b[idx[col]];
        }
    }
    for (int col = 2; col >= 0; --col) {
        double s = b[idx[col]];
        for (int k = col + 1; k < 3; ++k) s -= A[idx[col]][k] * x[k];
        x[col] = s / A[idx[col]][col];
    }
    return std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2]);
}

struct Unknowns {
    double x, y, lam;
};

struct Residual {
    double f1 = 0, f2 = 0, f3 = 0;
    bool ok = false;
    double merit(double y) const {
        const double r2 = f2 / std::abs(y);
        return f1 * f1 + r2 * r2 + f3 * f3;
    }
};

Residual residual(const Unknowns& v, int p, double scale, const ModelConfig& c) {
    Residual r;
    const Power pw = zeta_power(v.x, v.y, v.lam, p, c);
    if (!pw.ok) return r;
    r.f1 = std::remainder(pw.x - v.x, kTwoPi);
    r.f2 = pw.y - v.y;
    r.f3 = pw.J.trace() / scale;
    r.ok = true;
    return r;
}

// Newton on (x, y, lambda) for zeta^p(q) = q with tr D zeta^p = 0: the centre
// of a sink window. Fixed-point rows are analytic, the trace row uses central
// differences.
bool newton_centre(Unknowns& v, int p, double lam_lo, double lam_hi, const ModelConfig& c) {
    const double tol = c.numeric.tol_newton;
    const int sign = v.y > 0 ? 1 : -1;
    for (int it = 0; it < c.numeric.max_iter; ++it) {
        const Power pw = zeta_power(v.x, v.y, v.lam, p, c);
        if (!pw.ok) return false;
        const double scale = std::max(frob(pw.J), 1.0);
        const Residual r{std::remainder(pw.x - v.x, kTwoPi), pw.y - v.y, pw.J.trace() / scale, true};
        if (std::abs(r.f1) <= tol && std::abs(r.f2) <= tol && std::abs(r.f3) <= 1e-10) return true;

        const double hx = 1e-7, hy = 1e-7 * std::abs(v.y), hl = 1e-7 * v.lam;
        auto tr = [&](double x, double y, double l) {
            const Power q = zeta_power(x, y, l, p, c);
            return q.ok ? q.J.trace() / scale : std::numeric_limits<double>::quiet_NaN();
        };
        // columns scaled to (dx, dy/|y|, dlambda/lambda)
        double A[3][3] = {
            {pw.J.a - 1.0, pw.J.b * std::abs(v.y), pw.dlam.x * v.lam},
            {pw.J.c, (pw.J.d - 1.0) * std::abs(v.y), pw.dlam.y * v.lam},
            {(tr(v.x + hx, v.y, v.lam) - tr(v.x - hx, v.y, v.lam)) / (2 * hx),
             (tr(v.x, v.y + hy, v.lam) - tr(v.x, v.y - hy, v.lam)) / (2 * hy) * std::abs(v.y),
             (tr(v.x, v.y, v.lam + hl) - tr(v.x, v.y, v.lam - hl)) / (2 * hl) * v.lam}};
        double b[3] = {-r.f1, -r.f2, -r.f3};
        double d[3];
        if (!solve3(A, b, d)) return false;

        const double m0 = r.merit(v.y);
        bool moved = false;
        for (double t = 1.0; t > 1e-6; t *= 0.5) {
            const Unknowns w{v.x + t * d[0], v.y + t * d[1] * std::abs(v.y), v.lam * (1 + t * d[2])};
            if ((w.y > 0 ? 1 : -1) != sign || !(std::abs(w.y) >= c.numeric.y_floor) || w.lam < lam_lo ||
                w.lam > lam_hi)
                continue;
            const Residual rw = residual(w, p, scale, c);
            if (rw.ok && rw.merit(w.y) < m0) {
                const double step = std::abs(w.x - v.x) + std::abs(w.y - v.y) / std::abs(v.y) +
                                    std::abs(w.lam - v.lam) / v.lam;
                v = w;
                moved = true;
                if (step < 1e-15) return std::abs(rw.f1) <= tol && std::abs(rw.f2) <= tol;
                break;
            }
        }
        if (!moved) return false;
    }
    return false;
}

bool returns_after(const SectionPoint& q, int d, double lambda, const ModelConfig& c, double tol) {
    const Power pw = zeta_power(q.a, q.b, lambda, d, c);
    return pw.ok && std::abs(std::remainder(pw.x - q.a, kTwoPi)) <= tol && std::abs(pw.y - q.b) <= tol;
}

double chart_distance(const SectionPoint& a, const SectionPoint& b) {
    return std::hypot(std::remainder(a.a - b.a, kTwoPi), a.b - b.b);
}

bool same_orbit(const PeriodicOrbit& a, const PeriodicOrbit& b, double tol) {
    if (a.period != b.period || std::abs(a.lambda - b.lambda) > 1e-9 * a.lambda) return false;
    for (std::size_t shift = 0; shift < b.points.size(); ++shift) {
        bool all = true;
        for (std::size_t i = 0; i < a.points.size() && all; ++i)
            all = chart_distance(a.points[i], b.points[(i + shift) % b.points.size()]) <= tol;
        if (all) return true;
    }
    return false;
}

}  // namespace

std::vector<PeriodicOrbit> find_periodic_sinks(const TangencyRecord& rec, int period_max, const ModelConfig& c) {
    std::vector<PeriodicOrbit> out;
    if (period_max <= 0) return out;
    const double ls = rec.lambda_star;
    if (!(ls > 0)) throw BykovError(ErrorCode::DegenerateUnfolding, "find_periodic_sinks: lambda_* must be > 0");
    const double lam_lo = 0.95 * ls, lam_hi = 1.05 * ls;
    const double tol = c.numeric.tol_newton;

    for (int p = 1; p <= period_max; ++p)
        for (int ix = 0; ix < 7; ++ix)
            for (int iy = 0; iy < 30; ++iy)
                for (int sg : {1, -1})
                    for (double dl : {-1e-3, -1e-4, 1e-4, 1e-3}) {
                        const double x = rec.touch_x - 0.3 + 0.1 * ix;
                        const double y = sg * ls * std::pow(10.0, std::log10(3e-6) * (1.0 - iy / 29.0));
                        Unknowns v{x, y, ls * (1 + dl)};
                        if (!newton_centre(v, p, lam_lo, lam_hi, c)) continue;

                        const SectionPoint q0{SectionId::InV, wrap_angle(v.x), v.y, v.y > 0 ? 1 : -1};
                        bool lower = false;
                        for (int d = 1; d < p && !lower; ++d)
                            lower = p % d == 0 && returns_after(q0, d, v.lam, c, 1e-9);
                        if (lower) continue;

                        PeriodicOrbit o;
                        o.period = p;
                        o.lambda = v.lam;
                        const ModelConfig cl = c.with_lambda(v.lam);
                        SectionPoint q = q0;
                        for (int i = 0; i < p; ++i) {
                            o.points.push_back(q);
                            q = zeta(q, cl).next;
                        }
                        const Power pw = zeta_power(q0.a, q0.b, v.lam, p, c);
                        o.residual = std::max(std::abs(std::remainder(pw.x - q0.a, kTwoPi)), std::abs(pw.y - q0.b));
                        o.det = pw.det;
                        o.multipliers = eigenvalues(pw.J.trace(), pw.det);
                        const double m0 = std::abs(o.multipliers[0]), m1 = std::abs(o.multipliers[1]);
                        if (std::abs(m0 - 1) < 1e-9 || std::abs(m1 - 1) < 1e-9) o.tag = Stability::Nonhyperbolic;
                        else if (m0 < 1 && m1 < 1) o.tag = Stability::Sink;
                        else if (m0 > 1 && m1 > 1) o.tag = Stability::Source;
                        else o.tag = Stability::Saddle;

                        if (o.tag == Stability::Sink) {
                            SectionPoint z{SectionId::InV, q0.a + 1e-6, q0.b * (1 + 1e-6), q0.sheet};
                            const double d0 = chart_distance(z, q0);
                            bool alive = true;
                            for (int i = 0; i < 50 * p && alive; ++i) {
                                const ReturnOutcome r = zeta(z, cl);
                                alive = r.status == ReturnStatus::Returned;
                                z = r.next;
                            }
                            o.contraction = alive ? chart_distance(z, q0) / d0 : std::numeric_limits<double>::infinity();
                            o.verified = alive && o.contraction < 1e-2;
                        }
                        bool dup = false;
                        for (const auto& e : out) dup = dup || same_orbit(e, o, 10 * tol);
                        if (!dup) out.push_back(o);
                    }
    std::sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.period != b.period) return a.period < b.period;
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return a.points.front().a < b.points.front().a;
    });
    return out;
}

}  // namespace bykov
