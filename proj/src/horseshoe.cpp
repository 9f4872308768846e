#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "bykov/chaos_analysis.hpp"

namespace bykov {

bool Rectangle::contains(const SectionPoint& p) const {
    const double x = wrap_near(p.a, x_mid());
    return x >= x_lo && x <= x_hi && p.b >= y_lo && p.b <= y_hi;
}

bool TransitionMatrix::all_ones() const {
    if (entries.empty()) return false;
    for (const auto& row : entries)
        for (int e : row)
            if (e != 1) return false;
    return true;
}

std::string TransitionMatrix::text() const {
    std::string out;
    for (const auto& row : entries) {
        for (std::size_t j = 0; j < row.size(); ++j) out += (j ? " " : "") + std::to_string(row[j]);
        out += "\n";
    }
    return out;
}

double ladder_height(int k, const ModelConfig& c) {
    const auto& u = c.unfolding;
    const double cg = std::log(c.psi_vw_gain) / c.saddles.E_w;
    return std::exp((u.Pv1() - u.Pw1 - cg - kTwoPi * k) / c.saddles.K());
}

std::vector<Rectangle> horseshoe_rectangles(const std::vector<int>& n_range, double tau,
                                            const ModelConfig& c, int* k0_out) {
    const double K = c.saddles.K();
    const auto& u = c.unfolding;
    if (!(K > 1)) throw BykovError(ErrorCode::Precondition, "build_horseshoe: needs K > 1");
    if (!(u.lambda > 0))
        throw BykovError(ErrorCode::DegenerateUnfolding, "build_horseshoe: lambda must be > 0");
    if (!(tau > 0) || !(tau < kPi / 3.0))
        throw BykovError(ErrorCode::Precondition,
                         "build_horseshoe: tau must lie in (0, pi/3) for disjoint rectangles, got " +
                             fmt17(tau));
    if (n_range.empty()) throw BykovError(ErrorCode::Precondition, "build_horseshoe: empty n_range");
    std::set<int> seen;
    for (int n : n_range)
        if (n < 0 || !seen.insert(n).second)
            throw BykovError(ErrorCode::Precondition, "build_horseshoe: indices must be distinct and >= 0");

    // log half-height 3 tau / K holds one full pass of +-tau around P_v1 for
    // every column; the top must sit below half the band height lambda sin tau
    const double w = 3.0 * tau / K;
    const double cap = std::log(0.5 * u.lambda * std::sin(tau));
    int k0 = 0;
    while (std::log(ladder_height(k0, c)) + w > cap) ++k0;
    if (k0_out) *k0_out = k0;

    std::vector<Rectangle> out;
    for (int n : n_range) {
        const double p = ladder_height(k0 + n, c);
        out.push_back({u.Pv1() - tau, u.Pv1() + tau, p * std::exp(-w), p * std::exp(w),
                       "R" + std::to_string(n)});
    }
    return out;
}

namespace {

enum class Exit { Height, Side, Boundary };

struct Strip {
    double ua, ub;
    Exit ea, eb;
};

double image_height(double x, double u, const ModelConfig& c) {
    return zeta_lift({SectionId::InV, x, std::exp(u), 1}, c).b;
}

double image_angle(double x, double u, const ModelConfig& c) {
    return zeta_lift({SectionId::InV, x, std::exp(u), 1}, c).a;
}

// Sub-intervals of ln y on the column {x} x R_i whose image lies in R_j.
std::vector<Strip> column_strips(double x, const Rectangle& Ri, const Rectangle& Rj, const ModelConfig& c,
                                 int per_window, double* gap) {
    const double K = c.saddles.K();
    const double cg = std::log(c.psi_vw_gain) / c.saddles.E_w;
    const double U0 = std::log(Ri.y_lo), U1 = std::log(Ri.y_hi);
    const double base = x + c.unfolding.Delta - cg;  // image angle = base - K u
    const long k_lo = static_cast<long>(std::floor((base - K * U1 - Rj.x_hi) / kTwoPi));
    const long k_hi = static_cast<long>(std::ceil((base - K * U0 - Rj.x_lo) / kTwoPi));

    std::vector<Strip> out;
    for (long k = k_lo; k <= k_hi; ++k) {
        const double wa = (base - Rj.x_hi - kTwoPi * k) / K;
        const double wb = (base - Rj.x_lo - kTwoPi * k) / K;
        const double a = std::max(wa, U0), b = std::min(wb, U1);
        if (!(a < b)) continue;
        const Exit ka = wa >= U0 ? Exit::Side : Exit::Boundary;
        const Exit kb = wb <= U1 ? Exit::Side : Exit::Boundary;

        std::vector<double> us(per_window), ys(per_window);
        for (int t = 0; t < per_window; ++t) {
            us[t] = t + 1 == per_window ? b : a + (b - a) * t / (per_window - 1);
            ys[t] = image_height(x, us[t], c);
            const double d = ys[t] < Rj.y_lo ? Rj.y_lo - ys[t] : (ys[t] > Rj.y_hi ? ys[t] - Rj.y_hi : 0.0);
            if (gap) *gap = std::min(*gap, d);
        }
        std::vector<double> cuts{a, b};
        for (double level : {Rj.y_lo, Rj.y_hi})
            for (int t = 1; t < per_window; ++t) {
                if ((ys[t - 1] >= level) == (ys[t] >= level)) continue;
                double lo = us[t - 1], hi = us[t];
                const bool up = ys[t] >= level;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi) break;
                    if ((image_height(x, mid, c) >= level) == up) hi = mid;
                    else lo = mid;
                }
                cuts.push_back(0.5 * (lo + hi));
            }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
            const double p = cuts[t], q = cuts[t + 1];
            if (!(q > p)) continue;
            const double ym = image_height(x, 0.5 * (p + q), c);
            if (ym < Rj.y_lo || ym > Rj.y_hi) continue;
            const Exit ep = p == a ? ka : Exit::Height;
            const Exit eq = q == b ? kb : Exit::Height;
            if (!out.empty() && out.back().ub == p) {
                out.back().ub = q;
                out.back().eb = eq;
            } else {
                out.push_back({p, q, ep, eq});
            }
        }
    }
    return out;
}

bool monotone_on(double x, double a, double b, const ModelConfig& c) {
    int dir = 0;
    double prev = image_height(x, a, c);
    for (int t = 1; t <= 64; ++t) {
        const double y = image_height(x, a + (b - a) * t / 64.0, c);
        const int s = y > prev ? 1 : (y < prev ? -1 : 0);
        if (s == 0 || (dir != 0 && s != dir)) return false;
        dir = s;
        prev = y;
    }
    return true;
}

void check_rects(const std::vector<Rectangle>& rects) {
    for (const auto& r : rects)
        if (!(r.x_lo < r.x_hi) || !(r.y_lo > 0) || !(r.y_lo < r.y_hi))
            throw BykovError(ErrorCode::Precondition, "rectangle " + r.label + " is malformed");
}

}  // namespace

CrossingCertificate certify_crossing(const std::vector<Rectangle>& rects, int i, int j,
                                     const ModelConfig& c) {
    check_rects(rects);
    const Rectangle& Ri = rects.at(static_cast<std::size_t>(i));
    const Rectangle& Rj = rects.at(static_cast<std::size_t>(j));
    const double tol = c.numeric.tol_root;
    CrossingCertificate cert;
    cert.from = i;
    cert.to = j;
    cert.separation = std::numeric_limits<double>::infinity();

    for (int side = 0; side < 2; ++side) {
        const double xe = side == 0 ? Ri.x_lo : Ri.x_hi;
        double gap = std::numeric_limits<double>::infinity();
        const auto strips = column_strips(xe, Ri, Rj, c, 4096, &gap);
        if (strips.empty()) cert.separation = std::min(cert.separation, gap);
        int full = 0;
        for (const auto& s : strips) {
            for (auto [u, e] : {std::pair{s.ua, s.ea}, std::pair{s.ub, s.eb}}) {
                if (e == Exit::Height) {
                    const double xa = wrap_near(image_angle(xe, u, c), Rj.x_mid());
                    if (std::abs(xa - Rj.x_lo) <= tol || std::abs(xa - Rj.x_hi) <= tol)
                        throw BykovError(ErrorCode::CrossingUncertain,
                                         "edge image passes a corner of " + Rj.label);
                } else {
                    const double y = image_height(xe, u, c);
                    if (std::abs(y - Rj.y_lo) <= tol || std::abs(y - Rj.y_hi) <= tol)
                        throw BykovError(ErrorCode::CrossingUncertain,
                                         "edge image passes a corner of " + Rj.label);
                }
            }
            if (s.ea == Exit::Height && s.eb == Exit::Height && monotone_on(xe, s.ua, s.ub, c)) ++full;
            else cert.stray_strip = true;
        }
        (side == 0 ? cert.strips_left : cert.strips_right) = full;
    }

    cert.horizontal_clear = true;
    const double cg = std::log(c.psi_vw_gain) / c.saddles.E_w;
    for (double ye : {Ri.y_lo, Ri.y_hi}) {
        const double shift = c.unfolding.Delta - cg - c.saddles.K() * std::log(ye);
        for (int t = 0; t <= 4096; ++t) {
            const double x = Ri.x_lo + (Ri.x_hi - Ri.x_lo) * t / 4096.0;
            const double xa = wrap_near(x + shift, Rj.x_mid());
            if (xa < Rj.x_lo || xa > Rj.x_hi) continue;
            const double y = zeta_lift({SectionId::InV, x, ye, 1}, c).b;
            if (y >= Rj.y_lo - tol && y <= Rj.y_hi + tol) cert.horizontal_clear = false;
        }
    }
    cert.full = cert.strips_left >= 1 && cert.strips_left == cert.strips_right && !cert.stray_strip &&
                cert.horizontal_clear;
    return cert;
}

Horseshoe build_horseshoe(const std::vector<int>& n_range, double tau, const ModelConfig& c) {
    Horseshoe h;
    h.rects = horseshoe_rectangles(n_range, tau, c, &h.k0);
    const int n = static_cast<int>(h.rects.size());
    h.matrix.entries.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            h.certificates.push_back(certify_crossing(h.rects, i, j, c));
            h.matrix.entries[i][j] = h.certificates.back().full ? 1 : 0;
        }
    return h;
}

namespace {

// min |A v| / |v| over the double cone |v_x| <= slope |v_y|
double cone_min_gain(const Mat2& A, double slope) {
    const double p = A.a * A.a + A.c * A.c;  // A^T A = [[p, q], [q, r]]
    const double q = A.a * A.b + A.c * A.d;
    const double r = A.b * A.b + A.d * A.d;
    const double mean = 0.5 * (p + r), rad = std::hypot(0.5 * (p - r), q);
    const double lmin = mean - rad;
    // eigenvector of lmin
    double vx = q, vy = lmin - p;
    if (std::abs(vx) + std::abs(vy) == 0) {
        vx = r - lmin;
        vy = -q;
    }
    if (std::abs(vx) + std::abs(vy) == 0 || std::abs(vx) <= slope * std::abs(vy))
        return std::sqrt(std::max(lmin, 0.0));
    const double norm = std::sqrt(1 + slope * slope);
    const Vec2 e1 = A * Vec2{slope, 1}, e2 = A * Vec2{-slope, 1};
    return std::min(std::hypot(e1.x, e1.y), std::hypot(e2.x, e2.y)) / norm;
}

}  // namespace

ConeReport cone_hyperbolicity(const std::vector<Rectangle>& rects, double slope, int grid,
                              const ModelConfig& c) {
    ConeReport rep;
    if (!(slope > 0)) {
        rep.input_ok = false;
        rep.reason = "cone slope must be > 0 (the cone would be empty)";
        return rep;
    }
    if (grid < 2 || rects.empty()) {
        rep.input_ok = false;
        rep.reason = "need at least one rectangle and grid >= 2";
        return rep;
    }
    try {
        check_rects(rects);
    } catch (const BykovError& e) {
        rep.input_ok = false;
        rep.reason = e.what();
        return rep;
    }

    rep.mu = std::numeric_limits<double>::infinity();
    for (const auto& Ri : rects)
        for (const auto& Rj : rects) {
            const double wi = Ri.x_hi - Ri.x_lo, hi = Ri.y_hi - Ri.y_lo;
            const double wj = Rj.x_hi - Rj.x_lo, hj = Rj.y_hi - Rj.y_lo;
            int filled = 0;
            bool partial = false;
            for (int col = 0; col < grid; ++col) {
                const double x = Ri.x_lo + wi * (col + 0.5) / grid;
                const auto strips = column_strips(x, Ri, Rj, c, 2048, nullptr);
                if (!strips.empty()) ++filled;
                for (const auto& s : strips) {
                    if (s.ea != Exit::Height || s.eb != Exit::Height) partial = true;
                    for (int t = 0; t < grid; ++t) {
                        const double u = s.ua + (s.ub - s.ua) * (t + 0.5) / grid;
                        const Mat2 A = d_zeta({SectionId::InV, x, std::exp(u), 1}, c);
                        // rectangle charts: R_i -> [-1,1]^2 and R_j -> [-1,1]^2
                        const Mat2 An{A.a * wi / wj, A.b * hi / wj, A.c * wi / hj, A.d * hi / hj};
                        ++rep.points;
                        bool ok = true;
                        int side = 0;
                        for (double vx : {-slope, 0.0, slope}) {
                            const Vec2 w = An * Vec2{vx, 1.0};
                            const int sy = w.y > 0 ? 1 : (w.y < 0 ? -1 : 0);
                            if (!(std::abs(w.x) < slope * std::abs(w.y)) || sy == 0 || (side && sy != side))
                                ok = false;
                            side = sy;
                        }
                        if (!ok) ++rep.cone_violations;
                        rep.mu = std::min(rep.mu, cone_min_gain(An, slope));
                    }
                }
            }
            if (filled == 0) continue;
            if (filled == grid && !partial) ++rep.full_pairs;
            else ++rep.partial_pairs;
        }
    if (rep.points == 0) rep.mu = 0;
    rep.pass = rep.full_pairs >= 1 && rep.partial_pairs == 0 && rep.cone_violations == 0 && rep.mu > 1;
    return rep;
}

}  // namespace bykov
