#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bykov/chaos_analysis.hpp"
#include "bykov/tangency_lab.hpp"

using namespace bykov;

namespace {

const ModelConfig cfg = reference_config();
const UnfoldingModel& um = cfg.unfolding;

SectionPoint inv(double x, double y) { return {SectionId::InV, x, y, y < 0 ? -1 : 1}; }

const std::vector<TangencyRecord>& records() {
    static const std::vector<TangencyRecord> r = find_tangencies(1e-1, 1e-5, cfg);
    return r;
}

// min of the post-return height of the h-curve over a fold window, densely sampled
double brute_min(double lambda, double s_lo, double s_hi) {
    const ModelConfig c = cfg.with_lambda(lambda);
    double best = INFINITY;
    for (int i = 0; i <= 100000; ++i) {
        const double x = um.x_star() + s_lo + (s_hi - s_lo) * i / 100000.0;
        best = std::min(best, zeta_lift(inv(x, h_curve(c.unfolding, x)), c).b);
    }
    return best;
}

}  // namespace

TEST_CASE("fold point") {
    const SectionPoint f = fold_point(0.01, cfg);
    CHECK(f.section == SectionId::OutW);
    CHECK(f.a == doctest::Approx(kPi / 3 + 1.5 * kPi - 3 * std::log(0.01)).epsilon(1e-15));
    CHECK(f.a == doctest::Approx(19.5751).epsilon(1e-5));
    CHECK(f.b == doctest::Approx(1e-8).epsilon(1e-14));

    const double r = std::exp(-kTwoPi / 3);
    for (double lam : {0.05, 0.01, 1e-3, 1e-4}) {
        CHECK(std::abs(fold_point(lam * r, cfg).a - fold_point(lam, cfg).a - kTwoPi) < 1e-12);
        CHECK(fold_point(lam, cfg).b == doctest::Approx(std::pow(lam, 4.0)).epsilon(1e-14));
    }
    CHECK(fold_point(1e-4, cfg).b / 1e-4 < fold_point(1e-2, cfg).b / 1e-2);

    // it is the highest point of the eta-image of the h-curve
    double best = -1;
    for (int i = 1; i < 100000; ++i) {
        const double x = um.Pv2() + kPi * i / 100000.0;
        best = std::max(best, eta(inv(x, h_curve(um, x)), cfg).b);
    }
    CHECK(best <= f.b);
    CHECK(best == doctest::Approx(f.b).epsilon(1e-8));

    CHECK_THROWS_AS(fold_point(0.0, cfg), BykovError);
}

TEST_CASE("tangency sequence") {
    const auto& rs = records();
    REQUIRE(rs.size() >= 3);
    const double ratio = std::exp(-kTwoPi / 3);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto& r = rs[i];
        CHECK(r.lambda_lo < r.lambda_star);
        CHECK(r.lambda_star < r.lambda_hi);
        CHECK(std::abs(r.value_residual) <= cfg.numeric.tol_root);
        CHECK(std::abs(r.slope_residual) <= cfg.numeric.tol_root);
        CHECK(std::abs(r.touch_y) <= cfg.numeric.tol_root);
        if (i + 1 < rs.size()) {
            CHECK(rs[i + 1].lambda_star < r.lambda_star);
            CHECK(std::abs(rs[i + 1].lambda_star / r.lambda_star - ratio) / ratio <= 0.05);
        }
    }
    CHECK(find_tangencies(1e-3, 1e-3, cfg).empty());
}

TEST_CASE("profile regimes around a tangency") {
    const auto& r = records().front();
    const ReturnProfile at = curve_return_profile(r.lambda_star, fold_window(cfg), 2001, cfg);
    CHECK(std::abs(at.min_value) <= cfg.numeric.tol_root);

    for (double f : {0.99, 1.01}) {
        const double lam = r.lambda_star * f;
        const ReturnProfile p = curve_return_profile(lam, fold_window(cfg), 2001, cfg);
        const double oracle = brute_min(lam, p.s_lo, p.s_hi);
        CHECK(p.min_value == doctest::Approx(oracle).epsilon(1e-6));
        CHECK((p.min_value < 0) == (oracle < 0));
    }
    const double below = curve_return_profile(r.lambda_star * 0.99, fold_window(cfg), 2001, cfg).min_value;
    const double above = curve_return_profile(r.lambda_star * 1.01, fold_window(cfg), 2001, cfg).min_value;
    CHECK(below * above < 0);
}

TEST_CASE("tangency seen by the crossing counter") {
    for (const auto& r : records()) {
        const ModelConfig c = cfg.with_lambda(r.lambda_star);
        auto curve = [&](double s) {
            const double x = c.unfolding.x_star() + s;
            return eta(inv(x, h_curve(c.unfolding, x)), c);
        };
        const CrossingReport cr = crossing_count(curve, r.s_fold - 0.05, r.s_fold + 0.05, 256, c);
        CHECK(cr.tangency_suspected);
    }
}

TEST_CASE("sinks near the largest tangency") {
    const auto& r = records().front();
    const auto orbits = find_periodic_sinks(r, 3, cfg);
    int sinks = 0;
    for (const auto& o : orbits) {
        const ModelConfig c = cfg.with_lambda(o.lambda);
        REQUIRE(o.points.size() == static_cast<std::size_t>(o.period));
        CHECK(o.residual <= 1e-9);

        // closes up after one period
        const Orbit orb = iterate(o.points[0], c, o.period);
        REQUIRE(orb.completed(static_cast<std::size_t>(o.period)));
        CHECK(circular_distance(orb.steps.back().next.a, o.points[0].a) <= cfg.numeric.tol_newton);
        CHECK(std::abs(orb.steps.back().next.b - o.points[0].b) <= cfg.numeric.tol_newton);

        double det = 1;
        for (const auto& p : o.points) det *= 4 * std::pow(std::abs(p.b), 3.0);
        CHECK(std::abs(o.det - det) <= 1e-8 * std::abs(det));
        const auto prod = o.multipliers[0] * o.multipliers[1];
        CHECK(std::abs(prod.real() - o.det) <= 1e-8 * std::abs(o.det) + 1e-300);

        const bool inside = std::abs(o.multipliers[0]) < 1 && std::abs(o.multipliers[1]) < 1;
        CHECK((o.tag == Stability::Sink) == inside);
        if (o.tag == Stability::Sink && o.verified) ++sinks;
    }
    CHECK(sinks >= 1);
    CHECK(find_periodic_sinks(r, 0, cfg).empty());
}

TEST_CASE("hyperbolicity loss on R0") {
    const Rectangle r0 = horseshoe_rectangles({0}, 0.05, cfg).front();
    const HyperbolicityScan scan = horseshoe_tangency_scan(r0, 1e-4, 1e-2, cfg);
    REQUIRE_FALSE(scan.thresholds.empty());
    CHECK(scan.pass_at_hi);
    const double lc = scan.thresholds.front();
    CHECK(cone_hyperbolicity({r0}, 1.0, 16, cfg.with_lambda(lc * 1.001)).pass);
    CHECK_FALSE(cone_hyperbolicity({r0}, 1.0, 16, cfg.with_lambda(lc * 0.999)).pass);
    bool in_window = false;
    for (const auto& r : records()) in_window = in_window || (r.lambda_lo <= lc && lc <= r.lambda_hi);
    CHECK(in_window);

    const HyperbolicityScan flat = horseshoe_tangency_scan(r0, 2e-3, 1e-2, cfg);
    CHECK(flat.thresholds.empty());
}
