#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bykov/core_model.hpp"

using namespace bykov;

namespace {

ModelConfig with_saddles(double cv, double ev, double cw, double ew) {
    ModelConfig c = reference_config();
    c.saddles = {cv, ev, cw, ew};
    return c;
}

bool check_ok(const ValidationReport& r, const std::string& name) {
    for (const auto& ch : r.checks)
        if (ch.name == name) return ch.ok;
    FAIL("missing check " << name);
    return false;
}

}  // namespace

TEST_CASE("reference saddles give the derived exponents") {
    const ValidationReport r = validate(reference_config());
    CHECK(r.ok());
    CHECK(r.delta_v == 2.0);
    CHECK(r.delta_w == 2.0);
    CHECK(r.delta == 4.0);
    CHECK(r.K == 3.0);
    CHECK(r.stability_criterion);
    CHECK(r.disjoint_intervals_regime);
}

TEST_CASE("weak contraction is rejected") {
    const ValidationReport r = validate(with_saddles(1, 2, 2, 1));
    CHECK_FALSE(r.ok());
    CHECK_FALSE(check_ok(r, "C_v>E_v"));
}

TEST_CASE("near-critical saddles") {
    const ValidationReport r = validate(with_saddles(1.2, 1.0, 1.2, 1.0));
    CHECK(r.ok());
    CHECK(r.K == doctest::Approx((1.2 + 1.0) / (1.0 * 1.0)).epsilon(1e-15));
    CHECK(r.delta == doctest::Approx(1.2 * 1.2).epsilon(1e-15));
    CHECK(r.stability_criterion);
}

TEST_CASE("derived quantities exceed one for random valid saddles") {
    std::uint64_t s = 12345;
    auto next = [&] {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return (s >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < 200; ++i) {
        const double ev = 0.1 + 3 * next(), ew = 0.1 + 3 * next();
        const double cv = ev * (1.0 + 1e-3 + 4 * next()), cw = ew * (1.0 + 1e-3 + 4 * next());
        const ValidationReport r = validate(with_saddles(cv, ev, cw, ew));
        REQUIRE(r.ok());
        CHECK(r.delta_v > 1);
        CHECK(r.delta_w > 1);
        CHECK(r.delta > 1);
        CHECK(r.K > 0);
    }
}

TEST_CASE("g peaks at x_m with height lambda") {
    const UnfoldingModel m = reference_config().unfolding;
    CHECK(g_curve(m, kPi / 2) == doctest::Approx(0.01).epsilon(1e-15));
    double best = -1, at = 0;
    for (int i = 0; i < 200000; ++i) {
        const double x = kTwoPi * i / 200000.0;
        if (g_curve(m, x) > best) best = g_curve(m, x), at = x;
    }
    CHECK(best == doctest::Approx(m.lambda).epsilon(1e-9));
    CHECK(std::abs(at - m.x_m()) < 1e-4);
    CHECK(m.Pw1 < m.x_m());
    CHECK(m.x_m() < m.Pw2());
}

TEST_CASE("connection angles are exact zeros") {
    for (double lam : {0.0, 1e-6, 0.01, 0.3}) {
        UnfoldingModel m = reference_config().unfolding;
        m.lambda = lam;
        CHECK(g_curve(m, m.Pw1) == 0.0);
        CHECK(g_curve(m, m.Pw2()) == 0.0);
        CHECK(h_curve(m, m.Pv1()) == 0.0);
        CHECK(h_curve(m, m.Pv2()) == 0.0);
    }
}

TEST_CASE("lambda zero gives vanishing curves") {
    UnfoldingModel m = reference_config().unfolding;
    m.lambda = 0;
    for (int i = 0; i < 1000; ++i) {
        const double x = -10 + 20 * i / 1000.0;
        CHECK(g_curve(m, x) == 0.0);
        CHECK(h_curve(m, x) == 0.0);
    }
}

TEST_CASE("h peaks at x_star") {
    const UnfoldingModel m = reference_config().unfolding;
    CHECK(h_curve(m, m.Pv1() + 1.5 * kPi) == doctest::Approx(0.01).epsilon(1e-15));
    double best = -1, at = 0;
    for (int i = 0; i < 200000; ++i) {
        const double x = m.Pv1() + kTwoPi * i / 200000.0;
        if (h_curve(m, x) > best) best = h_curve(m, x), at = x;
    }
    CHECK(std::abs(at - m.x_star()) < 1e-4);
    // x_* lies on the arc from Pv2 to Pv1 + 2pi
    CHECK(m.Pv2() < m.x_star());
    CHECK(m.x_star() < m.Pv1() + kTwoPi);
}

TEST_CASE("periodicity and the h/g relation") {
    const UnfoldingModel m = reference_config().unfolding;
    for (int i = 0; i < 1000; ++i) {
        const double x = -7 + 14 * i / 1000.0;
        CHECK(std::abs(g_curve(m, x + kTwoPi) - g_curve(m, x)) <= 1e-15 * m.lambda);
        CHECK(std::abs(h_curve(m, x + kTwoPi) - h_curve(m, x)) <= 1e-15 * m.lambda);
        CHECK(h_curve(m, x) + g_curve(m, x - m.Delta) == 0.0);
    }
}

TEST_CASE("sign conventions by finite differences") {
    const UnfoldingModel m = reference_config().unfolding;
    const double e = 1e-6;
    auto fd = [&](auto f, double x) { return (f(m, x + e) - f(m, x - e)) / (2 * e); };
    CHECK(fd(g_curve, m.Pw1) > 0);
    CHECK(fd(g_curve, m.Pw2()) < 0);
    CHECK(fd(h_curve, m.Pv1()) < 0);
    CHECK(fd(h_curve, m.Pv2()) > 0);
    for (double x : {0.1, 1.3, 2.9, 4.4, 6.0})
        CHECK(g_prime(m, x) == doctest::Approx(fd(g_curve, x)).epsilon(1e-8));
}

TEST_CASE("angle helpers") {
    CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
    CHECK(wrap_angle(kTwoPi) == 0.0);
    CHECK(circular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
    CHECK(wrap_near(7.0, 0.0) == doctest::Approx(7.0 - kTwoPi));
    SectionPoint p{SectionId::InV, 3 * kTwoPi + 1.0, 0.5, 1};
    CHECK(p.winding() == 3);
    CHECK(p.wrapped() == doctest::Approx(1.0));
}

TEST_CASE("config text round trip") {
    ModelConfig c = reference_config();
    c.unfolding.lambda = 0.0123456789012345;
    c.numeric.seed = 99;
    c.saddles.C_v = 2.5;
    const ModelConfig back = parse_config(format_config(c));
    CHECK(back.unfolding.lambda == c.unfolding.lambda);
    CHECK(back.numeric.seed == 99);
    CHECK(back.saddles.C_v == 2.5);
    CHECK(format_config(back) == format_config(c));
}

TEST_CASE("config errors") {
    auto code_of = [](const char* text) {
        try {
            parse_config(text);
        } catch (const BykovError& e) {
            return e.code();
        }
        return ErrorCode::Precondition;
    };
    CHECK(code_of("bogus = 1\n") == ErrorCode::ConfigError);
    CHECK(code_of("lambda = 1\nlambda = 2\n") == ErrorCode::ConfigError);
    CHECK(code_of("lambda = abc\n") == ErrorCode::ConfigError);
    CHECK(code_of("lambda\n") == ErrorCode::ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/bykov.cfg"), std::ios_base::failure);
}

TEST_CASE("fmt17 round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0})
        CHECK(std::stod(fmt17(v)) == v);
}
