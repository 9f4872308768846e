#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "bykov/chaos_analysis.hpp"
#include "bykov/tangency_lab.hpp"

using namespace bykov;

namespace {

const ModelConfig cfg = reference_config();
const UnfoldingModel& um = cfg.unfolding;

SectionPoint inv(double x, double y) { return {SectionId::InV, x, y, y < 0 ? -1 : 1}; }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const BykovError& e) {
        return e.code();
    }
    return ErrorCode::Precondition;
}

bool in_rect(const Rectangle& r, const SectionPoint& p) {
    const double x = r.x_lo + wrap_angle(p.a - r.x_lo);
    return x <= r.x_hi && p.b >= r.y_lo && p.b <= r.y_hi;
}

}  // namespace

TEST_CASE("first height interval") {
    const auto iv = interval_sequence(0.0, 3, cfg);
    REQUIRE(iv.size() == 3);
    CHECK(iv[0].m == 1);
    CHECK(iv[0].lo == doctest::Approx(std::exp(-kPi)).epsilon(1e-14));
    CHECK(iv[0].hi == doctest::Approx(std::exp(-2 * kPi / 3)).epsilon(1e-14));

    const SectionPoint a = eta(inv(0, iv[0].hi), cfg), b = eta(inv(0, iv[0].lo), cfg);
    CHECK(std::abs(a.a - 2 * kPi) < 1e-10);
    CHECK(std::abs(b.a - 3 * kPi) < 1e-10);
    CHECK(a.b == doctest::Approx(std::exp(-8 * kPi / 3)).epsilon(1e-12));
    CHECK(b.b == doctest::Approx(std::exp(-4 * kPi)).epsilon(1e-12));
    CHECK(a.b < um.lambda);
    CHECK(b.b < um.lambda);

    CHECK(iv[1].lo == doctest::Approx(0.00532).epsilon(2e-3));
    CHECK(iv[1].hi == doctest::Approx(0.01515).epsilon(2e-3));
    CHECK(iv[1].hi < iv[0].lo);
}

TEST_CASE("interval endpoint law, scaling and disjointness") {
    const double r = std::exp(-kTwoPi / 3);
    for (double x0 : {0.0, 0.7, um.Pv1(), 4.0}) {
        const auto iv = interval_sequence(x0, 6, cfg);
        CHECK(intervals_disjoint(iv));
        for (std::size_t n = 0; n < iv.size(); ++n) {
            const double k = static_cast<double>(iv[n].m + iv[n].n);
            CHECK(std::abs(eta(inv(x0, iv[n].lo), cfg).a - (um.Pw2() + 2 * k * kPi)) < 1e-10);
            CHECK(std::abs(eta(inv(x0, iv[n].hi), cfg).a - (um.Pw1 + 2 * k * kPi)) < 1e-10);
            if (n + 1 < iv.size()) {
                CHECK(iv[n + 1].hi < iv[n].lo);
                CHECK(std::abs(iv[n + 1].lo / iv[n].lo - r) < 1e-12);
                CHECK(std::abs(iv[n + 1].hi / iv[n].hi - r) < 1e-12);
            }
        }
    }
    CHECK(code_of([] { interval_sequence(0, 2, cfg.with_lambda(0)); }) == ErrorCode::DegenerateUnfolding);
}

TEST_CASE("disjointness predicate") {
    std::vector<HeightInterval> overlap{{0, 0.1, 0.3, 0, 0}, {0, 0.05, 0.15, 1, 0}};
    CHECK_FALSE(intervals_disjoint(overlap));
    std::vector<HeightInterval> apart{{0, 0.1, 0.3, 0, 0}, {0, 0.01, 0.05, 1, 0}};
    CHECK(intervals_disjoint(apart));
}

TEST_CASE("eta(I0) crosses the g-graph twice") {
    const auto iv = interval_sequence(0.0, 1, cfg);
    auto curve = [&](double s) { return eta(inv(0, std::exp(s)), cfg); };
    const double s0 = std::log(iv[0].lo), s1 = std::log(iv[0].hi);
    const CrossingReport r = crossing_count(curve, s0, s1, 512, cfg);
    CHECK(r.count == 2);
    CHECK_FALSE(r.tangency_suspected);

    // dense-sampling oracle
    int changes = 0;
    double prev = 0;
    for (int i = 0; i <= 200000; ++i) {
        const SectionPoint p = curve(s0 + (s1 - s0) * i / 200000.0);
        const double f = p.b - g_curve(um, p.a);
        if (i > 0 && (f > 0) != (prev > 0)) ++changes;
        prev = f;
    }
    CHECK(changes == 2);
}

TEST_CASE("horizontal segments") {
    auto line = [](double h) {
        return [h](double s) { return SectionPoint{SectionId::OutW, s, h, 1}; };
    };
    const CrossingReport above = crossing_count(line(2 * um.lambda), 0, kTwoPi, 256, cfg);
    CHECK(above.count == 0);
    CHECK_FALSE(above.tangency_suspected);

    const CrossingReport touch = crossing_count(line(um.lambda), um.x_m() - 1, um.x_m() + 1.3, 256, cfg);
    CHECK(touch.tangency_suspected);

    CurveSample sampled;
    for (int i = 0; i <= 64; ++i) sampled.points.push_back({SectionId::OutW, kTwoPi * i / 64, 2 * um.lambda, 1});
    CHECK(crossing_count(sampled, cfg).count == 0);
}

TEST_CASE("horseshoe on two rectangles") {
    const Horseshoe h = build_horseshoe({0, 1}, 0.05, cfg);
    REQUIRE(h.rects.size() == 2);
    CHECK(h.matrix.all_ones());
    CHECK(h.matrix.text() == "1 1\n1 1\n");
    for (const auto& r : h.rects) {
        CHECK(r.x_lo == doctest::Approx(um.Pv1() - 0.05));
        CHECK(r.x_hi == doctest::Approx(um.Pv1() + 0.05));
        CHECK(r.y_lo < r.y_hi);
    }
    CHECK((h.rects[1].y_hi < h.rects[0].y_lo || h.rects[0].y_hi < h.rects[1].y_lo));

    // every vertical line of R_i has an image point inside R_j: bracket the
    // image height against the middle of R_j while the angle is in its window
    std::mt19937_64 rng(21);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            const Rectangle& a = h.rects[i];
            const Rectangle& b = h.rects[j];
            const double mid = 0.5 * (b.y_lo + b.y_hi);
            std::uniform_real_distribution<double> ux(a.x_lo, a.x_hi);
            int hit_lines = 0;
            for (int t = 0; t < 100; ++t) {
                const double x = ux(rng);
                auto img = [&](double u) { return zeta_lift(inv(x, std::exp(u)), cfg); };
                const double u0 = std::log(a.y_lo), u1 = std::log(a.y_hi);
                bool hit = false;
                double prev = img(u0).b - mid;
                for (int s = 1; s <= 2000 && !hit; ++s) {
                    const double ul = u0 + (u1 - u0) * (s - 1) / 2000.0, ur = u0 + (u1 - u0) * s / 2000.0;
                    const double cur = img(ur).b - mid;
                    if ((prev > 0) != (cur > 0)) {
                        double lo = ul, hi = ur;
                        const bool lo_pos = prev > 0;
                        for (int it = 0; it < 80; ++it) {
                            const double m = 0.5 * (lo + hi);
                            ((img(m).b - mid > 0) == lo_pos ? lo : hi) = m;
                        }
                        hit = in_rect(b, img(0.5 * (lo + hi)));
                    }
                    prev = cur;
                }
                hit_lines += hit;
            }
            CHECK(hit_lines == 100);
        }

    const Horseshoe one = build_horseshoe({0}, 0.05, cfg);
    CHECK(one.matrix.text() == "1\n");

    CHECK(code_of([] { build_horseshoe({0, 1}, 1.5, cfg); }) == ErrorCode::Precondition);
}

TEST_CASE("cone field") {
    const Horseshoe h = build_horseshoe({0, 1}, 0.05, cfg);
    const ConeReport r0 = cone_hyperbolicity({h.rects[0]}, 1.0, 50, cfg);
    CHECK(r0.input_ok);
    CHECK(r0.mu > 1);
    CHECK(r0.pass);

    // heights where the image sweeps the whole fold of the g-graph
    const Rectangle fold{um.x_star() - 0.3, um.x_star() + 0.3, 0.15 * um.lambda, 1.5 * um.lambda, "F"};
    const ConeReport rf = cone_hyperbolicity({fold}, 1.0, 50, cfg);
    CHECK(rf.input_ok);
    CHECK_FALSE(rf.pass);

    const ConeReport bad = cone_hyperbolicity(h.rects, 0.0, 50, cfg);
    CHECK_FALSE(bad.input_ok);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("multipulse connections") {
    const auto conns = find_multipulse(cfg, 6);
    REQUIRE_FALSE(conns.empty());
    std::map<std::pair<int, long>, int> per_band;
    for (const auto& m : conns) {
        CHECK(m.winding <= 6);
        CHECK(std::abs(m.y - h_curve(um, m.x)) < 1e-15);
        CHECK(std::abs(zeta_lift(inv(m.x, m.y), cfg).b) < 1e-9);
        ++per_band[{m.branch, m.winding}];
    }
    // bands whose whole height range lies below max h = lambda
    const double K = cfg.saddles.K();
    int full = 0;
    for (const auto& [band, n] : per_band)
        if (kTwoPi * static_cast<double>(band.second) / K >= -std::log(um.lambda)) {
            CHECK(n >= 2);
            ++full;
        }
    CHECK(full >= 6);

    const auto recs = find_tangencies(1e-1, 1e-5, cfg);
    REQUIRE_FALSE(recs.empty());
    const auto at = find_multipulse(cfg.with_lambda(recs[0].lambda_star), 6);
    bool tangential = false;
    for (const auto& m : at) tangential = tangential || m.tangential;
    CHECK(tangential);

    CHECK(code_of([] { find_multipulse(cfg.with_lambda(0), 6); }) == ErrorCode::DegenerateUnfolding);
}

TEST_CASE("itineraries") {
    CHECK(word_text(parse_word("1+,2-,1-,2+")) == "1+,2-,1-,2+");
    CHECK(code_of([] { parse_word("3+"); }) == ErrorCode::Precondition);
    CHECK(code_of([] { realize_itinerary({}, cfg); }) == ErrorCode::Precondition);

    for (const char* w : {"1+,1+,1+,1+,1+,1+,1+,1+", "1+,2+,1+,2+,1+,2+,1+,2+", "1+,2-,1-,2+,2+,1-,2-,1+"}) {
        const auto word = parse_word(w);
        const ItineraryResult r = realize_itinerary(word, cfg);
        CHECK(r.matched == word.size());
        const Orbit o = iterate(r.point, cfg, static_cast<int>(word.size()));
        CHECK(o.completed(word.size()));
        CHECK(o.itinerary() == word);
        CHECK(r.transcript.find("MATCH 8/8") != std::string::npos);
    }
}

TEST_CASE("escape experiment") {
    const auto rects = horseshoe_rectangles({0, 1}, 0.05, cfg);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ModelConfig c = cfg;
        c.numeric.seed = seed;
        const SurvivalCurve s = escape_experiment(rects, 1000, 6, c);
        REQUIRE(s.fraction.size() == 7);
        CHECK(s.fraction[0] == 1.0);
        CHECK(s.non_increasing());
    }
    const SurvivalCurve a = escape_experiment(rects, 2000, 5, cfg);
    const SurvivalCurve b = escape_experiment(rects, 2000, 5, cfg);
    CHECK(a.fraction == b.fraction);

    const SurvivalCurve zero = escape_experiment(rects, 1000, 0, cfg);
    REQUIRE(zero.fraction.size() == 1);
    CHECK(zero.fraction[0] == 1.0);

    CHECK(code_of([&] { escape_experiment(rects, 999, 3, cfg); }) == ErrorCode::Precondition);
}

TEST_CASE("periodic points survive") {
    const auto recs = find_tangencies(1e-1, 1e-5, cfg);
    REQUIRE_FALSE(recs.empty());
    const auto orbits = find_periodic_sinks(recs[0], 2, cfg);
    const PeriodicOrbit* sink = nullptr;
    for (const auto& o : orbits)
        if (o.tag == Stability::Sink && o.verified) sink = &o;
    REQUIRE(sink != nullptr);
    const ModelConfig c = cfg.with_lambda(sink->lambda);
    std::vector<SectionPoint> pts;
    for (int i = 0; i < 1000; ++i) pts.push_back(sink->points[static_cast<std::size_t>(i) % sink->points.size()]);
    const SurvivalCurve s = survival_of_points(pts, {}, 20, c);
    for (double f : s.fraction) CHECK(f == 1.0);
}
