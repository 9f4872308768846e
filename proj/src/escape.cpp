#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <random>

#include "bykov/chaos_analysis.hpp"

namespace bykov {

bool SurvivalCurve::strictly_decreasing() const {
    for (std::size_t j = 1; j < fraction.size(); ++j)
        if (!(fraction[j] < fraction[j - 1])) return false;
    return fraction.size() >= 2;
}

bool SurvivalCurve::non_increasing() const {
    for (std::size_t j = 1; j < fraction.size(); ++j)
        if (fraction[j] > fraction[j - 1]) return false;
    return true;
}

namespace {

// 53-bit uniform in [0, 1); std::uniform_real_distribution is not portable across
// standard libraries.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void fit_decay(SurvivalCurve& s) {
    std::vector<double> js, ls;
    for (std::size_t j = 1; j < s.fraction.size(); ++j)
        if (s.fraction[j] > 0) {
            js.push_back(static_cast<double>(j));
            ls.push_back(std::log(s.fraction[j]));
        }
    const std::size_t n = js.size();
    if (n < 3) return;
    double mj = 0, ml = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mj += js[i];
        ml += ls[i];
    }
    mj /= n;
    ml /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (js[i] - mj) * (js[i] - mj);
        sxy += (js[i] - mj) * (ls[i] - ml);
    }
    const double slope = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ls[i] - (ml + slope * (js[i] - mj));
        rss += e * e;
    }
    const double se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
    const boost::math::students_t dist(static_cast<double>(n - 2));
    const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
    s.rate = std::exp(slope);
    s.rate_lo = std::exp(slope - t * se);
    s.rate_hi = std::exp(slope + t * se);
    s.fit_ok = true;
}

bool in_region(const SectionPoint& p, const std::vector<Rectangle>& region) {
    if (region.empty()) return true;
    for (const auto& r : region)
        if (r.contains(p)) return true;
    return false;
}

}  // namespace

SurvivalCurve survival_of_points(const std::vector<SectionPoint>& points, const std::vector<Rectangle>& region,
                                 int horizon, const ModelConfig& c) {
    if (horizon < 0) throw BykovError(ErrorCode::Precondition, "escape_experiment: negative horizon");
    if (points.empty()) throw BykovError(ErrorCode::Precondition, "escape_experiment: no points");
    std::vector<long> alive(static_cast<std::size_t>(horizon) + 1, 0);
    for (const auto& p0 : points) {
        SectionPoint p = p0;
        ++alive[0];
        for (int j = 1; j <= horizon; ++j) {
            const ReturnOutcome r = zeta(p, c);
            if (r.status != ReturnStatus::Returned || !in_region(r.next, region)) break;
            ++alive[static_cast<std::size_t>(j)];
            p = r.next;
        }
    }
    SurvivalCurve s;
    s.samples = static_cast<int>(points.size());
    for (long a : alive) s.fraction.push_back(static_cast<double>(a) / static_cast<double>(points.size()));
    fit_decay(s);
    return s;
}

SurvivalCurve escape_experiment(const std::vector<Rectangle>& rects, int samples, int horizon,
                                const ModelConfig& c) {
    if (samples < 1000) throw BykovError(ErrorCode::Precondition, "escape_experiment: needs N >= 1000");
    if (rects.empty()) throw BykovError(ErrorCode::Precondition, "escape_experiment: no rectangles");
    std::vector<double> cum;
    double total = 0;
    for (const auto& r : rects) {
        if (!(r.x_lo < r.x_hi) || !(r.y_lo < r.y_hi))
            throw BykovError(ErrorCode::Precondition, "rectangle " + r.label + " is malformed");
        total += (r.x_hi - r.x_lo) * (r.y_hi - r.y_lo);
        cum.push_back(total);
    }
    std::mt19937_64 rng(c.numeric.seed);
    std::vector<SectionPoint> pts;
    pts.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double pick = uniform01(rng) * total;
        std::size_t k = 0;
        while (k + 1 < cum.size() && pick >= cum[k]) ++k;
        const Rectangle& r = rects[k];
        const double x = r.x_lo + (r.x_hi - r.x_lo) * uniform01(rng);
        const double y = r.y_lo + (r.y_hi - r.y_lo) * uniform01(rng);
        pts.push_back({SectionId::InV, x, y, y > 0 ? 1 : -1});
    }
    return survival_of_points(pts, rects, horizon, c);
}

}  // namespace bykov
