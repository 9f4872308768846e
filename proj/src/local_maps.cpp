#include "bykov/local_maps.hpp"

#include <cmath>

namespace bykov {

const char* curve_kind_name(CurveKind k) {
    switch (k) {
        case CurveKind::Segment: return "segment";
        case CurveKind::Spiral: return "spiral";
        case CurveKind::Helix: return "helix";
        case CurveKind::Unclassified: return "unclassified";
    }
    return "?";
}

namespace {

void expect_section(const SectionPoint& p, SectionId s, const char* op) {
    if (p.section != s)
        throw BykovError(ErrorCode::Precondition,
                         std::string(op) + ": point is on " + section_name(p.section) + ", expected " +
                             section_name(s));
}

void check_height(double y, const ModelConfig& c, const char* op) {
    if (!(std::abs(y) >= c.numeric.y_floor))
        throw BykovError(ErrorCode::OnStableManifold,
                         std::string(op) + ": |" + fmt17(y) + "| below y_floor");
}

}  // namespace

SectionPoint phi_v(const SectionPoint& p, const ModelConfig& c) {
    expect_section(p, SectionId::InV, "phi_v");
    check_height(p.b, c, "phi_v");
    const double ay = std::abs(p.b);
    return {SectionId::OutV, p.a - std::log(ay) / c.saddles.E_v,
            std::pow(ay, c.saddles.delta_v()), p.b > 0 ? 1 : -1};
}

SectionPoint phi_w(const SectionPoint& p, const ModelConfig& c) {
    expect_section(p, SectionId::InW, "phi_w");
    check_height(p.b, c, "phi_w");
    return {SectionId::OutW, p.a - std::log(p.b) / c.saddles.E_w,
            p.sheet * std::pow(p.b, c.saddles.delta_w()), p.sheet};
}

Mat2 d_phi_v(const SectionPoint& p, const ModelConfig& c) {
    expect_section(p, SectionId::InV, "d_phi_v");
    check_height(p.b, c, "d_phi_v");
    const double y = p.b, dv = c.saddles.delta_v();
    return {0.0, dv * std::pow(std::abs(y), dv - 1.0) * (y > 0 ? 1.0 : -1.0),
            1.0, -1.0 / (c.saddles.E_v * y)};
}

Mat2 d_phi_w(const SectionPoint& p, const ModelConfig& c) {
    expect_section(p, SectionId::InW, "d_phi_w");
    check_height(p.b, c, "d_phi_w");
    const double r = p.b, dw = c.saddles.delta_w();
    return {-1.0 / (c.saddles.E_w * r), 1.0, p.sheet * dw * std::pow(r, dw - 1.0), 0.0};
}

namespace {

// +1 strictly increasing, -1 strictly decreasing, 0 otherwise.
template <class F>
int strict_direction(const std::vector<SectionPoint>& pts, F get) {
    int dir = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = get(pts[i]) - get(pts[i - 1]);
        const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
        if (s == 0) return 0;
        if (dir == 0) dir = s;
        else if (s != dir) return 0;
    }
    return dir;
}

}  // namespace

CurveKind classify_curve(const CurveSample& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 8)
        throw BykovError(ErrorCode::TooFewSamples,
                         "classify_curve needs at least 8 samples, got " + std::to_string(pts.size()));
    for (const auto& p : pts)
        if (p.section != pts.front().section)
            throw BykovError(ErrorCode::Precondition, "classify_curve: mixed sections");

    const int da = strict_direction(pts, [](const SectionPoint& p) { return p.a; });
    const int db = strict_direction(pts, [](const SectionPoint& p) { return p.b; });
    const double span = std::abs(pts.back().a - pts.front().a);

    if (da != 0 && db != 0 && span < kTwoPi) return CurveKind::Segment;
    if (da != 0 && db != 0 && span >= 2.0 * kTwoPi) {
        const bool disc = pts.front().section == SectionId::OutV || pts.front().section == SectionId::InW;
        return disc ? CurveKind::Spiral : CurveKind::Helix;
    }
    return CurveKind::Unclassified;
}

std::string curve_csv(const CurveSample& curve) {
    std::string out = "section,a_unwrapped,b,sheet\n";
    for (const auto& p : curve.points)
        out += std::string(section_name(p.section)) + "," + fmt17(p.a) + "," + fmt17(p.b) + "," +
               std::to_string(p.sheet) + "\n";
    return out;
}

}  // namespace bykov
