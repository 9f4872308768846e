#include "bykov/return_dynamics.hpp"

#include "bykov/global_maps.hpp"
#include "bykov/local_maps.hpp"

namespace bykov {

const char* status_name(ReturnStatus s) {
    switch (s) {
        case ReturnStatus::Returned: return "Returned";
        case ReturnStatus::Escaped: return "Escaped";
        case ReturnStatus::OnStableManifold: return "OnStableManifold";
    }
    return "?";
}

std::string symbol_text(const Symbol& s) {
    return std::to_string(s.connection) + (s.sheet > 0 ? "+" : "-");
}

namespace {

void require_inv(const SectionPoint& p, const char* op) {
    if (p.section != SectionId::InV)
        throw BykovError(ErrorCode::Precondition, std::string(op) + ": point is not on InV");
}

}  // namespace

SectionPoint eta(const SectionPoint& p, const ModelConfig& c) {
    require_inv(p, "eta");
    const double ay = std::abs(p.b);
    if (!(ay >= c.numeric.y_floor))
        throw BykovError(ErrorCode::OnStableManifold, "eta: |y| below y_floor");
    const auto& s = c.saddles;
    const int sheet = p.b > 0 ? 1 : -1;
    const double x = p.a - s.K() * std::log(ay) - std::log(c.psi_vw_gain) / s.E_w;
    const double y = sheet * std::pow(c.psi_vw_gain, s.delta_w()) * std::pow(ay, s.delta());
    return {SectionId::OutW, x, y, sheet};
}

SectionPoint eta_composed(const SectionPoint& p, const ModelConfig& c) {
    return phi_w(psi_vw(phi_v(p, c), c), c);
}

Mat2 d_eta(const SectionPoint& p, const ModelConfig& c) {
    require_inv(p, "d_eta");
    const double y = p.b;
    if (!(std::abs(y) >= c.numeric.y_floor))
        throw BykovError(ErrorCode::OnStableManifold, "d_eta: |y| below y_floor");
    const auto& s = c.saddles;
    const double G = std::pow(c.psi_vw_gain, s.delta_w());
    return {1.0, -s.K() / y, 0.0, G * s.delta() * std::pow(std::abs(y), s.delta() - 1.0)};
}

int connection_symbol(double outw_angle, const UnfoldingModel& m) {
    return circular_distance(outw_angle, m.Pw1) <= circular_distance(outw_angle, m.Pw2()) ? 1 : 2;
}

SectionPoint zeta_lift(const SectionPoint& p, const ModelConfig& c) {
    return psi_wv(eta(p, c), c.unfolding);
}

ReturnOutcome zeta(const SectionPoint& p, const ModelConfig& c) {
    require_inv(p, "zeta");
    ReturnOutcome out;
    out.next = p;
    if (!(std::abs(p.b) >= c.numeric.y_floor)) {
        out.status = ReturnStatus::OnStableManifold;
        return out;
    }
    const SectionPoint e = eta(p, c);
    SectionPoint q = psi_wv(e, c.unfolding);
    const double advance = e.a - p.a;
    out.winding = std::max(0L, static_cast<long>(std::floor(advance / kTwoPi)));
    out.symbol = {connection_symbol(e.a, c.unfolding), p.b > 0 ? 1 : -1};
    out.advance = q.a - p.a;
    q.a = wrap_angle(q.a);
    out.next = q;
    out.status = std::abs(q.b) > c.numeric.y_max ? ReturnStatus::Escaped : ReturnStatus::Returned;
    return out;
}

Mat2 d_zeta(const SectionPoint& p, const ModelConfig& c) {
    return d_psi_wv(eta(p, c), c.unfolding) * d_eta(p, c);
}

SectionPoint zeta_inverse(const SectionPoint& q, const ModelConfig& c) {
    require_inv(q, "zeta_inverse");
    const auto& s = c.saddles;
    const double z = q.b - h_curve(c.unfolding, q.a);
    if (z == 0.0) throw BykovError(ErrorCode::OnStableManifold, "zeta_inverse: preimage on y = 0");
    const double G = std::pow(c.psi_vw_gain, s.delta_w());
    const double ay = std::pow(std::abs(z) / G, 1.0 / s.delta());
    const double x = q.a - c.unfolding.Delta + s.K() * std::log(ay) + std::log(c.psi_vw_gain) / s.E_w;
    const int sheet = z > 0 ? 1 : -1;
    return {SectionId::InV, x, sheet * ay, sheet};
}

std::vector<Symbol> Orbit::itinerary() const {
    std::vector<Symbol> out;
    for (const auto& s : steps)
        if (s.status == ReturnStatus::Returned) out.push_back(s.symbol);
    return out;
}

bool Orbit::completed(std::size_t k) const {
    if (steps.size() < k) return false;
    for (std::size_t i = 0; i < k; ++i)
        if (steps[i].status != ReturnStatus::Returned) return false;
    return true;
}

Orbit iterate(const SectionPoint& p, const ModelConfig& c, int k) {
    if (k < 1) throw BykovError(ErrorCode::Precondition, "iterate: k must be >= 1");
    Orbit orbit{p, {}};
    orbit.steps.reserve(static_cast<std::size_t>(k));
    SectionPoint cur = p;
    for (int i = 0; i < k; ++i) {
        ReturnOutcome r = zeta(cur, c);
        orbit.steps.push_back(r);
        if (r.status != ReturnStatus::Returned) break;
        cur = r.next;
    }
    return orbit;
}

std::string orbit_csv(const Orbit& orbit) {
    std::string out = "step,x_unwrapped,y,sheet,symbol,winding,status\n";
    out += "0," + fmt17(orbit.start.a) + "," + fmt17(orbit.start.b) + "," +
           std::to_string(orbit.start.sheet) + ",,,start\n";
    double lift = orbit.start.a;
    int step = 1;
    for (const auto& s : orbit.steps) {
        const bool has_next = s.status != ReturnStatus::OnStableManifold;
        lift += s.advance;
        out += std::to_string(step++) + ",";
        if (has_next) {
            out += fmt17(lift) + "," + fmt17(s.next.b) + "," +
                   std::to_string(s.next.sheet) + "," + symbol_text(s.symbol) + ",";
        } else {
            out += ",,,,";
        }
        out += std::to_string(s.winding) + "," + status_name(s.status) + "\n";
    }
    return out;
}

}  // namespace bykov
