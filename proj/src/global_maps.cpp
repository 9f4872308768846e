#include "bykov/global_maps.hpp"

namespace bykov {

SectionPoint psi_vw(const SectionPoint& p, const ModelConfig& c) {
    if (p.section != SectionId::OutV)
        throw BykovError(ErrorCode::Precondition, "psi_vw: point is not on OutV");
    return {SectionId::InW, p.a, p.b * c.psi_vw_gain, p.sheet};
}

SectionPoint psi_vw(const SectionPoint& p) { return psi_vw(p, reference_config()); }

SectionPoint psi_wv(const SectionPoint& p, const UnfoldingModel& m) {
    if (p.section != SectionId::OutW)
        throw BykovError(ErrorCode::Precondition, "psi_wv: point is not on OutW");
    const double y = p.b - g_curve(m, p.a);
    return {SectionId::InV, p.a + m.Delta, y, y > 0 ? 1 : (y < 0 ? -1 : p.sheet)};
}

Mat2 d_psi_wv(const SectionPoint& p, const UnfoldingModel& m) {
    return {1.0, 0.0, -g_prime(m, p.a), 1.0};
}

}  // namespace bykov
