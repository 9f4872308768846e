#pragma once

#include "bykov/core_model.hpp"
#include "bykov/linalg.hpp"

namespace bykov {

// Out(v) -> In(w). Identity times the optional radial gain (1 by default).
SectionPoint psi_vw(const SectionPoint& p, const ModelConfig& c);
SectionPoint psi_vw(const SectionPoint& p);

// Out(w) -> In(v): rotation by Delta followed by the shear y -> y - g(x).
// The angle stays unwrapped.
SectionPoint psi_wv(const SectionPoint& p, const UnfoldingModel& m);
Mat2 d_psi_wv(const SectionPoint& p, const UnfoldingModel& m);

}  // namespace bykov
