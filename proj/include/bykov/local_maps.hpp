#pragma once

#include <string>
#include <vector>

#include "bykov/core_model.hpp"
#include "bykov/linalg.hpp"

namespace bykov {

enum class CurveKind { Segment, Spiral, Helix, Unclassified };

const char* curve_kind_name(CurveKind k);

struct CurveSample {
    std::vector<SectionPoint> points;
    CurveKind kind = CurveKind::Unclassified;
};

// In(v) -> Out(v): (x, y) -> (|y|^dv, x - ln|y| / E_v), sheet = sign(y).
SectionPoint phi_v(const SectionPoint& p, const ModelConfig& c);
// In(w) -> Out(w): (r, phi) -> (phi - ln r / E_w, sheet * r^dw).
SectionPoint phi_w(const SectionPoint& p, const ModelConfig& c);

// Disc coordinates enter the Jacobians in (r, phi) order, although a disc
// SectionPoint keeps phi in `a` and r in `b`.
Mat2 d_phi_v(const SectionPoint& p, const ModelConfig& c);
Mat2 d_phi_w(const SectionPoint& p, const ModelConfig& c);

CurveKind classify_curve(const CurveSample& curve);

std::string curve_csv(const CurveSample& curve);

}  // namespace bykov
