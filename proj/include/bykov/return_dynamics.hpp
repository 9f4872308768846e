#pragma once

#include <string>
#include <vector>

#include "bykov/core_model.hpp"
#include "bykov/linalg.hpp"

namespace bykov {

enum class ReturnStatus { Returned, Escaped, OnStableManifold };

const char* status_name(ReturnStatus s);

// connection 1 <-> P_v^1 / P_w^1, 2 <-> P_v^2 / P_w^2; sheet is the sign of the
// height the step started from.
struct Symbol {
    int connection = 1;
    int sheet = 1;
    bool operator==(const Symbol&) const = default;
};

std::string symbol_text(const Symbol& s);  // "1+", "2-", ...

struct ReturnOutcome {
    ReturnStatus status = ReturnStatus::Returned;
    SectionPoint next;  // angle wrapped into [0, 2pi)
    Symbol symbol;
    long winding = 0;
    double advance = 0.0;  // unwrapped angle of next minus angle of the input
};

// (x, y) -> (x - K ln|y| - ln(gain)/E_w, sign(y) gain^dw |y|^d)
SectionPoint eta(const SectionPoint& p, const ModelConfig& c);
SectionPoint eta_composed(const SectionPoint& p, const ModelConfig& c);
Mat2 d_eta(const SectionPoint& p, const ModelConfig& c);

// Symbol 1 when the Out(w) angle is circularly at least as close to P_w^1 as to P_w^2.
int connection_symbol(double outw_angle, const UnfoldingModel& m);

ReturnOutcome zeta(const SectionPoint& p, const ModelConfig& c);
// Unwrapped image psi_wv(eta(p)); throws OnStableManifold below y_floor.
SectionPoint zeta_lift(const SectionPoint& p, const ModelConfig& c);
Mat2 d_zeta(const SectionPoint& p, const ModelConfig& c);
// zeta is injective; the inverse is explicit. Throws OnStableManifold when the
// preimage would lie on y = 0.
SectionPoint zeta_inverse(const SectionPoint& q, const ModelConfig& c);

struct Orbit {
    SectionPoint start;
    std::vector<ReturnOutcome> steps;

    std::vector<Symbol> itinerary() const;  // symbols of the Returned steps
    bool completed(std::size_t k) const;
};

Orbit iterate(const SectionPoint& p, const ModelConfig& c, int k);

std::string orbit_csv(const Orbit& orbit);

}  // namespace bykov
