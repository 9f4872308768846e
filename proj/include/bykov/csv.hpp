#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bykov/chaos_analysis.hpp"
#include "bykov/core_model.hpp"
#include "bykov/tangency_lab.hpp"

namespace bykov {

// '#'-prefixed block with the command line label and the resolved config.
std::string provenance_header(const ModelConfig& c, std::string_view command);

std::string validation_text(const ValidationReport& r);
std::string survival_csv(const SurvivalCurve& s);
std::string tangency_table(const std::vector<TangencyRecord>& records);
std::string periodic_table(const std::vector<PeriodicOrbit>& orbits);
std::string horseshoe_text(const Horseshoe& h, const ConeReport& cone);

}  // namespace bykov
