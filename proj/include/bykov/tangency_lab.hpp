#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "bykov/chaos_analysis.hpp"
#include "bykov/core_model.hpp"

namespace bykov {

// eta(x_*, lambda) on Out(w), angle unwrapped.
SectionPoint fold_point(double lambda, const ModelConfig& c);

// Points of the h-curve are (x_* + s, h(x_* + s)), |s| < pi/2. The profile is
// s -> second coordinate of zeta on that curve, restricted to the preimage of
// the Out(w) angle window [fold angle, fold angle + window].
struct ProfileSample {
    double s = 0;
    double value = 0;
};

struct ReturnProfile {
    double lambda = 0;
    double s_fold = 0;  // turning point of the Out(w) angle along the curve
    double s_lo = 0, s_hi = 0;
    std::vector<ProfileSample> samples;
    double s_min = 0;
    double min_value = 0;
    double slope_at_min = 0;
    bool interior_min = false;
};

ReturnProfile curve_return_profile(double lambda, double window, int resolution, const ModelConfig& c);

// The default window: half the spacing of the connection angles.
double fold_window(const ModelConfig& c);

struct TangencyRecord {
    double lambda_star = 0;
    double lambda_lo = 0, lambda_hi = 0;  // alignment window [lambda_2, lambda_1]
    long winding = 0;
    double touch_x = 0, touch_y = 0;      // on In(v)
    double preimage_x = 0, preimage_y = 0;  // touching point on the h-curve
    double s_fold = 0;
    double value_residual = 0, slope_residual = 0;
};

// Alignment window of winding k: the fold angle passes x_m + 2 pi k at
// lambda_1 and the middle of the negative g-arc at lambda_2.
std::pair<double, double> alignment_window(long k, const ModelConfig& c);

std::vector<TangencyRecord> find_tangencies(double lambda_hi, double lambda_lo, const ModelConfig& c);

enum class Stability { Sink, Saddle, Source, Nonhyperbolic };
const char* stability_name(Stability s);

struct PeriodicOrbit {
    std::vector<SectionPoint> points;
    int period = 0;
    double lambda = 0;
    std::array<std::complex<double>, 2> multipliers{};
    double det = 0;
    double residual = 0;
    Stability tag = Stability::Nonhyperbolic;
    bool verified = false;     // sinks: perturbed start contracts over 50 periods
    double contraction = 0;    // final / initial distance of that test
};

std::vector<PeriodicOrbit> find_periodic_sinks(const TangencyRecord& record, int period_max,
                                               const ModelConfig& c);

struct HyperbolicityScan {
    std::vector<double> thresholds;  // pass above, fail below
    bool pass_at_hi = false;
    bool pass_at_lo = false;
};

HyperbolicityScan horseshoe_tangency_scan(const Rectangle& rect, double lambda_lo, double lambda_hi,
                                          const ModelConfig& c);

}  // namespace bykov
