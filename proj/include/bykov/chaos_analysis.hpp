#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "bykov/core_model.hpp"
#include "bykov/local_maps.hpp"
#include "bykov/return_dynamics.hpp"

namespace bykov {

struct HeightInterval {
    double x0 = 0;
    double lo = 0, hi = 0;
    int n = 0;
    int m = 0;  // turn offset: endpoint images sit at P_w + 2(m+n)pi
};

std::vector<HeightInterval> interval_sequence(double x0, int count, const ModelConfig& c);
bool intervals_disjoint(const std::vector<HeightInterval>& intervals);

struct CrossingReport {
    int count = 0;
    bool tangency_suspected = false;
    std::vector<double> crossings;   // parameter values of transverse crossings
    std::vector<double> tangencies;  // parameter values of near-touches
    double min_abs = 0;              // smallest |f| seen, sampled or refined
    int evaluations = 0;
};

// Sign changes of f on [s0, s1]; |f| <= tol counts as zero. Local minima of
// |f| are refined by golden section, which exposes hidden crossing pairs and
// touches. Throws InsufficientResolution once `budget` evaluations are spent.
CrossingReport count_sign_changes(const std::function<double(double)>& f, double s0, double s1,
                                  int samples, double tol, int budget = 1 << 20);

// Crossings of a parametrised Out(w) curve with the graph y = g(x).
CrossingReport crossing_count(const std::function<SectionPoint(double)>& curve, double s0, double s1,
                              int samples, const ModelConfig& c);
// Same test on a fixed sample, linear between samples.
CrossingReport crossing_count(const CurveSample& curve, const ModelConfig& c);

struct Rectangle {
    double x_lo = 0, x_hi = 0;
    double y_lo = 0, y_hi = 0;
    std::string label;

    bool contains(const SectionPoint& p) const;  // angle compared modulo 2pi
    double x_mid() const { return 0.5 * (x_lo + x_hi); }
};

struct TransitionMatrix {
    std::vector<std::vector<int>> entries;

    std::size_t size() const { return entries.size(); }
    bool all_ones() const;
    std::string text() const;  // rows of 0/1
};

struct CrossingCertificate {
    int from = 0, to = 0;
    int strips_left = 0, strips_right = 0;  // full vertical crossings of the edge images
    bool stray_strip = false;               // some edge image meets R_to without crossing it
    bool horizontal_clear = false;          // top/bottom edge images miss R_to
    double separation = 0;                  // smallest height gap on windows that miss R_to
    bool full = false;
};

struct Horseshoe {
    std::vector<Rectangle> rects;
    TransitionMatrix matrix;
    std::vector<CrossingCertificate> certificates;
    int k0 = 0;  // ladder index of R_0
};

// Return-pass ladder p_k = exp((P_v1 - P_w1 - ln(gain)/E_w - 2 pi k)/K).
double ladder_height(int k, const ModelConfig& c);
std::vector<Rectangle> horseshoe_rectangles(const std::vector<int>& n_range, double tau,
                                            const ModelConfig& c, int* k0 = nullptr);
CrossingCertificate certify_crossing(const std::vector<Rectangle>& rects, int i, int j,
                                     const ModelConfig& c);
Horseshoe build_horseshoe(const std::vector<int>& n_range, double tau, const ModelConfig& c);

struct ConeReport {
    bool input_ok = true;
    std::string reason;
    double mu = 0;  // min expansion over sampled points, rectangle charts
    int points = 0;
    int cone_violations = 0;
    int full_pairs = 0;
    int partial_pairs = 0;
    bool pass = false;
};

ConeReport cone_hyperbolicity(const std::vector<Rectangle>& rects, double cone_slope, int grid,
                              const ModelConfig& c);

struct MultipulseConnection {
    double x = 0, y = 0;  // point on the h-curve
    int branch = 0;       // -1 left of x_*, +1 right of x_*
    long winding = 0;
    bool tangential = false;
};

std::vector<MultipulseConnection> find_multipulse(const ModelConfig& c, int max_winding);

std::vector<Symbol> parse_word(std::string_view text);  // "1+,2-,..."
std::string word_text(const std::vector<Symbol>& word);

struct ItineraryResult {
    SectionPoint point;
    Orbit orbit;
    std::vector<Symbol> word;
    std::size_t matched = 0;
    std::string transcript;
};

ItineraryResult realize_itinerary(const std::vector<Symbol>& word, const ModelConfig& c);

struct SurvivalCurve {
    int samples = 0;
    std::vector<double> fraction;  // index j = after j returns; fraction[0] = 1
    bool fit_ok = false;
    double rate = 0, rate_lo = 0, rate_hi = 0;  // geometric decay rate, 95% interval

    bool strictly_decreasing() const;
    bool non_increasing() const;
};

SurvivalCurve escape_experiment(const std::vector<Rectangle>& rects, int samples, int horizon,
                                const ModelConfig& c);
// Empty region means all of In(v); points die only on escape or W^s.
SurvivalCurve survival_of_points(const std::vector<SectionPoint>& points,
                                 const std::vector<Rectangle>& region, int horizon,
                                 const ModelConfig& c);

}  // namespace bykov
