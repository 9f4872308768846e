#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bykov {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
    OnStableManifold,
    TooFewSamples,
    DegenerateUnfolding,
    InsufficientResolution,
    CrossingUncertain,
    RealizationFailed,
    Precondition,
    ConfigError,
};

const char* error_name(ErrorCode code);

class BykovError : public std::runtime_error {
public:
    BykovError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct SaddleParameters {
    double C_v = 2.0;
    double E_v = 1.0;
    double C_w = 2.0;
    double E_w = 1.0;

    double delta_v() const { return C_v / E_v; }
    double delta_w() const { return C_w / E_w; }
    double delta() const { return delta_v() * delta_w(); }
    double K() const { return (C_v + E_w) / (E_v * E_w); }
};

enum class SectionId { InV, OutV, InW, OutW };

const char* section_name(SectionId s);

// Angle `a` is kept unwrapped; wrapped() and winding() recover the chart angle
// and the number of full turns.
struct SectionPoint {
    SectionId section = SectionId::InV;
    double a = 0.0;
    double b = 0.0;
    int sheet = 1;

    double wrapped() const;
    long winding() const;
};

double wrap_angle(double a);                    // into [0, 2pi)
double wrap_near(double a, double centre);      // into (centre-pi, centre+pi]
double circular_distance(double a, double b);   // in [0, pi]

// Sine model: Pw2 = Pw1 + pi, so only Pw1 is free.
struct UnfoldingModel {
    double lambda = 0.01;
    double Pw1 = 0.0;
    double Delta = kPi / 3.0;

    double Pw2() const { return Pw1 + kPi; }
    double Pv1() const { return Pw1 + Delta; }
    double Pv2() const { return Pw2() + Delta; }
    double x_m() const { return Pw1 + kPi / 2.0; }
    double x_star() const { return Pv1() + 1.5 * kPi; }
};

struct NumericOptions {
    double tol_root = 1e-10;
    double tol_newton = 1e-12;
    int max_iter = 100;
    double y_floor = 1e-14;
    double y_max = 1.0;
    std::uint64_t seed = 1;
};

struct ModelConfig {
    SaddleParameters saddles;
    UnfoldingModel unfolding;
    NumericOptions numeric;
    double psi_vw_gain = 1.0;

    ModelConfig with_lambda(double lambda) const {
        ModelConfig c = *this;
        c.unfolding.lambda = lambda;
        return c;
    }
};

ModelConfig reference_config();

struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<Check> checks;
    double delta_v = 0, delta_w = 0, delta = 0, K = 0;
    bool stability_criterion = false;
    bool disjoint_intervals_regime = false;

    bool ok() const;
};

ValidationReport validate(const ModelConfig& config);

double g_curve(const UnfoldingModel& m, double x);
double g_prime(const UnfoldingModel& m, double x);
double h_curve(const UnfoldingModel& m, double x);
double h_prime(const UnfoldingModel& m, double x);

// key = value text, '#' comments. Unknown or repeated keys throw ConfigError.
ModelConfig parse_config(std::string_view text);
ModelConfig load_config(const std::string& path);
std::vector<std::pair<std::string, std::string>> config_entries(const ModelConfig& c);
std::string format_config(const ModelConfig& c);

std::string fmt17(double v);

}  // namespace bykov
