#include "bykov/core_model.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace bykov {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::OnStableManifold: return "OnStableManifold";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::DegenerateUnfolding: return "DegenerateUnfolding";
        case ErrorCode::InsufficientResolution: return "InsufficientResolution";
        case ErrorCode::CrossingUncertain: return "CrossingUncertain";
        case ErrorCode::RealizationFailed: return "RealizationFailed";
        case ErrorCode::Precondition: return "Precondition";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

const char* section_name(SectionId s) {
    switch (s) {
        case SectionId::InV: return "InV";
        case SectionId::OutV: return "OutV";
        case SectionId::InW: return "InW";
        case SectionId::OutW: return "OutW";
    }
    return "?";
}

double wrap_angle(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double wrap_near(double a, double centre) {
    return centre + std::remainder(a - centre, kTwoPi);
}

double circular_distance(double a, double b) {
    return std::abs(std::remainder(a - b, kTwoPi));
}

double SectionPoint::wrapped() const { return wrap_angle(a); }
long SectionPoint::winding() const { return static_cast<long>(std::floor(a / kTwoPi)); }

ModelConfig reference_config() { return ModelConfig{}; }

bool ValidationReport::ok() const {
    for (const auto& c : checks)
        if (!c.ok) return false;
    return true;
}

namespace {

void add(ValidationReport& r, std::string name, bool ok, std::string detail = {}) {
    r.checks.push_back({std::move(name), ok, std::move(detail)});
}

bool finite_all(std::initializer_list<double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

ValidationReport validate(const ModelConfig& c) {
    ValidationReport r;
    const auto& s = c.saddles;
    const auto& u = c.unfolding;
    const auto& n = c.numeric;

    add(r, "finite_parameters",
        finite_all({s.C_v, s.E_v, s.C_w, s.E_w, u.lambda, u.Pw1, u.Delta, n.tol_root, n.tol_newton,
                    n.y_floor, n.y_max, c.psi_vw_gain}));
    add(r, "E_v>0", s.E_v > 0);
    add(r, "C_v>E_v", s.C_v > s.E_v);
    add(r, "E_w>0", s.E_w > 0);
    add(r, "C_w>E_w", s.C_w > s.E_w);

    if (s.E_v > 0 && s.E_w > 0) {
        r.delta_v = s.delta_v();
        r.delta_w = s.delta_w();
        r.delta = s.delta();
        r.K = s.K();
    }
    add(r, "delta_v>1", r.delta_v > 1);
    add(r, "delta_w>1", r.delta_w > 1);
    add(r, "delta>1", r.delta > 1);
    add(r, "K>0", r.K > 0);
    r.stability_criterion = s.C_v * s.C_w > s.E_v * s.E_w;
    r.disjoint_intervals_regime = r.K > 1;

    add(r, "lambda>=0", u.lambda >= 0);
    add(r, "0<=Pw1<Pw2<2pi", u.Pw1 >= 0 && u.Pw2() < kTwoPi);

    if (u.lambda > 0) {
        add(r, "g'(Pw1)>0", g_prime(u, u.Pw1) > 0);
        add(r, "g'(Pw2)<0", g_prime(u, u.Pw2()) < 0);
        add(r, "h'(Pv1)<0", h_prime(u, u.Pv1()) < 0);
        add(r, "h'(Pv2)>0", h_prime(u, u.Pv2()) > 0);
    } else {
        add(r, "sign_conventions", true, "lambda = 0: g and h vanish identically");
    }

    add(r, "tol_root>0", n.tol_root > 0);
    add(r, "tol_newton>0", n.tol_newton > 0);
    add(r, "max_iter>=1", n.max_iter >= 1);
    add(r, "0<y_floor<y_max<=1", n.y_floor > 0 && n.y_floor < n.y_max && n.y_max <= 1.0);
    add(r, "psi_vw_gain>0", c.psi_vw_gain > 0);
    return r;
}

namespace {

// Reduction to [-pi/2, pi/2] makes both connection angles exact zeros.
double sin_reduced(double t) {
    const double r = std::remainder(t, kTwoPi);
    if (std::abs(r) <= kPi / 2) return std::sin(r);
    return std::copysign(std::sin(kPi - std::abs(r)), r);
}

double cos_reduced(double t) {
    const double r = std::abs(std::remainder(t, kTwoPi));
    if (r <= kPi / 2) return std::cos(r);
    return -std::cos(kPi - r);
}

}  // namespace

double g_curve(const UnfoldingModel& m, double x) { return m.lambda * sin_reduced(x - m.Pw1); }
double g_prime(const UnfoldingModel& m, double x) { return m.lambda * cos_reduced(x - m.Pw1); }

double h_curve(const UnfoldingModel& m, double x) { return -g_curve(m, x - m.Delta); }
double h_prime(const UnfoldingModel& m, double x) { return -g_prime(m, x - m.Delta); }

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw BykovError(ErrorCode::ConfigError,
                         "bad value for '" + std::string(key) + "': '" + std::string(v) + "'");
    return out;
}

}  // namespace

ModelConfig parse_config(std::string_view text) {
    ModelConfig c = reference_config();
    std::map<std::string, bool> seen;
    int lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw BykovError(ErrorCode::ConfigError,
                             "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view val = trim(line.substr(eq + 1));
        if (seen[key])
            throw BykovError(ErrorCode::ConfigError, "duplicate key '" + key + "'");
        seen[key] = true;

        if (key == "C_v") c.saddles.C_v = parse_number<double>(key, val);
        else if (key == "E_v") c.saddles.E_v = parse_number<double>(key, val);
        else if (key == "C_w") c.saddles.C_w = parse_number<double>(key, val);
        else if (key == "E_w") c.saddles.E_w = parse_number<double>(key, val);
        else if (key == "lambda") c.unfolding.lambda = parse_number<double>(key, val);
        else if (key == "Pw1") c.unfolding.Pw1 = parse_number<double>(key, val);
        else if (key == "delta_offset") c.unfolding.Delta = parse_number<double>(key, val);
        else if (key == "y_floor") c.numeric.y_floor = parse_number<double>(key, val);
        else if (key == "y_max") c.numeric.y_max = parse_number<double>(key, val);
        else if (key == "seed") c.numeric.seed = parse_number<std::uint64_t>(key, val);
        else if (key == "tol_root") c.numeric.tol_root = parse_number<double>(key, val);
        else if (key == "tol_newton") c.numeric.tol_newton = parse_number<double>(key, val);
        else if (key == "max_iter") c.numeric.max_iter = parse_number<int>(key, val);
        else if (key == "psi_vw_gain") c.psi_vw_gain = parse_number<double>(key, val);
        else throw BykovError(ErrorCode::ConfigError, "unknown key '" + key + "'");
    }
    return c;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::pair<std::string, std::string>> config_entries(const ModelConfig& c) {
    return {
        {"C_v", fmt17(c.saddles.C_v)},
        {"E_v", fmt17(c.saddles.E_v)},
        {"C_w", fmt17(c.saddles.C_w)},
        {"E_w", fmt17(c.saddles.E_w)},
        {"lambda", fmt17(c.unfolding.lambda)},
        {"Pw1", fmt17(c.unfolding.Pw1)},
        {"delta_offset", fmt17(c.unfolding.Delta)},
        {"y_floor", fmt17(c.numeric.y_floor)},
        {"y_max", fmt17(c.numeric.y_max)},
        {"seed", std::to_string(c.numeric.seed)},
        {"tol_root", fmt17(c.numeric.tol_root)},
        {"tol_newton", fmt17(c.numeric.tol_newton)},
        {"max_iter", std::to_string(c.numeric.max_iter)},
        {"psi_vw_gain", fmt17(c.psi_vw_gain)},
    };
}

std::string format_config(const ModelConfig& c) {
    std::string out;
    for (const auto& [k, v] : config_entries(c)) out += k + " = " + v + "\n";
    return out;
}

}  // namespace bykov
