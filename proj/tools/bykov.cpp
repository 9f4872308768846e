#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bykov/chaos_analysis.hpp"
#include "bykov/core_model.hpp"
#include "bykov/csv.hpp"
#include "bykov/return_dynamics.hpp"
#include "bykov/tangency_lab.hpp"

namespace fs = std::filesystem;
using namespace bykov;

namespace {

struct Globals {
    std::string config_path;
    double lambda = -1;  // < 0: keep the config value
    bool lambda_set = false;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ModelConfig resolve(const Globals& g) {
    ModelConfig c = g.config_path.empty() ? reference_config() : load_config(g.config_path);
    if (g.lambda_set) c.unfolding.lambda = g.lambda;
    if (g.seed_set) c.numeric.seed = g.seed;
    return c;
}

// Commands other than validate refuse configs with a hard failure.
ModelConfig resolve_checked(const Globals& g) {
    ModelConfig c = resolve(g);
    const ValidationReport r = validate(c);
    if (!r.ok()) {
        for (const auto& ch : r.checks)
            if (!ch.ok) throw BykovError(ErrorCode::Precondition, "invalid config: " + ch.name + " " + ch.detail);
    }
    return c;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("cannot write " + path.string());
}

// Single-artifact commands print to stdout unless --out is given.
void emit(const Globals& g, const std::string& name, const std::string& text) {
    if (g.out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::error_code ec;
    fs::create_directories(g.out_dir, ec);
    write_file(fs::path(g.out_dir) / name, text);
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        out.push_back(std::stoi(tok, &used));
        if (used != tok.size()) throw CLI::ValidationError("bad integer list: " + s);
    }
    return out;
}

std::string label(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& args) {
    std::string s = cmd;
    for (const auto& [k, v] : args) s += " " + k + "=" + v;
    return s;
}

void cmd_curves(const Globals& g) {
    const ModelConfig c = resolve_checked(g);
    const UnfoldingModel& m = c.unfolding;
    const std::string dir = g.out_dir.empty() ? "." : g.out_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const std::string head = provenance_header(c, label("curves", {}));
    const int n = 1024;

    std::string gs = head + "x,g\n", hs = head + "x,h\n";
    for (int i = 0; i <= n; ++i) {
        const double x = m.Pw1 + kTwoPi * i / n;
        gs += fmt17(x) + "," + fmt17(g_curve(m, x)) + "\n";
        hs += fmt17(x) + "," + fmt17(h_curve(m, x)) + "\n";
    }

    // upper h-arc x_* + s, |s| < pi/2, pushed through eta
    std::string es = head + "s,x,y,out_x,out_y\n";
    for (int i = 0; i < n; ++i) {
        const double s = -kPi / 2 + kPi * (i + 0.5) / n;
        const double x = m.x_star() + s;
        const double y = h_curve(m, x);
        if (!(y > c.numeric.y_floor)) continue;
        const SectionPoint q = eta({SectionId::InV, x, y, 1}, c);
        es += fmt17(s) + "," + fmt17(x) + "," + fmt17(y) + "," + fmt17(q.a) + "," + fmt17(q.b) + "\n";
    }

    std::string fs_ = head + "lambda,x,y\n";
    if (m.lambda > 0) {
        const SectionPoint f = fold_point(m.lambda, c);
        fs_ += fmt17(m.lambda) + "," + fmt17(f.a) + "," + fmt17(f.b) + "\n";
    } else {
        fs_ += "# no fold: lambda = 0\n";
    }

    write_file(fs::path(dir) / "g.csv", gs);
    write_file(fs::path(dir) / "h.csv", hs);
    write_file(fs::path(dir) / "eta_h.csv", es);
    write_file(fs::path(dir) / "fold.csv", fs_);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bykov heteroclinic network model"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_path, "config file (key = value); reference config if omitted");
    app.add_option_function<double>("--lambda", [&](double v) { g.lambda = v; g.lambda_set = true; },
                                    "override lambda");
    app.add_option("--out", g.out_dir, "output directory (stdout if omitted; curves default .)");
    app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t v) { g.seed = v; g.seed_set = true; },
                                           "override RNG seed");

    auto* validate_cmd = app.add_subcommand("validate", "check config invariants");
    auto* curves = app.add_subcommand("curves", "g, h, eta(h-curve) and fold samples");

    auto* orbit = app.add_subcommand("orbit", "iterate the first-return map");
    double ox = 0, oy = 0.005;
    int ok_steps = 10;
    orbit->add_option("--x", ox, "start angle on In(v)")->capture_default_str();
    orbit->add_option("--y", oy, "start height on In(v)")->capture_default_str();
    orbit->add_option("-k,--steps", ok_steps, "number of returns")->capture_default_str();

    auto* hs = app.add_subcommand("horseshoe", "rectangles, transition matrix, cone test");
    std::string n_range = "0,1";
    double tau = 0.05, slope = 1.0;
    int grid = 50;
    hs->add_option("--n-range", n_range, "rectangle indices, comma separated")->capture_default_str();
    hs->add_option("--tau", tau, "rectangle half-width")->capture_default_str();
    hs->add_option("--grid", grid, "cone test grid per rectangle")->capture_default_str();
    hs->add_option("--slope", slope, "cone slope in rectangle charts")->capture_default_str();

    auto* esc = app.add_subcommand("escape", "survival of uniform samples");
    std::string esc_range = "0,1", rect_text;
    double esc_tau = 0.05;
    int samples = 10000, horizon = 12;
    esc->add_option("--n-range", esc_range, "horseshoe rectangles used as region")->capture_default_str();
    esc->add_option("--tau", esc_tau, "horseshoe rectangle half-width")->capture_default_str();
    esc->add_option("--rect", rect_text, "explicit region x_lo,x_hi,y_lo,y_hi");
    esc->add_option("-N,--samples", samples, "sample count")->capture_default_str();
    esc->add_option("-k,--horizon", horizon, "returns")->capture_default_str();

    auto* tan = app.add_subcommand("tangency", "tangency parameters in a lambda range");
    double lam_lo = 1e-5, lam_hi = 1e-1;
    tan->add_option("--lambda-lo", lam_lo)->capture_default_str();
    tan->add_option("--lambda-hi", lam_hi)->capture_default_str();

    auto* sinks = app.add_subcommand("sinks", "periodic orbits near a tangency");
    int record = 0, period_max = 3;
    sinks->add_option("--lambda-lo", lam_lo)->capture_default_str();
    sinks->add_option("--lambda-hi", lam_hi)->capture_default_str();
    sinks->add_option("--record", record, "index into the tangency table")->capture_default_str();
    sinks->add_option("--period-max", period_max)->capture_default_str();

    auto* itin = app.add_subcommand("itinerary", "realise a symbol word");
    std::string word = "1+,1+,2+,1+";
    itin->add_option("--word", word, "comma separated symbols, e.g. 1+,2-")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (validate_cmd->parsed()) {
            const ModelConfig c = resolve(g);
            const ValidationReport r = validate(c);
            emit(g, "validate.txt", provenance_header(c, "validate") + validation_text(r));
            return r.ok() ? 0 : 1;
        }
        if (curves->parsed()) {
            cmd_curves(g);
            return 0;
        }
        if (orbit->parsed()) {
            const ModelConfig c = resolve_checked(g);
            const Orbit o = iterate({SectionId::InV, ox, oy, oy < 0 ? -1 : 1}, c, ok_steps);
            emit(g, "orbit.csv",
                 provenance_header(c, label("orbit", {{"x", fmt17(ox)}, {"y", fmt17(oy)},
                                                      {"k", std::to_string(ok_steps)}})) +
                     orbit_csv(o));
            return 0;
        }
        if (hs->parsed()) {
            const ModelConfig c = resolve_checked(g);
            const Horseshoe h = build_horseshoe(parse_ints(n_range), tau, c);
            const ConeReport cone = cone_hyperbolicity(h.rects, slope, grid, c);
            emit(g, "horseshoe.txt",
                 provenance_header(c, label("horseshoe", {{"n_range", n_range}, {"tau", fmt17(tau)},
                                                          {"grid", std::to_string(grid)},
                                                          {"slope", fmt17(slope)}})) +
                     horseshoe_text(h, cone));
            return 0;
        }
        if (esc->parsed()) {
            const ModelConfig c = resolve_checked(g);
            std::vector<Rectangle> rects;
            std::string region;
            if (!rect_text.empty()) {
                std::vector<double> v;
                std::stringstream ss(rect_text);
                std::string tok;
                while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
                if (v.size() != 4) throw CLI::ValidationError("--rect needs four numbers");
                rects.push_back({v[0], v[1], v[2], v[3], "R"});
                region = rect_text;
            } else {
                rects = horseshoe_rectangles(parse_ints(esc_range), esc_tau, c);
                region = "horseshoe " + esc_range + " tau " + fmt17(esc_tau);
            }
            const SurvivalCurve s = escape_experiment(rects, samples, horizon, c);
            emit(g, "escape.csv",
                 provenance_header(c, label("escape", {{"region", region}, {"N", std::to_string(samples)},
                                                       {"k", std::to_string(horizon)}})) +
                     survival_csv(s));
            return 0;
        }
        if (tan->parsed()) {
            const ModelConfig c = resolve_checked(g);
            const auto recs = find_tangencies(lam_hi, lam_lo, c);
            emit(g, "tangency.csv",
                 provenance_header(c, label("tangency", {{"lambda_lo", fmt17(lam_lo)},
                                                         {"lambda_hi", fmt17(lam_hi)}})) +
                     tangency_table(recs));
            return 0;
        }
        if (sinks->parsed()) {
            const ModelConfig c = resolve_checked(g);
            const auto recs = find_tangencies(lam_hi, lam_lo, c);
            if (record < 0 || static_cast<std::size_t>(record) >= recs.size())
                throw BykovError(ErrorCode::Precondition,
                                 "record " + std::to_string(record) + " out of range (" +
                                     std::to_string(recs.size()) + " records)");
            const auto orbits = find_periodic_sinks(recs[record], period_max, c);
            emit(g, "sinks.csv",
                 provenance_header(c, label("sinks", {{"lambda_lo", fmt17(lam_lo)},
                                                      {"lambda_hi", fmt17(lam_hi)},
                                                      {"record", std::to_string(record)},
                                                      {"period_max", std::to_string(period_max)}})) +
                     periodic_table(orbits));
            return 0;
        }
        if (itin->parsed()) {
            const ModelConfig c = resolve_checked(g);
            const ItineraryResult r = realize_itinerary(parse_word(word), c);
            std::string text = provenance_header(c, label("itinerary", {{"word", word}}));
            text += "x,y,sheet\n" + fmt17(r.point.a) + "," + fmt17(r.point.b) + "," +
                    std::to_string(r.point.sheet) + "\n";
            text += r.transcript;
            if (!text.empty() && text.back() != '\n') text += '\n';
            emit(g, "itinerary.txt", text);
            return r.matched == r.word.size() ? 0 : 1;
        }
    } catch (const BykovError& e) {
        const bool io = e.code() == ErrorCode::ConfigError;
        std::cerr << "error: " << error_name(e.code()) << ": " << e.what() << "\n";
        return io ? 2 : 1;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
