#include <algorithm>
#include <cmath>

#include "bykov/chaos_analysis.hpp"

namespace bykov {

std::vector<Symbol> parse_word(std::string_view text) {
    std::vector<Symbol> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        std::string_view tok = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (tok.size() != 2 || (tok[0] != '1' && tok[0] != '2') || (tok[1] != '+' && tok[1] != '-'))
            throw BykovError(ErrorCode::Precondition, "bad symbol '" + std::string(tok) +
                                                          "' (expected 1+, 1-, 2+ or 2-)");
        out.push_back({tok[0] - '0', tok[1] == '+' ? 1 : -1});
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string word_text(const std::vector<Symbol>& word) {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) out += (i ? "," : "") + symbol_text(word[i]);
    return out;
}

namespace {

struct Search {
    const std::vector<Symbol>& word;
    const ModelConfig& c;
    double x0;
    int sheet;
    long budget = 2000000;
    std::size_t longest = 0;

    SectionPoint point(double u) const { return {SectionId::InV, x0, sheet * std::exp(u), sheet}; }

    struct Sample {
        double u;
        std::size_t prefix;
        int outcome;  // encoded status/symbol of the first unmatched step
    };

    Sample sample(double u) {
        if (--budget < 0)
            throw BykovError(ErrorCode::RealizationFailed,
                             "evaluation budget exhausted; longest realized prefix " + std::to_string(longest) + "/" +
                                 std::to_string(word.size()));
        const Orbit o = iterate(point(u), c, static_cast<int>(word.size()));
        std::size_t k = 0;
        while (k < o.steps.size() && o.steps[k].status == ReturnStatus::Returned && o.steps[k].symbol == word[k])
            ++k;
        longest = std::max(longest, k);
        int outcome = -1;
        if (k < o.steps.size()) {
            const auto& st = o.steps[k];
            outcome = st.status == ReturnStatus::Returned ? st.symbol.connection * 2 + (st.symbol.sheet > 0) : -2;
        }
        return {u, k, outcome};
    }

    // Depth-first over [ua, ub]: first the runs that extend the matched
    // prefix (widest first), then gaps between neighbours whose next step
    // differs, where a narrow matching set can hide between samples.
    bool refine(double ua, double ub, std::size_t k, double* found) {
        if (!(ub - ua > 1e-14 * std::max(1.0, std::abs(ua)))) return false;
        constexpr int M = 129;
        std::vector<Sample> sm(M);
        for (int t = 0; t < M; ++t) sm[t] = sample(ua + (ub - ua) * t / (M - 1));

        struct Run {
            int a, b;
            std::size_t best;
        };
        std::vector<Run> runs;
        for (int t = 0; t < M;) {
            if (sm[t].prefix <= k) {
                ++t;
                continue;
            }
            int e = t;
            std::size_t best = sm[t].prefix;
            while (e + 1 < M && sm[e + 1].prefix > k) best = std::max(best, sm[++e].prefix);
            runs.push_back({t, e, best});
            t = e + 1;
        }
        std::stable_sort(runs.begin(), runs.end(), [](const Run& l, const Run& r) {
            return l.best != r.best ? l.best > r.best : l.b - l.a > r.b - r.a;
        });
        for (const auto& r : runs) {
            if (r.best == word.size()) {
                // middle of the widest full-match stretch inside the run
                int ba = 0, bb = -1;
                for (int t = r.a; t <= r.b;) {
                    if (sm[t].prefix != word.size()) {
                        ++t;
                        continue;
                    }
                    int e = t;
                    while (e + 1 <= r.b && sm[e + 1].prefix == word.size()) ++e;
                    if (e - t > bb - ba) {
                        ba = t;
                        bb = e;
                    }
                    t = e + 1;
                }
                *found = sm[(ba + bb) / 2].u;
                return true;
            }
            const double na = sm[std::max(r.a - 1, 0)].u, nb = sm[std::min(r.b + 1, M - 1)].u;
            if (refine(na, nb, std::min(r.best, word.size() - 1), found)) return true;
        }
        for (int t = 0; t + 1 < M; ++t)
            if (sm[t].prefix == k && sm[t + 1].prefix == k && sm[t].outcome != sm[t + 1].outcome)
                if (refine(sm[t].u, sm[t + 1].u, k, found)) return true;
        return false;
    }
};

}  // namespace

ItineraryResult realize_itinerary(const std::vector<Symbol>& word, const ModelConfig& c) {
    if (word.empty()) throw BykovError(ErrorCode::Precondition, "realize_itinerary: empty word");
    if (!(c.saddles.K() > 1)) throw BykovError(ErrorCode::Precondition, "realize_itinerary: needs K > 1");
    if (!(c.unfolding.lambda > 0))
        throw BykovError(ErrorCode::DegenerateUnfolding, "realize_itinerary: lambda must be > 0");

    // vertical line through P_v1 at heights of order lambda and above, where a
    // return amplifies errors by ~K per step rather than by 1/height
    Search s{word, c, c.unfolding.Pv1(), word.front().sheet};
    const double ua = std::max(std::log(c.numeric.y_floor), std::log(c.unfolding.lambda) - 6.0);
    const double ub = std::log(c.numeric.y_max);
    double u = 0;
    if (!s.refine(ua, ub, 0, &u))
        throw BykovError(ErrorCode::RealizationFailed,
                         "refinement stalled; longest realized prefix " + std::to_string(s.longest) + "/" +
                             std::to_string(word.size()));

    ItineraryResult res;
    res.word = word;
    res.point = s.point(u);
    res.orbit = iterate(res.point, c, static_cast<int>(word.size()));
    const auto it = res.orbit.itinerary();
    std::string& tr = res.transcript;
    tr += "start x=" + fmt17(res.point.a) + " y=" + fmt17(res.point.b) + "\n";
    for (std::size_t k = 0; k < word.size(); ++k) {
        const bool ok = k < it.size() && it[k] == word[k];
        if (ok && res.matched == k) ++res.matched;
        tr += "step " + std::to_string(k + 1) + " requested " + symbol_text(word[k]) + " got " +
              (k < it.size() ? symbol_text(it[k]) : std::string("--")) + (ok ? " ok" : " MISMATCH") + "\n";
    }
    tr += (res.matched == word.size() ? "MATCH " : "NO MATCH ") + std::to_string(res.matched) + "/" +
          std::to_string(word.size()) + "\n";
    return res;
}

}  // namespace bykov
