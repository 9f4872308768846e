#include "bykov/csv.hpp"

namespace bykov {

std::string provenance_header(const ModelConfig& c, std::string_view command) {
    std::string out = "# bykov " + std::string(command) + "\n";
    for (const auto& [k, v] : config_entries(c)) out += "# " + k + " = " + v + "\n";
    return out;
}

std::string validation_text(const ValidationReport& r) {
    std::string out = "check,ok,detail\n";
    for (const auto& c : r.checks) out += c.name + "," + (c.ok ? "1" : "0") + "," + c.detail + "\n";
    out += "delta_v," + fmt17(r.delta_v) + ",\n";
    out += "delta_w," + fmt17(r.delta_w) + ",\n";
    out += "delta," + fmt17(r.delta) + ",\n";
    out += "K," + fmt17(r.K) + ",\n";
    out += std::string("stability_criterion,") + (r.stability_criterion ? "1" : "0") + ",\n";
    out += std::string("disjoint_intervals_regime,") + (r.disjoint_intervals_regime ? "1" : "0") + ",\n";
    out += std::string("valid,") + (r.ok() ? "1" : "0") + ",\n";
    return out;
}

std::string survival_csv(const SurvivalCurve& s) {
    std::string out = "# samples = " + std::to_string(s.samples) + "\n";
    if (s.fit_ok)
        out += "# decay_rate = " + fmt17(s.rate) + " ci95 = [" + fmt17(s.rate_lo) + ", " + fmt17(s.rate_hi) + "]\n";
    else
        out += "# decay_rate = unavailable (fewer than 3 positive survival values)\n";
    out += "returns,survival\n";
    for (std::size_t j = 0; j < s.fraction.size(); ++j) out += std::to_string(j) + "," + fmt17(s.fraction[j]) + "\n";
    return out;
}

std::string tangency_table(const std::vector<TangencyRecord>& rs) {
    std::string out =
        "index,lambda_star,lambda_2,lambda_1,winding,touch_x,touch_y,preimage_x,preimage_y,s_fold,"
        "value_residual,slope_residual\n";
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto& r = rs[i];
        out += std::to_string(i) + "," + fmt17(r.lambda_star) + "," + fmt17(r.lambda_lo) + "," + fmt17(r.lambda_hi) +
               "," + std::to_string(r.winding) + "," + fmt17(r.touch_x) + "," + fmt17(r.touch_y) + "," +
               fmt17(r.preimage_x) + "," + fmt17(r.preimage_y) + "," + fmt17(r.s_fold) + "," +
               fmt17(r.value_residual) + "," + fmt17(r.slope_residual) + "\n";
    }
    return out;
}

std::string periodic_table(const std::vector<PeriodicOrbit>& os) {
    std::string out = "period,lambda,x,y,mult1_re,mult1_im,mult2_re,mult2_im,det,residual,tag,verified,contraction\n";
    for (const auto& o : os) {
        const auto& p = o.points.front();
        out += std::to_string(o.period) + "," + fmt17(o.lambda) + "," + fmt17(p.a) + "," + fmt17(p.b) + "," +
               fmt17(o.multipliers[0].real()) + "," + fmt17(o.multipliers[0].imag()) + "," +
               fmt17(o.multipliers[1].real()) + "," + fmt17(o.multipliers[1].imag()) + "," + fmt17(o.det) + "," +
               fmt17(o.residual) + "," + stability_name(o.tag) + "," + (o.verified ? "1" : "0") + "," +
               fmt17(o.contraction) + "\n";
    }
    return out;
}

std::string horseshoe_text(const Horseshoe& h, const ConeReport& cone) {
    std::string out = "# ladder index of R0 = " + std::to_string(h.k0) + "\n";
    out += "label,x_lo,x_hi,y_lo,y_hi\n";
    for (const auto& r : h.rects)
        out += r.label + "," + fmt17(r.x_lo) + "," + fmt17(r.x_hi) + "," + fmt17(r.y_lo) + "," + fmt17(r.y_hi) + "\n";
    out += "# transition matrix\n" + h.matrix.text();
    out += "from,to,strips_left,strips_right,stray,horizontal_clear,separation,full\n";
    for (const auto& c : h.certificates)
        out += std::to_string(c.from) + "," + std::to_string(c.to) + "," + std::to_string(c.strips_left) + "," +
               std::to_string(c.strips_right) + "," + (c.stray_strip ? "1" : "0") + "," +
               (c.horizontal_clear ? "1" : "0") + "," + fmt17(c.separation) + "," + (c.full ? "1" : "0") + "\n";
    out += "# cone report\n";
    out += "input_ok,mu,points,cone_violations,full_pairs,partial_pairs,pass\n";
    out += std::string(cone.input_ok ? "1" : "0") + "," + fmt17(cone.mu) + "," + std::to_string(cone.points) + "," +
           std::to_string(cone.cone_violations) + "," + std::to_string(cone.full_pairs) + "," +
           std::to_string(cone.partial_pairs) + "," + (cone.pass ? "1" : "0") + "\n";
    return out;
}

}  // namespace bykov
