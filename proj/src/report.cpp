#include "mdpx/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mdpx/io.hpp"

namespace mdpx {

using nlohmann::json;

json report_header(const std::string& command, const std::string& input_hash, std::uint64_t master_seed,
                   const std::map<std::string, double>& constants) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["schema"] = kSchemaVersion;
    j["command"] = command;
    j["input_hash"] = input_hash;
    j["master_seed"] = master_seed;
    json c = json::object();
    for (const auto& [k, v] : constants) c[k] = real_or_inf(v);
    j["constants"] = std::move(c);
    return j;
}

json to_json(const StationaryDistribution& phi) {
    std::vector<double> v(phi.phi.data(), phi.phi.data() + phi.phi.size());
    return {{"phi", v}, {"phi_min", phi.phi_min}};
}

json to_json(const CheegerResult& c) {
    return {{"h", c.h}, {"argmin_cut", c.argmin_cut}, {"flow_out", c.flow_out},
            {"smaller_side_mass", c.smaller_side_mass}};
}

json to_json(const SymmetryCheck& s) {
    json j{{"locally_symmetric", s.symmetric}};
    if (s.witness) j["witness"] = {s.witness->first, s.witness->second};
    else j["witness"] = nullptr;
    return j;
}

json to_json(const SubmatrixBound& b) {
    json terms = json::array();
    for (const auto& t : b.terms) {
        terms.push_back({{"target", t.target},
                         {"norm_1", t.norm_one},
                         {"norm_2", t.norm_two},
                         {"norm_inf", t.norm_inf},
                         {"best", real_or_inf(t.best)},
                         {"best_norm", t.best_norm ? json(to_string(*t.best_norm)) : json(nullptr)}});
    }
    return {{"value", real_or_inf(b.value)}, {"terms", std::move(terms)}};
}

json to_json(const HardnessReport& r) {
    json j;
    j["num_states"] = r.num_states;
    j["num_actions"] = r.num_actions;
    j["stationary"] = to_json(r.stationary);
    j["lambda"] = r.lambda;
    if (r.cheeger) {
        j["cheeger"] = to_json(*r.cheeger);
        j["cheeger_sandwich"] = {
            {"chung_form_2h_ge_lambda_ge_h2_over_2", r.sandwich->chung_form_holds},
            {"stated_form_h_ge_lambda_ge_h2_over_2", r.sandwich->strict_form_holds},
            {"stated_form_violated", !r.sandwich->strict_form_holds},
        };
    } else {
        j["cheeger"] = nullptr;
    }
    j["diameter"] = real_or_inf(r.diameter);
    j["action_variation"] = r.action_variation;
    j["k0"] = r.k0;
    j["bounds"] = {
        {"laplacian_cover_bound", real_or_inf(r.laplacian_cover_bound)},
        {"action_variation_cover_bound",
         r.action_variation_cover_bound ? real_or_inf(*r.action_variation_cover_bound) : json(nullptr)},
        {"action_variation_condition", std::isfinite(r.diameter)
                                           ? json(r.action_variation <= 2.0 / (5.0 * std::max(r.diameter, 1.0)))
                                           : json(nullptr)},
        {"submatrix_cover_bound", to_json(r.submatrix_cover_bound)},
        {"pmin_cover_bound", real_or_inf(r.pmin_cover_bound)},
    };
    json t0;
    t0["value"] = r.q_learning_T0 ? real_or_inf(*r.q_learning_T0) : json(nullptr);
    t0["cover_length_source"] = r.t0_cover_source;
    t0["v_max"] = r.v_max;
    t0["note"] = "order-of-magnitude indicator; hidden constants set to constant_c2";
    if (r.t0_error) t0["error"] = *r.t0_error;
    j["q_learning_T0"] = std::move(t0);
    j["flags"] = {
        {"irreducible", r.irreducible},
        {"locally_symmetric", r.local_symmetry.symmetric},
        {"symmetry_witness",
         r.local_symmetry.witness ? json({r.local_symmetry.witness->first, r.local_symmetry.witness->second})
                                  : json(nullptr)},
        {"pac_condition_inputs", {{"inv_lambda", r.inv_lambda}, {"inv_phi_min", r.inv_phi_min}}},
    };
    return j;
}

std::map<std::string, double> constants_of(const HardnessOptions& o) {
    return {{"constant_c1", o.action_variation_c},
            {"constant_c2", o.t0_c},
            {"omega", o.omega},
            {"epsilon", o.epsilon},
            {"delta", o.delta},
            {"diameter_tol", o.diameter.tol},
            {"diameter_max_iter", static_cast<double>(o.diameter.max_iter)},
            {"probability_tol", kProbabilityTolerance},
            {"zero_eigenvalue_tol", kZeroEigenvalueTolerance}};
}

json to_json(const CoverLengthEstimate& e) {
    json per_start = json::array();
    for (std::size_t i = 0; i < e.per_start_median.size(); ++i) {
        per_start.push_back({{"state", i / e.num_actions},
                             {"action", i % e.num_actions},
                             {"median", e.per_start_median[i]}});
    }
    return {{"estimate", e.estimate},
            {"censored", e.censored},
            {"trials", e.trials},
            {"horizon", e.horizon},
            {"covered_fraction_at_horizon", e.covered_fraction_at_horizon},
            {"seed", e.seed},
            {"per_start_median", std::move(per_start)}};
}

json to_json(const ExploitReport& r) {
    return {{"seed", r.seed},
            {"steps_used", r.steps_used},
            {"q_error", r.q_error},
            {"value_gap", r.value_gap},
            {"epsilon", r.epsilon},
            {"success", r.success},
            {"policy", r.policy}};
}

json to_json(const SweepResult& r) {
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back({{"size", p.size},
                          {"S", p.num_states},
                          {"A", p.num_actions},
                          {"value", real_or_inf(p.value)},
                          {"censored", p.censored}});
    }
    auto num = [](double x) { return std::isnan(x) ? json(nullptr) : real_or_inf(x); };
    return {{"family", to_string(r.family)},
            {"metric", to_string(r.metric)},
            {"points", std::move(points)},
            {"log2_slope", num(r.log2_slope)},
            {"loglog_exponent", num(r.loglog_exponent)},
            {"log2_residuals", r.log2_residuals},
            {"loglog_residuals", r.loglog_residuals},
            {"classification", r.classification},
            {"classification_note", "advisory: finite sweeps cannot establish asymptotics"}};
}

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream os;
    os << "size,S,A,metric_value,censored\n";
    char buf[64];
    for (const auto& p : r.points) {
        std::snprintf(buf, sizeof buf, "%.17g", p.value);
        os << p.size << "," << p.num_states << "," << p.num_actions << "," << buf << ","
           << (p.censored ? "true" : "false") << "\n";
    }
    return os.str();
}

}  // namespace mdpx
