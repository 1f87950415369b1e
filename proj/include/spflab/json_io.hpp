#pragma once

// JSON (de)serialisation for every CLI-facing type.  ordered_json keeps the
// emitted field order fixed, and nlohmann's shortest-round-trip double output
// makes emitted files byte-stable and loss-free on re-parse.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "spflab/blaschke.hpp"
#include "spflab/bounds.hpp"
#include "spflab/error.hpp"
#include "spflab/norms.hpp"
#include "spflab/report.hpp"
#include "spflab/search.hpp"
#include "spflab/spf.hpp"
#include "spflab/symmetrize.hpp"

namespace spflab::io {

using json = nlohmann::ordered_json;

inline std::string complex_repr(const Complex& z) {
    const std::string re = json(z.real()).dump();
    const std::string im = json(std::abs(z.imag())).dump();
    return re + (z.imag() < 0 ? "-" : "+") + im + "i";
}

// {"poles":[{"re":..,"im":..,"mult":..}, ...]} with exactly this field order.
inline json spf_to_json(const Spf& spf) {
    json poles = json::array();
    for (const Pole& p : spf.poles())
        poles.push_back({{"re", p.location.real()},
                         {"im", p.location.imag()},
                         {"mult", p.multiplicity}});
    return json{{"poles", std::move(poles)}};
}

inline std::vector<Pole> poles_from_json(const json& arr, const char* what) {
    if (!arr.is_array())
        throw errors::parse_error(std::string(what) + " must be an array");
    std::vector<Pole> poles;
    for (const json& item : arr) {
        if (!item.is_object() || !item.contains("re") || !item.contains("im") ||
            !item.contains("mult"))
            throw errors::parse_error("each pole needs fields re, im, mult");
        if (!item["re"].is_number() || !item["im"].is_number() ||
            !item["mult"].is_number_integer())
            throw errors::parse_error("pole fields must be numeric (mult integral)");
        poles.push_back({Complex(item["re"].get<double>(), item["im"].get<double>()),
                         item["mult"].get<int>()});
    }
    return poles;
}

inline Spf spf_from_json(const json& j) {
    if (!j.is_object() || !j.contains("poles"))
        throw errors::parse_error("SPF JSON needs a top-level \"poles\" array");
    return Spf(poles_from_json(j["poles"], "poles"));
}

inline json configuration_to_json(const blaschke::SymmetricConfiguration& conf) {
    json poles = json::array();
    for (const Pole& p : conf.upper_poles())
        poles.push_back({{"re", p.location.real()},
                         {"im", p.location.imag()},
                         {"mult", p.multiplicity}});
    return json{{"upper_poles", std::move(poles)}};
}

inline blaschke::SymmetricConfiguration configuration_from_json(const json& j) {
    if (!j.is_object() || !j.contains("upper_poles"))
        throw errors::parse_error("configuration JSON needs \"upper_poles\"");
    return blaschke::SymmetricConfiguration(poles_from_json(j["upper_poles"], "upper_poles"));
}

inline json norm_to_json(const norms::NormResult& r) {
    return json{{"value", r.value}, {"witness", r.witness},
                {"certified_error", r.certified_error}};
}

inline json functional_to_json(const FunctionalValue& f) {
    return json{{"kind", to_string(f.kind)},
                {"p", std::isinf(f.p) ? json("inf") : json(f.p)},
                {"value", f.value}};
}

inline json report_to_json(const BoundReport& rep) {
    json context(rep.context);
    for (const auto& [key, value] : rep.flags) context[key] = value;
    return json{{"name", rep.name},
                {"lhs", rep.lhs},
                {"rhs_without_constant", rep.rhs_without_constant},
                {"ratio", std::isnan(rep.ratio) ? json() : json(rep.ratio)},
                {"pass", rep.pass},
                {"context", std::move(context)}};
}

inline json historical_to_json(const bounds::HistoricalBounds& hb) {
    return json{{"n", hb.n},
                {"nikolaev", hb.nikolaev},
                {"gelfond", hb.gelfond},
                {"gelfond_valid_from_unstated_n0", true},
                {"nikolaev_deriv", hb.nikolaev_deriv},
                {"gelfond_deriv", hb.gelfond_deriv},
                {"constant_dropped", true},
                {"reference_rate", std::isnan(hb.reference_rate) ? json() : json(hb.reference_rate)},
                {"theorem2_rate", hb.theorem2_rate}};
}

inline json root_set_to_json(const blaschke::RootSet& rs) {
    json roots = json::array();
    for (double t : rs.roots) roots.push_back(t);
    return json{{"eta", rs.eta()}, {"roots", std::move(roots)}};
}

inline json search_config_to_json(const search::SearchConfig& cfg) {
    return json{{"order_n", cfg.order_n},
                {"multiplicity_pattern", cfg.multiplicity_pattern},
                {"functional", to_string(cfg.functional)},
                {"p", std::isinf(cfg.p) ? json("inf") : json(cfg.p)},
                {"restrict_upper_half", cfg.restrict_upper_half},
                {"multistarts", cfg.multistarts},
                {"eval_budget", cfg.eval_budget},
                {"seed", cfg.seed}};
}

inline json record_to_json(const search::SearchRecord& rec) {
    json history = json::array();
    for (const auto& [eval, value] : rec.history) history.push_back({{"eval", eval}, {"value", value}});
    return json{{"config", search_config_to_json(rec.config)},
                {"best_value", rec.best_value},
                {"best_spf", spf_to_json(rec.best_spf)},
                {"history", std::move(history)},
                {"wall_evals", rec.wall_evals},
                {"winning_start", rec.winning_start},
                {"budget_exhausted", rec.budget_exhausted}};
}

inline json scan_row_to_json(const search::ScanRow& row) {
    return json{{"n", row.n},
                {"pattern", row.pattern},
                {"best_value", row.best_value},
                {"reference_rate", std::isnan(row.reference_rate) ? json() : json(row.reference_rate)},
                {"ratio", std::isnan(row.ratio) ? json() : json(row.ratio)},
                {"seed", row.seed},
                {"evals", row.evals}};
}

inline json pipeline_output_to_json(const symmetrize::PipelineOutput& out, bool emit_stages) {
    json j{{"result", configuration_to_json(out.result)},
           {"tracked_pole", {{"re", out.tracked_pole.real()}, {"im", out.tracked_pole.imag()}}},
           {"tracked_residue", out.tracked_residue},
           {"y1", out.y1},
           {"norm_factor", std::isnan(out.norm_factor) ? json() : json(out.norm_factor)}};
    if (emit_stages) {
        json stages;
        if (out.stages.s1) stages["s1"] = spf_to_json(*out.stages.s1);
        stages["sigma0"] = spf_to_json(out.stages.sigma0);
        stages["sigma"] = spf_to_json(out.stages.sigma);
        stages["lifted"] = spf_to_json(out.stages.lifted);
        stages["scaled"] = spf_to_json(out.stages.scaled);
        j["stages"] = std::move(stages);
    }
    return j;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace spflab::io
