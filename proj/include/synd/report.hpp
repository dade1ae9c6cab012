#pragma once

#include <string>

#include <json.hpp>

#include "synd/gaps.hpp"
#include "synd/growth.hpp"
#include "synd/independence.hpp"
#include "synd/periodicity.hpp"

// JSON views of analysis results. Every top-level report carries "schema": 1.

namespace synd {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json rational_json(const Rational& q) { return q.str(); }

inline Json poly_json(const Poly& p) {
    Json out = Json::array();
    for (std::size_t i = p.coeffs().size(); i-- > 0;)
        out.push_back(p.coeffs()[i].str());
    return out;
}

inline const char* kind_name(AlgebraicRate::Kind k) {
    switch (k) {
        case AlgebraicRate::Kind::Zero: return "Zero";
        case AlgebraicRate::Kind::One: return "One";
        case AlgebraicRate::Kind::Root: return "Root";
    }
    return "?";
}

inline Json rate_json(const AlgebraicRate& r) {
    Json j;
    j["kind"] = kind_name(r.kind());
    j["approx"] = to_decimal(r.approx(), 30);
    j["error"] = to_decimal(r.error(), 6);
    if (r.is_root()) {
        j["charpoly"] = poly_json(r.charpoly());
        if (auto k = r.exact_integer())
            j["integer"] = k->str();
    }
    return j;
}

inline Json growth_type_json(const GrowthType& g) {
    return Json{{"degree", g.degree}, {"rate", rate_json(g.rate)}, {"text", format(g)}};
}

inline Json analysis_json(const GrowthAnalysis& a) {
    const Alphabet& al = a.sigma.alphabet();
    Json j;
    j["schema"] = kSchemaVersion;
    j["p"] = a.p;
    j["D"] = a.D;
    j["Theta"] = rate_json(a.Theta);
    j["growth_type"] = format(a.growth_type());
    j["A_max"] = Json::array();
    for (Letter x : a.A_max)
        j["A_max"].push_back(al.name(x));
    j["coefficient_horizon"] = a.horizon;
    j["letters"] = Json::array();
    for (Letter x = 0; x < al.size(); ++x) {
        Json l;
        l["letter"] = al.name(x);
        l["mortal"] = static_cast<bool>(a.mortal[x]);
        l["degree"] = a.letters[x].degree;
        l["rate"] = rate_json(a.letters[x].rate);
        if (!a.mortal[x])
            l["c"] = Json{{"value", to_decimal(a.c[x].value, 20)}, {"error", to_decimal(a.c[x].error, 6)}};
        j["letters"].push_back(std::move(l));
    }
    return j;
}

inline Json automaton_growth_json(const Dfa& d, const AutomatonGrowth& g) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["system"] = growth_type_json(g.system);
    j["associated_substitution"] = growth_type_json(g.associated_substitution());
    j["states"] = Json::array();
    for (State q = 0; q < d.state_count(); ++q) {
        Json s = growth_type_json(g.states[q]);
        s["state"] = d.state_name(q);
        j["states"].push_back(std::move(s));
    }
    return j;
}

inline Json verdict_json(const IndependenceVerdict& v) {
    Json j;
    j["status"] = to_string(v.status);
    if (v.status == IndependenceStatus::Dependent)
        j["witness"] = Json{{"k", v.k}, {"l", v.l}};
    if (v.bound)
        j["bound"] = *v.bound;
    j["exact"] = v.exact;
    j["dense"] = v.dense;
    j["equal_growth_types"] = v.equal_growth_types;
    j["outside_theorem_scope"] = v.outside_theorem_scope;
    j["polynomial_exponential"] = v.polynomial_exponential;
    j["strict_paper"] = v.strict_paper;
    if (!v.reason.empty())
        j["reason"] = v.reason;
    if (v.strict_paper)
        j["note"] = "literal reading: condition (1) admits rate 1, condition (3) has no (alpha > 1 or d >= 1) guard";
    return j;
}

inline Json gap_report_json(const GapReport& r) {
    Json j;
    j["target"] = r.target;
    j["prefix"] = r.prefix;
    j["scanned"] = r.scanned;
    j["occurrences"] = r.occurrences;
    j["max_gap"] = r.max_gap;
    j["verdict"] = to_string(r.verdict);
    j["checkpoints"] = Json::array();
    for (const auto& s : r.samples)
        j["checkpoints"].push_back(Json{{"n", s.n}, {"max_gap", s.max_gap}});
    j["note"] = "verified on prefix only";
    return j;
}

inline Json scaling_fit_json(const ScalingFit& f) {
    Json j;
    j["case"] = f.model;
    j["predictor"] = f.predictor;
    j["exponent"] = f.exponent;
    j["intercept"] = f.intercept;
    j["log_correction"] = f.correction;
    j["admissible"] = Json::array({f.lo, f.hi});
    j["tolerance"] = f.tolerance;
    j["pass"] = f.pass;
    j["fitted_from"] = f.fitted_from;
    j["samples"] = Json::array();
    for (const auto& s : f.samples)
        j["samples"].push_back(Json{{"N", s.n}, {"M", s.m}});
    return j;
}

inline Json period_json(const PeriodVerdict& v) {
    Json j;
    if (v.periodic) {
        j["status"] = "UltimatelyPeriodic";
        j["preperiod"] = v.preperiod;
        j["period"] = v.period;
    } else {
        j["status"] = "NoPeriodUpTo";
        j["witnesses"] = Json::array();
        for (std::size_t i = 0; i < v.rejected.size() && i < 16; ++i)
            j["witnesses"].push_back(Json{{"period", v.rejected[i].period}, {"mismatch", v.rejected[i].mismatch}});
    }
    j["max_period"] = v.max_period;
    j["prefix"] = v.prefix;
    j["note"] = "verified on prefix only";
    return j;
}

inline Json progressions_json(const Progressions& p, const Alphabet& a) {
    Json j;
    j["preperiod"] = p.preperiod;
    j["period"] = p.period;
    j["letters"] = Json::array();
    for (Letter x = 0; x < a.size(); ++x)
        j["letters"].push_back(Json{{"letter", a.name(x)}, {"residues", p.residues[x]}, {"exceptions", p.exceptions[x]}});
    return j;
}

}  // namespace synd
