#include "hostpara/report.hpp"

#include "hostpara/io.hpp"

namespace hostpara {

Json state_json(const Stated& s) { return Json::array({s.x(), s.y()}); }

Json eigenvalues_json(const Eigenvalues& ev) {
    Json out = Json::array();
    for (const auto& e : ev) out.push_back({{"re", e.real()}, {"im", e.imag()}, {"modulus", std::abs(e)}});
    return out;
}

Json bits_json(const std::bitset<3>& bits) {
    Json out = Json::array();
    for (std::size_t k = 0; k < 3; ++k)
        if (bits.test(k)) out.push_back(static_cast<int>(k) + 1);
    return out;
}

void to_json(Json& j, const ModelSpec& spec) {
    j = {{"model", spec.index()},
         {"growth", to_string(spec.growth)},
         {"parasitism", to_string(spec.parasitism)},
         {"r", spec.r},
         {"R0", spec.R0()},
         {"b", spec.b},
         {"growth_param", spec.growth_param_name()},
         {"degenerate", spec.degenerate()}};
}

void to_json(Json& j, const EquilibriumRecord& eq) {
    j = {{"location", state_json(eq.location)},
         {"kind", to_string(eq.kind)},
         {"provenance", to_string(eq.provenance)},
         {"residual", eq.residual},
         {"degenerate", eq.degenerate},
         {"tangent", eq.tangent}};
}

void to_json(Json& j, const JuryReport& rep) {
    j = {{"tau", rep.tau},
         {"delta", rep.delta},
         {"j1", rep.j1},
         {"j2", rep.j2},
         {"j3", rep.j3},
         {"verdict", to_string(rep.verdict)},
         {"failing", bits_json(rep.failing)},
         {"marginal", bits_json(rep.marginal)}};
}

void to_json(Json& j, const BifurcationHint& hint) {
    j = {{"kind", to_string(hint.kind)}, {"residual", hint.residual}, {"eigenvalues", eigenvalues_json(hint.eigenvalues)}};
}

void to_json(Json& j, const EquilibriumClassification& c) {
    j = {{"verdict", to_string(c.verdict)},
         {"eigenvalues", eigenvalues_json(c.eigenvalues)},
         {"complex_pair", c.complex_pair},
         {"jury", c.jury ? Json(*c.jury) : Json(nullptr)},
         {"hint", c.hint ? Json(*c.hint) : Json(nullptr)}};
}

void to_json(Json& j, const RegionVerdict& v) {
    j = {{"stable", v.stable},
         {"failing", bits_json(v.failing)},
         {"n_coexistence", v.n_coexistence},
         {"stable_equilibrium_index", v.stable_equilibrium_index ? Json(*v.stable_equilibrium_index) : Json(nullptr)},
         {"degenerate", v.degenerate}};
}

void to_json(Json& j, const OrbitFlags& f) {
    j = {{"numerically_extinct_x", f.numerically_extinct_x},
         {"numerically_extinct_y", f.numerically_extinct_y},
         {"diverged", f.diverged}};
}

void to_json(Json& j, const PeriodicOrbit& c) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(state_json(p));
    j = {{"period", c.period},
         {"minimal_period", c.minimal_period()},
         {"points", pts},
         {"multipliers", eigenvalues_json(c.multipliers)},
         {"stability", to_string(c.stability)},
         {"residual", c.residual},
         {"newton_steps", c.newton_steps}};
}

void to_json(Json& j, const LyapunovResult& l) {
    j = {{"lyapunov_max", l.value}, {"iterations", l.iterations}, {"flags", l.flags}, {"final_state", state_json(l.final_state)}};
}

void to_json(Json& j, const ClassifyOptions& o) {
    j = {{"transient", o.transient},
         {"window", o.window},
         {"lyapunov_window", o.lyapunov_window},
         {"max_period", o.max_period},
         {"cycle_tol", o.cycle_tol},
         {"lyapunov_threshold", o.lyapunov_threshold},
         {"axis_tol", o.axis_tol}};
}

Json attractor_json(const AttractorReport& rep, bool with_tail) {
    Json j = {{"class", to_string(rep.cls)},
              {"period", rep.period ? Json(*rep.period) : Json(nullptr)},
              {"lyapunov_max", rep.lyapunov_max},
              {"modulation_period", rep.modulation_period},
              {"radius", rep.radius},
              {"centroid", state_json(rep.centroid)},
              {"flags", rep.flags},
              {"final_state", state_json(rep.final_state)},
              {"thresholds", rep.thresholds},
              {"tail_length", rep.tail.size()}};
    if (with_tail) {
        Json tail = Json::array();
        for (const auto& s : rep.tail) tail.push_back(state_json(s));
        j["tail"] = tail;
    }
    return j;
}

void to_json(Json& j, const CurveSample& s) {
    j = {{"internal", s.internal}, {"growth", s.growth}, {"b", s.b}, {"in_existence_region", s.in_existence_region}};
}

void to_json(Json& j, const BoundaryCurve& c) {
    j = {{"model", c.model},
         {"jury", c.jury},
         {"param_kind", to_string(c.param_kind)},
         {"kind", to_string(c.kind)},
         {"samples", c.samples}};
}

void to_json(Json& j, const SweepConfig& c) {
    j = {{"model", c.base.index()},
         {"r", c.base.r},
         {"b", c.base.b},
         {"parameter", to_string(c.parameter)},
         {"start", c.start},
         {"stop", c.stop},
         {"count", c.count},
         {"budget", c.budget},
         {"tail_points", c.tail_points},
         {"policy", to_string(c.policy)},
         {"initial", state_json(c.initial)},
         {"record",
          {{"orbit_tail", c.record.orbit_tail},
           {"attractor_class", c.record.attractor_class},
           {"equilibria", c.record.equilibria},
           {"jury", c.record.jury}}},
         {"coordinate", to_string(c.coordinate)},
         {"random_starts", c.random_starts},
         {"seed", c.seed}};
}

void to_json(Json& j, const RegionConfig& c) {
    j = {{"model", c.model},
         {"growth_lo", c.growth_lo},
         {"growth_hi", c.growth_hi},
         {"b_lo", c.b_lo},
         {"b_hi", c.b_hi},
         {"n_growth", c.n_growth},
         {"n_b", c.n_b},
         {"refine", c.refine}};
}

void to_json(Json& j, const RunProvenance& p) {
    j = {{"config_hash", p.config_hash}, {"seed", p.seed}, {"version", p.version}};
}

void to_json(Json& j, const AttractorSummary& a) {
    Json tail = Json::array();
    for (const auto& s : a.tail) tail.push_back(state_json(s));
    j = {{"initial", state_json(a.initial)},
         {"class", to_string(a.cls)},
         {"period", a.period ? Json(*a.period) : Json(nullptr)},
         {"lyapunov_max", a.lyapunov_max},
         {"modulation_period", a.modulation_period},
         {"flags", a.flags},
         {"tail", tail}};
}

void to_json(Json& j, const SweepPoint& p) {
    j = {{"value", p.value},
         {"attractors", p.attractors},
         {"equilibria", p.equilibria},
         {"jury", p.jury},
         {"error", p.error ? Json(*p.error) : Json(nullptr)}};
}

void to_json(Json& j, const SweepResult& r) {
    j = {{"config", r.config}, {"points", r.points}, {"provenance", r.provenance}};
}

void to_json(Json& j, const RegionCell& c) {
    j = {{"growth", c.growth},
         {"b", c.b},
         {"n_equilibria", c.n_equilibria},
         {"stable", c.stable},
         {"failing", bits_json(c.failing)},
         {"boundary", c.boundary},
         {"level", c.level},
         {"error", c.error ? Json(*c.error) : Json(nullptr)}};
}

void to_json(Json& j, const RegionRaster& r) {
    j = {{"config", r.config}, {"cells", r.cells}, {"refined", r.refined}, {"provenance", r.provenance}};
}

Json document(const std::string& kind, Json body) {
    Json doc = std::move(body);
    if (!doc.is_object()) doc = Json{{"data", doc}};
    doc["schema_version"] = kSchemaVersion;
    doc["library_version"] = kLibraryVersion;
    doc["kind"] = kind;
    return doc;
}

Json analyze_report(const ModelSpec& spec) {
    validate(spec);
    Json eqs = Json::array();
    auto add = [&](const EquilibriumRecord& eq) {
        Json e = eq;
        e["classification"] = classify_equilibrium(spec, eq);
        eqs.push_back(e);
    };
    for (const auto& eq : boundary_equilibria(spec)) add(eq);
    const RegionVerdict verdict = region_verdict(spec);
    for (const auto& eq : verdict.equilibria) add(eq);

    Json hints = Json::array();
    for (const auto& e : eqs)
        if (!e["classification"]["hint"].is_null()) {
            Json h = e["classification"]["hint"];
            h["equilibrium"] = e["location"];
            hints.push_back(h);
        }

    return document("analyze", {{"spec", spec},
                                {"equilibria", eqs},
                                {"region", verdict},
                                {"exclusion_stability", to_string(exclusion_stability(spec))},
                                {"bifurcation_hints", hints}});
}

}  // namespace hostpara
