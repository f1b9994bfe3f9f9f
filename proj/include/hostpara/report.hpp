#pragma once

// JSON views of the library types. Every top-level document carries
// "schema_version" and a "kind" string; see schema/report.schema.json.

#include <string>

#include "json.hpp"

#include "hostpara/boundaries.hpp"
#include "hostpara/dynamics.hpp"
#include "hostpara/equilibria.hpp"
#include "hostpara/models.hpp"
#include "hostpara/stability.hpp"
#include "hostpara/sweep.hpp"

namespace hostpara {

using Json = nlohmann::json;

Json state_json(const Stated& s);
Json eigenvalues_json(const Eigenvalues& ev);
Json bits_json(const std::bitset<3>& bits);  ///< 1-based Jury indices

void to_json(Json& j, const ModelSpec& spec);
void to_json(Json& j, const EquilibriumRecord& eq);
void to_json(Json& j, const JuryReport& rep);
void to_json(Json& j, const BifurcationHint& hint);
void to_json(Json& j, const EquilibriumClassification& c);
void to_json(Json& j, const RegionVerdict& v);
void to_json(Json& j, const OrbitFlags& f);
void to_json(Json& j, const PeriodicOrbit& c);
void to_json(Json& j, const LyapunovResult& l);
void to_json(Json& j, const ClassifyOptions& o);
/// Tail points are omitted unless with_tail.
Json attractor_json(const AttractorReport& rep, bool with_tail = false);
void to_json(Json& j, const CurveSample& s);
void to_json(Json& j, const BoundaryCurve& c);
void to_json(Json& j, const SweepConfig& c);
void to_json(Json& j, const RegionConfig& c);
void to_json(Json& j, const RunProvenance& p);
void to_json(Json& j, const AttractorSummary& a);
void to_json(Json& j, const SweepPoint& p);
void to_json(Json& j, const SweepResult& r);
void to_json(Json& j, const RegionCell& c);
void to_json(Json& j, const RegionRaster& r);

/// {"schema_version", "library_version", "kind", ...body}
Json document(const std::string& kind, Json body);

/// Everything known about one parameter point: equilibria with their
/// classification, region verdict, exclusion stability and bifurcation hints.
Json analyze_report(const ModelSpec& spec);

}  // namespace hostpara
