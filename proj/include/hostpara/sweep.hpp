#pragma once

// One-parameter bifurcation scans and two-parameter stability rasters.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hostpara/boundaries.hpp"
#include "hostpara/dynamics.hpp"

namespace hostpara {

enum class ContinuationPolicy { Inherit, Reset };
enum class Coordinate { X, Y };

std::string to_string(ContinuationPolicy p);
std::string to_string(Coordinate c);

struct RecordSet {
    bool orbit_tail = true;
    bool attractor_class = true;
    bool equilibria = false;
    bool jury = false;
};

/// Initial states for the reset policy's multi-start.
inline const std::vector<Stated> kMultiStartStates{
    {0.2, 0.2}, {0.5, 0.5}, {0.8, 0.7}, {0.3, 0.4}, {1.2, 0.3}, {0.6, 1.5}, {0.1, 2.0}, {1.0, 1.0}};

struct SweepConfig {
    ModelSpec base;
    FreeParameter parameter = FreeParameter::B;
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 2;  ///< 0 gives an empty result
    ClassifyOptions budget{.transient = 10000, .window = 1000, .lyapunov_window = 10000, .min_budget = 0};
    /// Tail points kept per attractor (the last ones of the classification window).
    std::size_t tail_points = 200;
    ContinuationPolicy policy = ContinuationPolicy::Inherit;
    Stated initial{0.5, 0.5};
    RecordSet record;
    Coordinate coordinate = Coordinate::X;
    /// Extra uniformly random starts per point under the reset policy.
    std::size_t random_starts = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;  ///< not part of the result identity
};

/// Throws DomainError for a count of 1, non-finite ranges, or parameter values outside r >= 0, b > 0, R0 >= 1.
void validate(const SweepConfig& config);

/// Parameter value of point i (linear, start and stop included, descending allowed).
double sweep_value(const SweepConfig& config, std::size_t i);

struct AttractorSummary {
    Stated initial = Stated::Zero();
    AttractorClass cls = AttractorClass::FixedPoint;
    std::optional<int> period;
    double lyapunov_max = 0.0;
    int modulation_period = 1;
    OrbitFlags flags;
    std::vector<Stated> tail;
};

struct SweepPoint {
    double value = 0.0;
    std::vector<AttractorSummary> attractors;
    std::vector<EquilibriumRecord> equilibria;
    std::vector<JuryReport> jury;
    std::optional<std::string> error;
};

struct RunProvenance {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepPoint> points;
    RunProvenance provenance;
};

/// Simulates every parameter value. Inherit: the previous point's final state
/// seeds the next (the configured initial state after a failure, extinction or
/// divergence); points run in order. Reset: every point restarts from the
/// multi-start states and keeps each distinct attractor; points run in parallel.
SweepResult bifurcation_scan(const SweepConfig& config);

/// CSV: param,x_or_y,class (one row per recorded tail point).
void write_scan_csv(std::ostream& os, const SweepResult& result);

struct RegionConfig {
    int model = 1;
    double growth_lo = 1.0;  ///< R0 for models 1 and 3, r for models 2 and 4
    double growth_hi = 10.0;
    double b_lo = 0.0;
    double b_hi = 10.0;
    std::size_t n_growth = 64;
    std::size_t n_b = 64;
    bool refine = true;
    unsigned threads = 1;  ///< not part of the result identity
};

void validate(const RegionConfig& config);

struct RegionCell {
    double growth = 0.0;
    double b = 0.0;
    int n_equilibria = 0;
    bool stable = false;
    std::bitset<3> failing;
    bool boundary = false;
    /// Refinement level: 0 for a raster cell, 1 for one of its four sub-cells.
    int level = 0;
    std::optional<std::string> error;
};

struct RegionRaster {
    RegionConfig config;
    /// Row-major over b then growth: cells[j * n_growth + i].
    std::vector<RegionCell> cells;
    /// Sub-cells of boundary cells, four per cell, in cell order.
    std::vector<RegionCell> refined;
    RunProvenance provenance;

    const RegionCell& at(std::size_t i, std::size_t j) const { return cells.at(j * config.n_growth + i); }
};

/// Region verdict at cell centres; a cell whose stable flag or failing set
/// differs from a 4-neighbour is a boundary cell and, with refine, is evaluated
/// again at the centres of its 2x2 sub-cells.
RegionRaster region_scan(const RegionConfig& config);

/// "J1+J3" style; "none" when empty.
std::string failing_label(const std::bitset<3>& failing);

/// CSV: growth_param,b,n_equilibria,stable,failing_conditions (raster cells, then refined sub-cells).
void write_raster_csv(std::ostream& os, const RegionRaster& raster);

/// FNV-1a of the canonical JSON text of a config (see report.hpp), as 16 hex digits.
std::string config_hash(const SweepConfig& config);
std::string config_hash(const RegionConfig& config);

}  // namespace hostpara
