#pragma once

// Orbits, periodic orbits, Lyapunov exponents and attractor classification.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hostpara/equilibria.hpp"
#include "hostpara/models.hpp"
#include "hostpara/stability.hpp"

namespace hostpara {

/// A coordinate that was positive and drops below this is numerically extinct.
inline constexpr double kExtinctionThreshold = 1e-300;

struct OrbitFlags {
    bool numerically_extinct_y = false;
    bool numerically_extinct_x = false;
    bool diverged = false;

    bool any() const noexcept { return numerically_extinct_x || numerically_extinct_y || diverged; }
};

struct Orbit {
    ModelSpec spec;
    Stated initial = Stated::Zero();
    std::size_t transient = 0;
    /// Post-transient iterates; samples[0] is the state after the transient.
    /// Stops early (shorter than requested) once the state becomes non-finite.
    std::vector<Stated> samples;
    OrbitFlags flags;
    /// State after the last iterate (the iterate following samples.back()).
    Stated final_state = Stated::Zero();
};

/// Iterates the map `transient` times, then records n states. Flags are raised
/// during the transient too. No clamping: subnormal values are kept as computed.
/// Throws DomainError if init is outside the closed first quadrant.
Orbit simulate(const ModelSpec& spec, const Stated& init, std::size_t transient, std::size_t n);

/// Raises flags for `next` given the state it came from; true when the orbit must stop.
bool update_flags(OrbitFlags& flags, const Stated& previous, const Stated& next);

struct DetectedCycle {
    int period = 0;
    std::vector<Stated> points;  ///< the last `period` samples of the orbit
};

inline constexpr int kDefaultMaxPeriod = 64;
inline constexpr double kDefaultCycleTolerance = 1e-9;

/// Smallest n <= max_period with |s[i+n] - s[i]|_inf < tol over the last
/// 4 max_period samples. Throws DomainError if the orbit is shorter than that.
std::optional<DetectedCycle> detect_cycle(const Orbit& orbit, int max_period = kDefaultMaxPeriod,
                                          double tol = kDefaultCycleTolerance);

struct PeriodicOrbit {
    int period = 0;
    std::vector<Stated> points;
    /// Eigenvalues of J(points[n-1]) ... J(points[0]).
    Eigenvalues multipliers{};
    Verdict stability = Verdict::Marginal;
    /// max_i |f(points[i]) - points[i+1 mod n]|_inf after refinement.
    double residual = 0.0;
    int newton_steps = 0;

    /// Smallest divisor d of period with points[d] == points[0] within tol.
    int minimal_period(double tol = 1e-8) const;
};

inline constexpr double kCycleMultiplierBand = 1e-8;

struct RefineOptions {
    double residual_tol = 1e-12;
    int max_steps = 50;
};

/// Newton on the multiple-shooting system f(z_i) = z_{i+1 mod n}. `guess` holds n
/// points, or a single point that is iterated to fill the rest. Throws
/// NumericError on non-convergence (bracket slots hold the final residual) and
/// DomainError for a bad guess size or a solution outside the closed quadrant.
PeriodicOrbit refine_cycle(const ModelSpec& spec, const std::vector<Stated>& guess, int period,
                           const RefineOptions& options = {});

/// Jacobian product around a cycle and its eigenvalues.
Jacobian2d cycle_jacobian(const ModelSpec& spec, const std::vector<Stated>& points);

/// Two-cycle seeded from an equilibrium: offset by +-delta along the eigenvector
/// of the most negative real eigenvalue, then refine_cycle with period 2. Empty
/// when there is no negative real eigenvalue, Newton fails, or the result
/// collapses onto the equilibrium.
std::optional<PeriodicOrbit> seed_two_cycle(const ModelSpec& spec, const Stated& equilibrium, double delta = 1e-2);

/// Seed offsets tried by two_cycles_near.
inline const std::vector<double> kTwoCycleSeedLadder{0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};

/// Every distinct two-cycle reached by seed_two_cycle over the offsets, nearest
/// to the equilibrium first.
std::vector<PeriodicOrbit> two_cycles_near(const ModelSpec& spec, const Stated& equilibrium,
                                           const std::vector<double>& deltas = kTwoCycleSeedLadder);

struct LyapunovResult {
    double value = 0.0;           ///< NaN when no step was averaged
    std::size_t iterations = 0;   ///< steps averaged
    OrbitFlags flags;
    Stated final_state = Stated::Zero();
};

inline constexpr std::size_t kDefaultLyapunovWindow = 100000;

/// Largest Lyapunov exponent: tangent vector pushed through the Jacobian and
/// renormalised every step. Stops at extinction or divergence with the flags set.
LyapunovResult lyapunov_max(const ModelSpec& spec, const Stated& init, std::size_t transient, std::size_t n);

enum class AttractorClass { FixedPoint, NCycle, InvariantCircle, Chaotic, AxisAttractor, Extinction, Diverged };
std::string to_string(AttractorClass c);

struct ClassifyOptions {
    std::size_t transient = 10000;
    std::size_t window = 10000;
    std::size_t lyapunov_window = kDefaultLyapunovWindow;
    int max_period = kDefaultMaxPeriod;
    double cycle_tol = kDefaultCycleTolerance;
    /// |lambda| <= this is quasiperiodic, above it chaotic.
    double lyapunov_threshold = 1e-3;
    /// Tail with max y below this sits on the x-axis.
    double axis_tol = 1e-10;
    /// Smallest transient + lyapunov_window accepted.
    std::size_t min_budget = 100000;
};

struct AttractorReport {
    AttractorClass cls = AttractorClass::FixedPoint;
    /// Detected period; 0 for a contracting orbit whose period exceeds max_period.
    std::optional<int> period;
    /// Largest exponent; NaN when it was not needed by the cascade.
    double lyapunov_max = 0.0;
    /// Cyclic visitation period of the tail; see modulation_period().
    int modulation_period = 1;
    /// Max distance from the tail centroid.
    double radius = 0.0;
    Stated centroid = Stated::Zero();
    OrbitFlags flags;
    std::vector<Stated> tail;
    Stated final_state = Stated::Zero();
    ClassifyOptions thresholds;
};

/// Cascade: diverged; host extinct => Extinction; parasitoid tail below axis_tol
/// => AxisAttractor; detected period 1 => FixedPoint; period n => NCycle; then the
/// Lyapunov exponent: above the threshold Chaotic, within it InvariantCircle,
/// below it NCycle with period 0. Throws DomainError for a budget below min_budget.
AttractorReport classify_attractor(const ModelSpec& spec, const Stated& init, const ClassifyOptions& options = {});

/// Spread of the tail split into p interleaved subsequences: the largest distance
/// of any point from the centroid of its subsequence.
double interleaved_spread(const std::vector<Stated>& tail, int p);

/// Samples each subsequence needs before its spread is trusted.
inline constexpr std::size_t kModulationMinSamples = 200;

/// Smallest p whose interleaved spread is within 10% of the minimum over
/// p <= min(max_period, tail size / kModulationMinSamples), provided that minimum is below 3/4 of the undivided spread;
/// otherwise 1. Four circles visited in turn give 4.
int modulation_period(const std::vector<Stated>& tail, int max_period = kDefaultMaxPeriod);

struct BasinGrid {
    double x_lo = 0.0;
    double x_hi = 1.5;
    double y_lo = 0.0;
    double y_hi = 3.0;
    std::size_t nx = 256;
    std::size_t ny = 256;

    /// Node (i, j), endpoints included; x varies with i.
    Stated node(std::size_t i, std::size_t j) const;
};

struct BasinOptions {
    std::size_t transient = 10000;
    /// Consecutive post-transient iterates that must all lie near the same attractor.
    std::size_t check_steps = 16;
    double capture_radius = 0.05;
    unsigned threads = 1;
};

inline constexpr int kBasinOther = -1;
inline constexpr int kBasinExtinction = -2;

struct BasinResult {
    BasinGrid grid;
    /// Row-major, j * nx + i: attractor index, kBasinOther or kBasinExtinction.
    std::vector<int> labels;

    int at(std::size_t i, std::size_t j) const { return labels.at(j * grid.nx + i); }
};

/// Labels each grid node by the attractor its orbit ends on. Each attractor is a
/// point set (a fixed point, a cycle, or a sampled tail).
BasinResult basin_sample(const ModelSpec& spec, const BasinGrid& grid, const std::vector<std::vector<Stated>>& attractors,
                         const BasinOptions& options = {});

/// CSV: t,x,y
void write_orbit_csv(std::ostream& os, const Orbit& orbit);

}  // namespace hostpara
