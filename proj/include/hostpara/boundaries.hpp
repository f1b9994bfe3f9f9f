#pragma once

// Stability boundaries of the coexistence equilibrium in the (growth, b) plane.
//
// Each boundary is a curve on which one Jury residual vanishes. Eliminating x
// between the two nullclines and the vanishing residual leaves the growth
// parameter and b as explicit functions of one internal variable: u = r/b for
// model 2, the equilibrium y for models 3 and 4. Model 1 has no curve; its
// region is bounded only by the lines b = 1 and R0 = 1.

#include <bitset>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hostpara/equilibria.hpp"
#include "hostpara/models.hpp"
#include "hostpara/stability.hpp"

namespace hostpara {

enum class GrowthParam { R0, r };
enum class CurveKind { Parametric, LineB1, LineR0 };

std::string to_string(GrowthParam p);
std::string to_string(CurveKind k);

struct CurveSample {
    double internal = 0.0;  ///< u (model 2) or y (models 3, 4); NaN on the straight lines
    double growth = 0.0;    ///< R0 (model 3) or r (models 2, 4)
    double b = 0.0;
    /// Parameters admit a coexistence equilibrium (b > 1 for models 1-3).
    bool in_existence_region = true;
};

struct BoundaryCurve {
    int model = 0;
    int jury = 0;
    GrowthParam param_kind = GrowthParam::r;
    CurveKind kind = CurveKind::Parametric;
    std::vector<CurveSample> samples;
};

/// Default sampling: 512 points, geometric in the internal variable over (1e-4, 10).
inline constexpr std::size_t kDefaultCurvePoints = 512;
inline constexpr double kDefaultCurveLo = 1e-4;
inline constexpr double kDefaultCurveHi = 10.0;

/// n points from lo to hi with constant ratio. Requires 0 < lo <= hi, n >= 2.
std::vector<double> geometric_grid(double lo, double hi, std::size_t n);

/// e^y - 1 - y without cancellation.
double expm1_minus_arg(double y);

// Single curve points.
CurveSample model2_jury2_point(double u);
CurveSample model3_jury3_point(double y);
CurveSample model4_curve_point(int jury, double y);

/// Model 2 period-doubling boundary, u in (3/2, inf); samples geometric in u - 3/2 over [u_lo - 3/2, u_hi - 3/2].
BoundaryCurve curve_model2_jury2(double u_lo, double u_hi, std::size_t n = kDefaultCurvePoints);
/// Model 3 Neimark-Sacker boundary in the (R0, b) plane.
BoundaryCurve curve_model3_jury3(double y_lo, double y_hi, std::size_t n = kDefaultCurvePoints);
/// Model 4 boundary for Jury condition 1, 2 or 3 in the (r, b) plane.
BoundaryCurve curves_model4(int jury, double y_lo, double y_hi, std::size_t n = kDefaultCurvePoints);

/// Every parametric curve of a model, at default sampling.
std::vector<BoundaryCurve> model_curves(int model);

/// Straight boundary lines b = 1 (Jury 1) and R0 = 1 (Jury 1 and 3) over the given window.
std::vector<BoundaryCurve> degenerate_lines(int model, double growth_hi, double b_hi, std::size_t n = 2);

/// b on the curve at a given growth parameter, by monotone bisection on the
/// internal variable. Throws DomainError if the growth value is not reached.
CurveSample invert_model2_curve(double r);
CurveSample invert_model3_curve(double R0);
CurveSample invert_model4_curve(int jury, double r);
/// Dispatch on (model, jury) for the curves that exist.
CurveSample invert_curve(int model, int jury, double growth);

struct RegionVerdict {
    bool stable = false;
    std::bitset<3> failing;  ///< for the indexed (or upper) equilibrium; {J1} when none exists
    int n_coexistence = 0;
    std::optional<int> stable_equilibrium_index;
    bool degenerate = false;
    std::vector<EquilibriumRecord> equilibria;
    std::vector<JuryReport> reports;
};

/// Direct classification of the coexistence equilibria at one parameter point.
RegionVerdict region_verdict(const ModelSpec& spec);

enum class FreeParameter { B, R, R0 };
std::string to_string(FreeParameter p);

/// spec with the free parameter replaced by value.
ModelSpec with_parameter(const ModelSpec& spec, FreeParameter which, double value);

/// Jury residual of the tracked (largest-y) coexistence equilibrium. Throws
/// DomainError if no coexistence equilibrium exists.
double tracked_jury_residual(const ModelSpec& spec, int jury);

/// Parameter value in [lo, hi] at which the selected Jury residual crosses zero.
/// For Jury 1 a missing coexistence equilibrium counts as a negative residual,
/// so a fold is located where the pair appears. Throws NumericError when the
/// residual has no sign change over the bracket.
double critical_parameter(const ModelSpec& spec, FreeParameter which, int jury, double lo, double hi);

/// CSV: internal_param,growth_param,b,model,jury
void write_curves_csv(std::ostream& os, const std::vector<BoundaryCurve>& curves);

}  // namespace hostpara
