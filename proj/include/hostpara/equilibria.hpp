#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hostpara/models.hpp"

namespace hostpara {

enum class EquilibriumKind { Extinction, Exclusion, Coexistence };
enum class Provenance { ClosedForm, NullclineRoot };

std::string to_string(EquilibriumKind kind);
std::string to_string(Provenance p);

struct EquilibriumRecord {
    Stated location = Stated::Zero();
    EquilibriumKind kind = EquilibriumKind::Extinction;
    Provenance provenance = Provenance::ClosedForm;
    /// max(|u-1|, |v-1|) at the location; zero for boundary equilibria.
    double residual = 0.0;
    /// R0 = 1: the record sits on a line of equilibria.
    bool degenerate = false;
    /// Two nullcline roots closer than the tangency threshold merged into this record.
    bool tangent = false;
};

/// Extinction (0,0) and exclusion (1,0).
std::array<EquilibriumRecord, 2> boundary_equilibria(const ModelSpec& spec);

/// Closed-form interior equilibrium of models 1 and 2; empty unless b > 1 and r > 0.
/// Throws ContractError for models 3 and 4.
std::optional<EquilibriumRecord> coexistence_closed_form(const ModelSpec& spec);

struct RootScanOptions {
    std::size_t grid_points = 2048;
    double y_floor = 1e-8;
    double bisection_width = 1e-6;  ///< relative to the bracket midpoint
    double residual_tol = 1e-12;
    double tangent_separation = 1e-7;
    int max_iterations = 100;
};

/// Interior equilibria from the host-nullcline elimination x = x(y) and a root
/// search on the parasitoid residual. Sorted by ascending y. Accepts every model;
/// for models 1 and 2 it is an independent check of the closed form.
std::vector<EquilibriumRecord> coexistence_numeric(const ModelSpec& spec, const RootScanOptions& options = {});

/// Closed form for models 1-2, nullcline roots for 3-4.
std::vector<EquilibriumRecord> coexistence_equilibria(const ModelSpec& spec);

/// max(|u-1|, |v-1|).
double equilibrium_residual(const ModelSpec& spec, const Stated& s);

/// Parasitoid residual v(x(y), y) - 1 along the host nullcline.
double nullcline_residual(const ModelSpec& spec, double y);

/// Largest y reachable on the host nullcline in the first quadrant (where x reaches 0).
double host_nullcline_y_max(const ModelSpec& spec);

/// x on the host nullcline at a given y.
double host_nullcline_x(const ModelSpec& spec, double y);

/// Model 4, r > 2: b at which the nullclines become tangent (fold of the interior pair).
double saddle_node_b(const ModelSpec& spec);

struct XIntercept {
    double value = 0.0;  ///< +inf when R0 (b - 1) + 1 = 0
    bool interior_equilibrium = false;
};

/// Model 3: x-intercept 1 / (R0 (b - 1) + 1) of the parasitoid nullcline.
XIntercept parasitoid_x_intercept(const ModelSpec& spec);

enum class Nullcline { Host, Parasitoid };

struct NullclineSamples {
    Nullcline which = Nullcline::Host;
    std::vector<Stated> points;
};

/// n points of the selected nullcline, parameterised by x in [x_lo, x_hi].
/// Throws DomainError where the nullcline leaves the closed first quadrant.
NullclineSamples nullcline_samples(const ModelSpec& spec, Nullcline which, double x_lo, double x_hi,
                                   std::size_t n);

/// x-range on which the parasitoid nullcline lies in the closed first quadrant
/// (b x g(x) >= 1), bounded above by x_cap. Empty optional when there is none.
std::optional<std::array<double, 2>> parasitoid_nullcline_range(const ModelSpec& spec, double x_cap);

}  // namespace hostpara
