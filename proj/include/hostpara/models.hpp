#pragma once

// Nondimensional host-parasitoid maps in which density dependence acts before
// parasitism:
//
//     x' = x u(x, y),   u = g(x) [1 - y h(y)]
//     y' = y v(x, y),   v = b x g(x) h(y)
//
// g is the per-capita recruitment (fractional = Beverton-Holt, exponential =
// Ricker) and h the parasitism escape kernel (fractional = negative binomial
// with kappa = 1, exponential = Poisson limit). The four combinations are the
// numbered models 1..4.

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "hostpara/errors.hpp"

namespace hostpara {

template <typename Scalar>
using State = Eigen::Matrix<Scalar, 2, 1>;
using Stated = State<double>;

template <typename Scalar>
using Jacobian2 = Eigen::Matrix<Scalar, 2, 2>;
using Jacobian2d = Jacobian2<double>;

enum class GrowthKind { Fractional, Exponential };
enum class ParasitismKind { Fractional, Exponential };

/// Below this argument the exponential kernel is evaluated from its Taylor series.
inline constexpr double kExpKernelSeriesSwitch = 1e-4;

struct ModelSpec {
    GrowthKind growth = GrowthKind::Fractional;
    ParasitismKind parasitism = ParasitismKind::Fractional;
    double r = 0.0;  ///< intrinsic growth rate, R0 = exp(r)
    double b = 1.0;  ///< composite a*c*K

    /// Model by number: 1 = (frac, frac), 2 = (exp, frac), 3 = (frac, exp), 4 = (exp, exp).
    static ModelSpec model(int index, double r, double b);
    static ModelSpec model_R0(int index, double R0, double b);

    int index() const noexcept;
    double R0() const { return std::exp(r); }
    /// R0 = 1: the x-axis is a line of equilibria.
    bool degenerate() const noexcept { return r == 0.0; }
    /// Name of the natural growth parameter for this model ("R0" or "r").
    const char* growth_param_name() const noexcept;
    /// Value of the natural growth parameter (R0 for fractional growth, r otherwise).
    double growth_param() const { return growth == GrowthKind::Fractional ? R0() : r; }
};

/// Throws DomainError unless r >= 0, b > 0 and both are finite.
void validate(const ModelSpec& spec);

std::string to_string(GrowthKind kind);
std::string to_string(ParasitismKind kind);

struct Partials {
    double u_x = 0.0;
    double u_y = 0.0;
    double v_x = 0.0;
    double v_y = 0.0;
};

// ---------------------------------------------------------------------------
// Kernels. Unchecked; the checked entry points are further down.

namespace kernel {

template <typename Scalar>
Scalar growth(const ModelSpec& spec, Scalar x) {
    using std::exp;
    const Scalar r = static_cast<Scalar>(spec.r);
    if (spec.growth == GrowthKind::Exponential) return exp(r * (Scalar(1) - x));
    const Scalar R0 = exp(r);
    return R0 / (Scalar(1) + (R0 - Scalar(1)) * x);
}

template <typename Scalar>
Scalar growth_derivative(const ModelSpec& spec, Scalar x) {
    using std::exp;
    const Scalar r = static_cast<Scalar>(spec.r);
    if (spec.growth == GrowthKind::Exponential) return -r * exp(r * (Scalar(1) - x));
    const Scalar R0 = exp(r);
    const Scalar d = Scalar(1) + (R0 - Scalar(1)) * x;
    return -R0 * (R0 - Scalar(1)) / (d * d);
}

/// h(y).
template <typename Scalar>
Scalar escape_kernel(const ModelSpec& spec, Scalar y) {
    using std::expm1;
    if (spec.parasitism == ParasitismKind::Fractional) return Scalar(1) / (Scalar(1) + y);
    if (y < Scalar(kExpKernelSeriesSwitch))
        return Scalar(1) - y / Scalar(2) + y * y / Scalar(6) - y * y * y / Scalar(24);
    return -expm1(-y) / y;
}

/// h'(y).
template <typename Scalar>
Scalar escape_kernel_derivative(const ModelSpec& spec, Scalar y) {
    using std::exp;
    using std::expm1;
    if (spec.parasitism == ParasitismKind::Fractional) {
        const Scalar d = Scalar(1) + y;
        return Scalar(-1) / (d * d);
    }
    if (y < Scalar(0.05)) {
        // sum_{k>=1} (-1)^k k y^(k-1) / (k+1)!
        Scalar sum = 0;
        Scalar power = 1;
        Scalar factorial = 2;
        for (int k = 1; k <= 12; ++k) {
            const Scalar term = Scalar(k) * power / factorial;
            sum += (k % 2 == 1) ? -term : term;
            power *= y;
            factorial *= Scalar(k + 2);
        }
        return sum;
    }
    return (y * exp(-y) + expm1(-y)) / (y * y);
}

/// 1 - y h(y): fraction of hosts escaping parasitism.
template <typename Scalar>
Scalar escape_fraction(const ModelSpec& spec, Scalar y) {
    using std::exp;
    if (spec.parasitism == ParasitismKind::Fractional) return Scalar(1) / (Scalar(1) + y);
    return exp(-y);
}

/// d/dy [1 - y h(y)].
template <typename Scalar>
Scalar escape_fraction_derivative(const ModelSpec& spec, Scalar y) {
    using std::exp;
    if (spec.parasitism == ParasitismKind::Fractional) {
        const Scalar d = Scalar(1) + y;
        return Scalar(-1) / (d * d);
    }
    return -exp(-y);
}

template <typename Scalar>
Scalar host_factor(const ModelSpec& spec, const State<Scalar>& s) {
    return growth(spec, s.x()) * escape_fraction(spec, s.y());
}

template <typename Scalar>
Scalar parasitoid_factor(const ModelSpec& spec, const State<Scalar>& s) {
    return static_cast<Scalar>(spec.b) * s.x() * growth(spec, s.x()) * escape_kernel(spec, s.y());
}

template <typename Scalar>
State<Scalar> step(const ModelSpec& spec, const State<Scalar>& s) {
    const Scalar x = s.x();
    const Scalar y = s.y();
    const Scalar g = growth(spec, x);
    const Scalar x_next = x * (g * escape_fraction(spec, y));
    const Scalar y_next = y * (static_cast<Scalar>(spec.b) * x * g * escape_kernel(spec, y));
    return State<Scalar>(x_next, y_next);
}

template <typename Scalar>
Jacobian2<Scalar> jacobian(const ModelSpec& spec, const State<Scalar>& s) {
    const Scalar x = s.x();
    const Scalar y = s.y();
    const Scalar b = static_cast<Scalar>(spec.b);
    const Scalar g = growth(spec, x);
    const Scalar dg = growth_derivative(spec, x);
    const Scalar e = escape_fraction(spec, y);
    const Scalar de = escape_fraction_derivative(spec, y);
    const Scalar h = escape_kernel(spec, y);
    const Scalar dh = escape_kernel_derivative(spec, y);
    const Scalar recruit = g + x * dg;  // d(x g)/dx
    Jacobian2<Scalar> J;
    J << recruit * e, x * g * de,
         b * y * recruit * h, b * x * g * (h + y * dh);
    return J;
}

}  // namespace kernel

// ---------------------------------------------------------------------------
// Checked operations.

/// g(x). Throws DomainError for non-finite or negative x.
double growth_per_capita(const ModelSpec& spec, double x);

/// h(y). Throws DomainError for non-finite or negative y.
double parasitism_factor(const ModelSpec& spec, double y);

/// One generation of the map. Throws DomainError outside the closed first quadrant.
Stated map_step(const ModelSpec& spec, const Stated& s);

/// u and v at a state.
double host_factor(const ModelSpec& spec, const Stated& s);
double parasitoid_factor(const ModelSpec& spec, const Stated& s);

/// General-form partial derivatives of u and v, valid at any state in the closed quadrant.
Partials partials_at(const ModelSpec& spec, const Stated& s);

/// Per-model simplified partials that hold only where u = v = 1.
/// Throws ContractError if s is not an interior point with |u-1|, |v-1| <= tol.
Partials equilibrium_partials(const ModelSpec& spec, const Stated& s, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Dimensional parameters.

struct RawParams {
    GrowthKind growth = GrowthKind::Fractional;
    ParasitismKind parasitism = ParasitismKind::Fractional;
    double a = 1.0;  ///< searching efficiency per parasitoid
    double c = 1.0;  ///< clutch size
    double K = 1.0;  ///< host carrying capacity
    double r = 0.0;

    static RawParams with_R0(GrowthKind g, ParasitismKind p, double a, double c, double K, double R0);
};

/// Nondimensional spec plus the N <-> x, P <-> y transforms (x = N/K, y = a P).
class Nondimensionalization {
public:
    Nondimensionalization(const ModelSpec& spec, double a, double K) : spec_(spec), a_(a), K_(K) {}

    const ModelSpec& spec() const noexcept { return spec_; }
    Stated to_nondimensional(double N, double P) const { return {N / K_, a_ * P}; }
    /// (N, P) for a nondimensional state.
    Eigen::Vector2d to_dimensional(const Stated& s) const { return {s.x() * K_, s.y() / a_}; }

private:
    ModelSpec spec_;
    double a_;
    double K_;
};

/// b = a c K. Throws DomainError for non-positive a, c, K or negative r.
Nondimensionalization from_raw(const RawParams& raw);

}  // namespace hostpara
