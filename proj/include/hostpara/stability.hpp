#pragma once

#include <array>
#include <bitset>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "hostpara/equilibria.hpp"
#include "hostpara/models.hpp"

namespace hostpara {

/// Jury residuals inside this band are marginal, never stable.
inline constexpr double kJuryTolerance = 1e-10;

enum class Verdict { Stable, Unstable, Marginal };
std::string to_string(Verdict v);

struct JuryReport {
    double tau = 0.0;
    double delta = 0.0;
    double j1 = 0.0;  ///< 1 - tau + delta
    double j2 = 0.0;  ///< 1 + tau + delta
    double j3 = 0.0;  ///< 1 - delta
    Verdict verdict = Verdict::Marginal;
    std::bitset<3> failing;   ///< bit k set: condition k+1 below -tol
    std::bitset<3> marginal;  ///< bit k set: condition k+1 within [-tol, tol]

    double residual(int jury) const { return jury == 1 ? j1 : jury == 2 ? j2 : j3; }
};

/// Verdict and condition sets from the three residuals.
JuryReport jury_from_residuals(double tau, double delta, double j1, double j2, double j3,
                               double tol = kJuryTolerance);

/// Jury conditions of an arbitrary 2x2 matrix.
JuryReport jury_from_matrix(const Jacobian2d& J, double tol = kJuryTolerance);

template <typename Scalar>
using EigenPair = std::array<std::complex<Scalar>, 2>;
using Eigenvalues = EigenPair<double>;

/// Eigenvalues of a 2x2 matrix from the characteristic quadratic. The
/// discriminant is formed as ((a-d)/2)^2 + bc and the real roots as q and det/q,
/// so neither near-equal nor widely separated roots lose digits.
template <typename Derived>
EigenPair<typename Derived::Scalar> eigenvalues2(const Eigen::MatrixBase<Derived>& J) {
    using Scalar = typename Derived::Scalar;
    using std::abs;
    using std::sqrt;
    const Scalar a = J(0, 0), b = J(0, 1), c = J(1, 0), d = J(1, 1);
    const Scalar half_tr = (a + d) / Scalar(2);
    const Scalar half_diff = (a - d) / Scalar(2);
    const Scalar disc = half_diff * half_diff + b * c;
    const Scalar det = a * d - b * c;
    if (disc >= Scalar(0)) {
        const Scalar root = sqrt(disc);
        const Scalar q = half_tr >= Scalar(0) ? half_tr + root : half_tr - root;
        const Scalar other = q != Scalar(0) ? det / q : half_tr - (q - half_tr);
        return {std::complex<Scalar>(q, 0), std::complex<Scalar>(other, 0)};
    }
    const Scalar im = sqrt(-disc);
    return {std::complex<Scalar>(half_tr, im), std::complex<Scalar>(half_tr, -im)};
}

/// Analytic Jacobian of the map.
Jacobian2d jacobian_at(const ModelSpec& spec, const Stated& s);

/// Stable iff both |lambda| < 1 - band, unstable if either exceeds 1 + band.
Verdict verdict_from_eigenvalues(const Eigenvalues& ev, double band = kJuryTolerance);

/// Exclusion point (1,0): eigenvalues g'(1) + 1 and b.
Verdict exclusion_stability(const ModelSpec& spec);

/// Jury report for a coexistence equilibrium from the per-model simplified
/// partials. Throws ContractError for extinction or exclusion records.
JuryReport jury_report(const ModelSpec& spec, const EquilibriumRecord& eq, double tol = kJuryTolerance);

enum class BifurcationKind { FoldOrTranscritical, PeriodDoubling, NeimarkSacker };
std::string to_string(BifurcationKind k);

struct BifurcationHint {
    BifurcationKind kind = BifurcationKind::FoldOrTranscritical;
    double residual = 0.0;  ///< the Jury residual (or eigenvalue distance) that triggered it
    Eigenvalues eigenvalues{};
};

struct EquilibriumClassification {
    Verdict verdict = Verdict::Marginal;
    Eigenvalues eigenvalues{};
    std::array<double, 2> moduli{};
    bool complex_pair = false;
    std::optional<JuryReport> jury;
    std::optional<BifurcationHint> hint;
};

/// Eigenvalues plus Jury verdict; attaches a bifurcation hint when a residual is within hint_tol of 0.
EquilibriumClassification classify_equilibrium(const ModelSpec& spec, const EquilibriumRecord& eq,
                                               double hint_tol = 1e-6);

}  // namespace hostpara
