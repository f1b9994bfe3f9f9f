#include "hostpara/stability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

namespace hostpara {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        case Verdict::Marginal: return "marginal";
    }
    return "unknown";
}

std::string to_string(BifurcationKind k) {
    switch (k) {
        case BifurcationKind::FoldOrTranscritical: return "fold_or_transcritical";
        case BifurcationKind::PeriodDoubling: return "period_doubling";
        case BifurcationKind::NeimarkSacker: return "neimark_sacker";
    }
    return "unknown";
}

JuryReport jury_from_residuals(double tau, double delta, double j1, double j2, double j3, double tol) {
    JuryReport rep;
    rep.tau = tau;
    rep.delta = delta;
    rep.j1 = j1;
    rep.j2 = j2;
    rep.j3 = j3;
    const std::array<double, 3> js{j1, j2, j3};
    for (std::size_t k = 0; k < 3; ++k) {
        if (js[k] < -tol) rep.failing.set(k);
        else if (js[k] <= tol) rep.marginal.set(k);
    }
    if (rep.failing.any()) rep.verdict = Verdict::Unstable;
    else if (rep.marginal.any()) rep.verdict = Verdict::Marginal;
    else rep.verdict = Verdict::Stable;
    return rep;
}

JuryReport jury_from_matrix(const Jacobian2d& J, double tol) {
    const double tau = J.trace();
    const double delta = J.determinant();
    return jury_from_residuals(tau, delta, 1.0 - tau + delta, 1.0 + tau + delta, 1.0 - delta, tol);
}

Jacobian2d jacobian_at(const ModelSpec& spec, const Stated& s) {
    validate(spec);
    if (!(s.x() >= 0.0) || !(s.y() >= 0.0) || !std::isfinite(s.x()) || !std::isfinite(s.y()))
        throw DomainError("Jacobian requested outside the closed first quadrant");
    return kernel::jacobian(spec, s);
}

Verdict verdict_from_eigenvalues(const Eigenvalues& ev, double band) {
    const double m = std::max(std::abs(ev[0]), std::abs(ev[1]));
    if (m < 1.0 - band) return Verdict::Stable;
    if (m > 1.0 + band) return Verdict::Unstable;
    return Verdict::Marginal;
}

Verdict exclusion_stability(const ModelSpec& spec) {
    validate(spec);
    const double lambda1 = kernel::growth_derivative(spec, 1.0) + 1.0;
    const Eigenvalues ev{std::complex<double>(lambda1, 0.0), std::complex<double>(spec.b, 0.0)};
    return verdict_from_eigenvalues(ev);
}

JuryReport jury_report(const ModelSpec& spec, const EquilibriumRecord& eq, double tol) {
    if (eq.kind != EquilibriumKind::Coexistence)
        throw ContractError("jury_report takes a coexistence equilibrium; use exclusion_stability for (1,0)");
    const double x = eq.location.x();
    const double y = eq.location.y();
    const Partials p = equilibrium_partials(spec, eq.location);
    const double cross = x * y * (p.u_x * p.v_y - p.u_y * p.v_x);
    const double diag = x * p.u_x + y * p.v_y;
    const double tau = 2.0 + diag;
    const double delta = 1.0 + diag + cross;
    return jury_from_residuals(tau, delta, cross, 4.0 + 2.0 * diag + cross, -(diag + cross), tol);
}

EquilibriumClassification classify_equilibrium(const ModelSpec& spec, const EquilibriumRecord& eq, double hint_tol) {
    EquilibriumClassification out;
    const Jacobian2d J = jacobian_at(spec, eq.location);
    out.eigenvalues = eigenvalues2(J);
    out.moduli = {std::abs(out.eigenvalues[0]), std::abs(out.eigenvalues[1])};
    out.complex_pair = out.eigenvalues[0].imag() != 0.0;

    if (eq.kind == EquilibriumKind::Coexistence) {
        out.jury = jury_report(spec, eq);
        out.verdict = out.jury->verdict;
        const JuryReport& j = *out.jury;
        auto attach = [&](BifurcationKind kind, double residual) {
            if (!out.hint || std::abs(residual) < std::abs(out.hint->residual))
                out.hint = BifurcationHint{kind, residual, out.eigenvalues};
        };
        if (std::abs(j.j1) < hint_tol) attach(BifurcationKind::FoldOrTranscritical, j.j1);
        if (std::abs(j.j2) < hint_tol) attach(BifurcationKind::PeriodDoubling, j.j2);
        if (std::abs(j.j3) < hint_tol && out.complex_pair) attach(BifurcationKind::NeimarkSacker, j.j3);
        return out;
    }

    out.verdict = eq.kind == EquilibriumKind::Exclusion ? exclusion_stability(spec) : verdict_from_eigenvalues(out.eigenvalues);
    if (eq.kind == EquilibriumKind::Exclusion) {
        // Triangular: lambda = (g'(1) + 1, b).
        const double lambda1 = J(0, 0);
        if (std::abs(spec.b - 1.0) < hint_tol)
            out.hint = BifurcationHint{BifurcationKind::FoldOrTranscritical, spec.b - 1.0, out.eigenvalues};
        else if (std::abs(lambda1 + 1.0) < hint_tol)
            out.hint = BifurcationHint{BifurcationKind::PeriodDoubling, lambda1 + 1.0, out.eigenvalues};
    }
    return out;
}

}  // namespace hostpara
