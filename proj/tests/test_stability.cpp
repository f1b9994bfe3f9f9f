#include "doctest.h"

#include <random>

#include <Eigen/Eigenvalues>

#include "hostpara/stability.hpp"
#include "oracles.hpp"

using namespace hostpara;

TEST_CASE("eigenvalues2 agrees with Eigen's general solver") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 2000; ++k) {
        Eigen::Matrix2d J;
        J << u(rng), u(rng), u(rng), u(rng);
        const auto ev = eigenvalues2(J);
        Eigen::EigenSolver<Eigen::Matrix2d> es(J, false);
        std::array<double, 2> a{std::abs(ev[0]), std::abs(ev[1])};
        std::array<double, 2> b{std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[1])};
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a[0] == doctest::Approx(b[0]).epsilon(1e-9));
        CHECK(a[1] == doctest::Approx(b[1]).epsilon(1e-9));
    }
}

TEST_CASE("eigenvalues2 keeps digits for widely separated roots") {
    Eigen::Matrix2d J;
    J << 1e8, 1, 0, 1e-8;
    const auto ev = eigenvalues2(J);
    CHECK(ev[0].real() == doctest::Approx(1e8));
    CHECK(ev[1].real() == doctest::Approx(1e-8).epsilon(1e-12));
}

TEST_CASE("jury residuals and verdict bands") {
    Eigen::Matrix2d J;
    J << 0.5, 0.1, -0.2, 0.3;
    const auto o = oracle::jury(J);
    const JuryReport rep = jury_from_matrix(J);
    CHECK(rep.j1 == doctest::Approx(o.j1));
    CHECK(rep.j2 == doctest::Approx(o.j2));
    CHECK(rep.j3 == doctest::Approx(o.j3));
    CHECK(rep.verdict == Verdict::Stable);
    CHECK(rep.failing.none());

    const JuryReport marginal = jury_from_residuals(0, 0, 5e-11, 1, 1);
    CHECK(marginal.verdict == Verdict::Marginal);
    CHECK(marginal.marginal.test(0));
    const JuryReport failing = jury_from_residuals(0, 0, 1, -1e-9, 1);
    CHECK(failing.verdict == Verdict::Unstable);
    CHECK(failing.failing.test(1));
}

TEST_CASE("jury verdict matches eigenvalue moduli on random equilibria") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(0.05, 4), ub(0.9, 8);
    int compared = 0;
    for (int m = 1; m <= 4; ++m)
        for (int k = 0; k < 300; ++k) {
            const auto spec = ModelSpec::model(m, ur(rng), ub(rng));
            for (const auto& eq : coexistence_equilibria(spec)) {
                const auto c = classify_equilibrium(spec, eq);
                REQUIRE(c.jury);
                const double rho = std::max(c.moduli[0], c.moduli[1]);
                if (std::abs(rho - 1) < 1e-8) continue;
                if (c.jury->verdict == Verdict::Marginal) continue;
                CHECK(c.jury->verdict == c.verdict);
                ++compared;
            }
        }
    CHECK(compared > 500);
}

TEST_CASE("equilibrium jury report matches the reference jacobian") {
    for (int m = 1; m <= 4; ++m) {
        const auto spec = ModelSpec::model(m, 2.2, 1.7);
        for (const auto& eq : coexistence_equilibria(spec)) {
            const auto fd = oracle::fd_jacobian([&](const Stated& s) { return oracle::step(spec, s); }, eq.location);
            const auto o = oracle::jury(fd);
            const JuryReport rep = jury_report(spec, eq);
            CHECK(rep.j1 == doctest::Approx(o.j1).epsilon(1e-6));
            CHECK(rep.j2 == doctest::Approx(o.j2).epsilon(1e-6));
            CHECK(rep.j3 == doctest::Approx(o.j3).epsilon(1e-6));
        }
    }
}

TEST_CASE("jury report refuses boundary equilibria") {
    const auto spec = ModelSpec::model(1, 1, 2);
    CHECK_THROWS_AS(jury_report(spec, boundary_equilibria(spec)[1]), ContractError);
}

TEST_CASE("exclusion stability") {
    CHECK(exclusion_stability(ModelSpec::model(1, 1.0, 0.5)) == Verdict::Stable);
    CHECK(exclusion_stability(ModelSpec::model(3, 1.0, 0.5)) == Verdict::Stable);
    CHECK(exclusion_stability(ModelSpec::model(2, 1.5, 0.5)) == Verdict::Stable);
    CHECK(exclusion_stability(ModelSpec::model(2, 2.5, 0.5)) == Verdict::Unstable);
    CHECK(exclusion_stability(ModelSpec::model(4, 2.5, 0.5)) == Verdict::Unstable);
    CHECK(exclusion_stability(ModelSpec::model(1, 1.0, 1.5)) == Verdict::Unstable);
}

TEST_CASE("model 1 interior equilibrium is stable") {
    for (double R0 : {1.1, 2.0, 10.0, 50.0})
        for (double b : {1.05, 2.0, 10.0, 50.0}) {
            const auto spec = ModelSpec::model_R0(1, R0, b);
            const auto eqs = coexistence_equilibria(spec);
            REQUIRE(eqs.size() == 1);
            CHECK(jury_report(spec, eqs[0]).verdict == Verdict::Stable);
        }
}

TEST_CASE("bifurcation hint near a boundary") {
    // Model 2 period-doubling boundary at b = 1.1.
    const auto spec = ModelSpec::model(2, 2.10423914501799, 1.1);
    const auto eqs = coexistence_equilibria(spec);
    REQUIRE(eqs.size() == 1);
    const auto c = classify_equilibrium(spec, eqs[0]);
    REQUIRE(c.hint);
    CHECK(c.hint->kind == BifurcationKind::PeriodDoubling);
}
