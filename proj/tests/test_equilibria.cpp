#include "doctest.h"

#include <random>

#include "hostpara/equilibria.hpp"
#include "oracles.hpp"

using namespace hostpara;

TEST_CASE("boundary equilibria") {
    for (int m = 1; m <= 4; ++m) {
        const auto eqs = boundary_equilibria(ModelSpec::model(m, 1, 2));
        CHECK(eqs[0].kind == EquilibriumKind::Extinction);
        CHECK(eqs[0].location == Stated(0, 0));
        CHECK(eqs[1].kind == EquilibriumKind::Exclusion);
        CHECK(eqs[1].location == Stated(1, 0));
    }
}

TEST_CASE("closed forms of models 1 and 2") {
    const auto m1 = coexistence_closed_form(ModelSpec::model_R0(1, 3.0, 2.0));
    REQUIRE(m1);
    CHECK(m1->location.x() == doctest::Approx(0.5));
    CHECK(m1->location.y() == doctest::Approx(3.0 / (1 + 2 * 0.5) - 1));
    const auto m2 = coexistence_closed_form(ModelSpec::model(2, 2.0, 4.0));
    REQUIRE(m2);
    CHECK(m2->location.x() == doctest::Approx(0.25));
    CHECK(m2->location.y() == doctest::Approx(std::exp(2.0 * 0.75) - 1));
    CHECK_FALSE(coexistence_closed_form(ModelSpec::model(1, 1.0, 1.0)));
    CHECK_FALSE(coexistence_closed_form(ModelSpec::model(2, 1.0, 0.8)));
    CHECK_FALSE(coexistence_closed_form(ModelSpec::model(2, 0.0, 3.0)));
    CHECK_THROWS_AS(coexistence_closed_form(ModelSpec::model(3, 1, 2)), ContractError);
    CHECK_THROWS_AS(coexistence_closed_form(ModelSpec::model(4, 1, 2)), ContractError);
}

TEST_CASE("closed forms agree with nullcline roots") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.05, 3), ub(1.05, 5);
    for (int m = 1; m <= 2; ++m)
        for (int k = 0; k < 100; ++k) {
            const auto spec = ModelSpec::model(m, ur(rng), ub(rng));
            const auto cf = coexistence_closed_form(spec);
            const auto num = coexistence_numeric(spec);
            REQUIRE(cf);
            REQUIRE(num.size() == 1);
            CHECK((cf->location - num[0].location).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(num[0].provenance == Provenance::NullclineRoot);
        }
}

TEST_CASE("numeric equilibria of models 3 and 4 sit where the inverse construction puts them") {
    // Pick y, derive the b that makes it an equilibrium, then ask the solver.
    for (int m : {3, 4})
        for (double r : {0.5, 1.0, 2.0, 2.5})
            for (double y : {0.05, 0.3, 0.8, 1.5}) {
                ModelSpec spec = ModelSpec::model(m, r, 1.0);
                if (oracle::host_x(spec, y) <= 0) continue;
                spec.b = oracle::b_for_equilibrium_y(spec, y);
                const auto eqs = coexistence_equilibria(spec);
                bool found = false;
                for (const auto& e : eqs)
                    if (std::abs(e.location.y() - y) < 1e-9 && std::abs(e.location.x() - oracle::host_x(spec, y)) < 1e-9)
                        found = true;
                CHECK_MESSAGE(found, "model " << m << " r " << r << " y " << y);
                for (const auto& e : eqs) CHECK(equilibrium_residual(spec, e.location) < 1e-10);
            }
}

TEST_CASE("model 3 interior equilibrium exists iff b > 1") {
    for (double R0 : {1.5, 2.0, 5.0}) {
        CHECK(coexistence_equilibria(ModelSpec::model_R0(3, R0, 0.9)).empty());
        CHECK(coexistence_equilibria(ModelSpec::model_R0(3, R0, 1.0)).empty());
        CHECK(coexistence_equilibria(ModelSpec::model_R0(3, R0, 1.1)).size() == 1);
        const auto xi = parasitoid_x_intercept(ModelSpec::model_R0(3, R0, 3.0));
        CHECK(xi.value == doctest::Approx(1.0 / (R0 * 2.0 + 1.0)));
        CHECK(xi.interior_equilibrium);
        CHECK_FALSE(parasitoid_x_intercept(ModelSpec::model_R0(3, R0, 0.8)).interior_equilibrium);
    }
}

TEST_CASE("model 3 reference values") {
    const auto spec = ModelSpec::model_R0(3, 2.0, 3.10801246436429);
    const auto eqs = coexistence_equilibria(spec);
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0].location.y() == doctest::Approx(0.4681756).epsilon(1e-6));
}

TEST_CASE("model 4 fold near b = 0.959 at r = 2.5") {
    const auto at = [](double b) { return coexistence_equilibria(ModelSpec::model(4, 2.5, b)); };
    CHECK(at(0.95).empty());
    CHECK(at(0.9589).empty());
    CHECK(at(0.96).size() == 2);
    CHECK(at(0.999).size() == 2);
    CHECK(at(1.0 + 1e-6).size() == 1);
    CHECK(at(1.5).size() == 1);
    const double bsn = saddle_node_b(ModelSpec::model(4, 2.5, 1.0));
    CHECK(bsn == doctest::Approx(0.959021754654865).epsilon(1e-10));
    CHECK(at(bsn - 1e-7).empty());
    CHECK(at(bsn + 1e-6).size() == 2);
    CHECK_THROWS(saddle_node_b(ModelSpec::model(4, 1.5, 1.0)));
}

TEST_CASE("nullcline samples stay on the nullclines") {
    const auto spec = ModelSpec::model(4, 2.5, 0.97);
    for (const auto& p : nullcline_samples(spec, Nullcline::Host, 0.05, 1.0, 20).points)
        CHECK(oracle::g(spec, p.x()) * (1 - p.y() * oracle::h(spec, p.y())) == doctest::Approx(1.0).epsilon(1e-10));
    const auto range = parasitoid_nullcline_range(spec, 2.0);
    REQUIRE(range);
    for (const auto& p : nullcline_samples(spec, Nullcline::Parasitoid, (*range)[0], (*range)[1], 20).points)
        CHECK(spec.b * p.x() * oracle::g(spec, p.x()) * oracle::h(spec, p.y()) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("degenerate R0 = 1 flags the line of equilibria") {
    const auto eqs = boundary_equilibria(ModelSpec::model(1, 0.0, 2.0));
    CHECK(eqs[1].degenerate);
}
