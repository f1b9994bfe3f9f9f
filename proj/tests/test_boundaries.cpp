#include "doctest.h"

#include <sstream>

#include "hostpara/boundaries.hpp"
#include "oracles.hpp"

using namespace hostpara;

namespace {

// Curve expressions evaluated literally; fine away from y = 0.
double m3_R0(double y) { return y * std::exp(2 * y) / (std::exp(y) - 1); }
double m3_b(double y) {
    const double E = std::exp(y);
    return (y * y * E * E - y * E + y) / ((E - 1) * (y * E - E + 1));
}
std::array<double, 2> m4(int jury, double y) {
    const double E = std::exp(y);
    switch (jury) {
        case 1: return {y * y * E / (1 + y * E - E), y * y * E / ((E - 1) * (E - 1))};
        case 2:
            return {(E * (y * y + 2 * y + 2) - 2) / (E * (y + 1) - 1),
                    (2 * y * (E - 1) + y * y * E * (2 + y)) / ((2 + y) * E * E - 4 * E - y + 2)};
        default: return {(E * (y * y + y - 1) + 1) / (y * E), (E * (y * y * y + y * y - y) + y) / ((E - 1) * (y * E - E + 1))};
    }
}

}  // namespace

TEST_CASE("geometric grid") {
    const auto g = geometric_grid(1e-4, 10, 6);
    REQUIRE(g.size() == 6);
    CHECK(g.front() == 1e-4);
    CHECK(g.back() == 10);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(10.0));
    CHECK_THROWS_AS(geometric_grid(0, 1, 5), DomainError);
    CHECK_THROWS_AS(geometric_grid(1, 2, 1), DomainError);
}

TEST_CASE("expm1 minus argument") {
    for (double y : {1e-10, 1e-5, 0.1, 0.49, 0.5, 1.0, 5.0, -0.3}) {
        const long double ly = y;
        const long double ref = std::expm1(ly) - ly;
        CHECK(expm1_minus_arg(y) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
    }
}

TEST_CASE("curve points match the literal expressions") {
    for (double y : {0.3, 1.0, 2.5, 6.0}) {
        const auto p3 = model3_jury3_point(y);
        CHECK(p3.growth == doctest::Approx(m3_R0(y)).epsilon(1e-12));
        CHECK(p3.b == doctest::Approx(m3_b(y)).epsilon(1e-12));
        for (int j = 1; j <= 3; ++j) {
            const auto p = model4_curve_point(j, y);
            CHECK(p.growth == doctest::Approx(m4(j, y)[0]).epsilon(1e-12));
            CHECK(p.b == doctest::Approx(m4(j, y)[1]).epsilon(1e-12));
        }
    }
    // Model 2: r = u b, with 3 - 2u + exp(r (1/b - 1)) = 0.
    for (double u : {1.6, 2.0, 3.0, 6.0}) {
        const auto p = model2_jury2_point(u);
        CHECK(p.growth / p.b == doctest::Approx(u));
        CHECK(3 - 2 * u + std::exp(p.growth / p.b - p.growth) == doctest::Approx(0.0).epsilon(1e-12));
    }
    const auto p = model2_jury2_point(3.0);
    CHECK(p.growth == doctest::Approx(1.90138771133189).epsilon(1e-12));
    CHECK(p.b == doctest::Approx(0.633795903777297).epsilon(1e-12));
}

TEST_CASE("points on each curve zero the corresponding jury residual") {
    struct Case {
        int model, jury;
    };
    for (const Case c : {Case{2, 2}, Case{3, 3}, Case{4, 1}, Case{4, 2}, Case{4, 3}})
        for (double t : {0.05, 0.2, 0.4, 0.7, 1.5}) {
            const CurveSample s = c.model == 2 ? model2_jury2_point(1.5 + t / 3) : c.model == 3 ? model3_jury3_point(t)
                                                                                               : model4_curve_point(c.jury, t);
            if (!s.in_existence_region) continue;
            const ModelSpec spec = c.model == 3 ? ModelSpec::model_R0(3, s.growth, s.b) : ModelSpec::model(c.model, s.growth, s.b);
            // The equilibrium the curve point describes: y = t on the host nullcline
            // (models 3, 4), the closed form for model 2.
            Stated z;
            if (c.model == 2) {
                z = coexistence_closed_form(spec)->location;
            } else {
                z = Stated(oracle::host_x(spec, t), t);
            }
            CHECK(equilibrium_residual(spec, z) < 1e-12);
            const auto fd = oracle::fd_jacobian([&](const Stated& w) { return oracle::step(spec, w); }, z);
            const auto o = oracle::jury(fd);
            CHECK(std::abs(c.jury == 1 ? o.j1 : c.jury == 2 ? o.j2 : o.j3) < 1e-6);
            EquilibriumRecord rec;
            rec.location = z;
            rec.kind = EquilibriumKind::Coexistence;
            CHECK(std::abs(jury_report(spec, rec).residual(c.jury)) < 1e-8);
            // The root finder sees the same equilibrium; at the fold it is a double root.
            bool near = false;
            for (const auto& eq : coexistence_equilibria(spec))
                near = near || (eq.location - z).norm() < (c.jury == 1 ? 1e-5 : 1e-9);
            CHECK_MESSAGE(near, "model " << c.model << " jury " << c.jury << " t " << t);
        }
}

TEST_CASE("curve inversion agrees with bisection on the residual") {
    for (double r : {2.1, 2.5, 3.5}) {
        const auto s = invert_model2_curve(r);
        CHECK(s.growth == doctest::Approx(r));
        const double bc = critical_parameter(ModelSpec::model(2, r, 1.0), FreeParameter::B, 2, s.b - 0.02, s.b + 0.2);
        CHECK(std::abs(bc - s.b) < 1e-8);
    }
    for (double R0 : {1.5, 2.0, 5.0}) {
        const auto s = invert_model3_curve(R0);
        const double bc = critical_parameter(ModelSpec::model_R0(3, R0, 1.0), FreeParameter::B, 3, s.b * 0.8, s.b * 1.2);
        CHECK(std::abs(bc - s.b) < 1e-8);
    }
    const auto s3 = invert_model4_curve(3, 2.5);
    CHECK(s3.b == doctest::Approx(1.45543401812941).epsilon(1e-12));
    const double bc3 = critical_parameter(ModelSpec::model(4, 2.5, 1.0), FreeParameter::B, 3, 1.2, 1.8);
    CHECK(std::abs(bc3 - s3.b) < 1e-8);
    CHECK(invert_model4_curve(1, 2.5).b == doctest::Approx(0.959021754654865).epsilon(1e-12));
    CHECK(invert_model4_curve(2, 2.5).b == doctest::Approx(0.960976028547415).epsilon(1e-12));
    CHECK_THROWS_AS(invert_model2_curve(1.0), DomainError);
    CHECK_THROWS_AS(invert_curve(1, 1, 2.0), DomainError);
}

TEST_CASE("critical r along model 2 period doubling") {
    CHECK(invert_curve(2, 2, 2.10423914501799).growth == doctest::Approx(2.10423914501799));
    const double r11 = critical_parameter(ModelSpec::model(2, 2.0, 1.1), FreeParameter::R, 2, 1.8, 2.6);
    CHECK(r11 == doctest::Approx(2.10423914501799).epsilon(1e-10));
    const double r19 = critical_parameter(ModelSpec::model(2, 2.0, 1.9), FreeParameter::R, 2, 2.5, 3.5);
    CHECK(r19 == doctest::Approx(3.07172429325834).epsilon(1e-10));
    CHECK_THROWS_AS(critical_parameter(ModelSpec::model(2, 2.0, 1.1), FreeParameter::R, 2, 0.5, 1.5), NumericError);
}

TEST_CASE("region verdicts") {
    CHECK(region_verdict(ModelSpec::model_R0(1, 3, 2)).stable);
    const auto none = region_verdict(ModelSpec::model_R0(1, 3, 0.5));
    CHECK_FALSE(none.stable);
    CHECK(none.failing == std::bitset<3>("001"));
    const auto deg = region_verdict(ModelSpec::model(1, 0.0, 2));
    CHECK(deg.degenerate);
    CHECK(deg.failing == std::bitset<3>("101"));
    const auto ns = region_verdict(ModelSpec::model_R0(3, 2.0, 3.5));
    CHECK_FALSE(ns.stable);
    CHECK(ns.failing.test(2));
    const auto fold = region_verdict(ModelSpec::model(4, 2.5, 0.97));
    CHECK(fold.n_coexistence == 2);
    CHECK(fold.stable);
    CHECK(fold.stable_equilibrium_index == 1);
    const auto both = region_verdict(ModelSpec::model(4, 2.5, 0.96));
    CHECK_FALSE(both.stable);
    CHECK(both.failing.test(1));
}

TEST_CASE("curve csv") {
    std::ostringstream os;
    write_curves_csv(os, {curves_model4(3, 0.1, 1.0, 3)});
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "internal_param,growth_param,b,model,jury");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("degenerate lines") {
    const auto lines = degenerate_lines(4, 5.0, 3.0);
    bool b1 = false, r0 = false;
    for (const auto& l : lines) {
        if (l.kind == CurveKind::LineB1) {
            b1 = true;
            for (const auto& s : l.samples) CHECK(s.b == 1.0);
        }
        if (l.kind == CurveKind::LineR0) {
            r0 = true;
            for (const auto& s : l.samples) CHECK(s.growth == 0.0);
        }
    }
    CHECK(b1);
    CHECK(r0);
}
