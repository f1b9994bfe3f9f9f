#include "doctest.h"

#include <sstream>

#include "hostpara/io.hpp"
#include "hostpara/parallel.hpp"
#include "hostpara/report.hpp"
#include "hostpara/sweep.hpp"

using namespace hostpara;

namespace {

SweepConfig model3_sweep() {
    SweepConfig c;
    c.base = ModelSpec::model_R0(3, 2.0, 3.0);
    c.parameter = FreeParameter::B;
    c.start = 2.5;
    c.stop = 4.0;
    c.count = 4;
    c.tail_points = 20;
    c.budget.transient = 3000;
    c.budget.lyapunov_window = 3000;
    return c;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> row;
        std::stringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) row.push_back(f);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 5e-324, -2.5, 1e300, 0.959021754654865})
        CHECK(parse_double(format_double(v)) == v);
    CHECK(format_double(0.5) == "0.5");
    CHECK(std::isnan(parse_double(format_double(std::nan("")))));
    CHECK_THROWS_AS(parse_double("abc"), std::invalid_argument);
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(hex64(0xabcull) == "0000000000000abc");
}

TEST_CASE("parallel_for visits every index and propagates the first error") {
    std::vector<int> seen(1000, 0);
    parallel_for(seen.size(), 4, [&](std::size_t i) { seen[i] += 1; });
    CHECK(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
    CHECK_THROWS_WITH(parallel_for(100, 4,
                                   [](std::size_t i) {
                                       if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
                                   }),
                      "17");
}

TEST_CASE("sweep values and validation") {
    SweepConfig c = model3_sweep();
    CHECK(sweep_value(c, 0) == 2.5);
    CHECK(sweep_value(c, 3) == 4.0);
    CHECK(sweep_value(c, 1) == doctest::Approx(3.0));
    c.start = 4.0;
    c.stop = 2.5;
    CHECK(sweep_value(c, 1) == doctest::Approx(3.5));
    c.count = 1;
    CHECK_THROWS_AS(validate(c), DomainError);
    c.count = 0;
    CHECK(bifurcation_scan(c).points.empty());
    c = model3_sweep();
    c.start = -1;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = model3_sweep();
    c.parameter = FreeParameter::R0;
    c.start = 0.5;
    CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("inherit scan crosses the Neimark-Sacker boundary") {
    const SweepResult res = bifurcation_scan(model3_sweep());
    REQUIRE(res.points.size() == 4);
    CHECK(res.points.front().attractors.at(0).cls == AttractorClass::FixedPoint);
    CHECK(res.points.back().attractors.at(0).cls == AttractorClass::InvariantCircle);
    CHECK(res.points[0].attractors[0].tail.size() == 20);
    CHECK(res.provenance.version == kLibraryVersion);
    CHECK(res.provenance.config_hash.size() == 16);
}

TEST_CASE("reset scan is deterministic across worker counts") {
    SweepConfig c;
    c.base = ModelSpec::model(2, 2.92, 1.9);
    c.parameter = FreeParameter::R;
    c.start = 2.91;
    c.stop = 2.93;
    c.count = 3;
    c.policy = ContinuationPolicy::Reset;
    c.random_starts = 2;
    c.seed = 42;
    c.tail_points = 10;
    c.budget.transient = 5000;
    c.budget.lyapunov_window = 5000;
    std::ostringstream a, b;
    write_scan_csv(a, bifurcation_scan(c));
    c.threads = 4;
    const SweepResult res = bifurcation_scan(c);
    write_scan_csv(b, res);
    CHECK(a.str() == b.str());
    // r = 2.92 is bistable.
    CHECK(res.points[1].attractors.size() >= 2);
    c.seed = 43;
    CHECK(config_hash(c) != res.provenance.config_hash);
}

TEST_CASE("region raster csv round-trips and matches direct verdicts") {
    RegionConfig rc;
    rc.model = 4;
    rc.growth_lo = 0;
    rc.growth_hi = 5;
    rc.b_lo = 0;
    rc.b_hi = 3;
    rc.n_growth = 16;
    rc.n_b = 12;
    const RegionRaster raster = region_scan(rc);
    std::ostringstream os;
    write_raster_csv(os, raster);
    const auto rows = read_csv(os.str());
    REQUIRE(rows.size() == 1 + raster.cells.size() + raster.refined.size());
    CHECK(rows[0] == std::vector<std::string>{"growth_param", "b", "n_equilibria", "stable", "failing_conditions"});
    for (std::size_t k = 0; k < raster.cells.size(); ++k) {
        const auto& c = raster.cells[k];
        const auto& row = rows[k + 1];
        CHECK(parse_double(row[0]) == c.growth);
        CHECK(parse_double(row[1]) == c.b);
        const auto v = region_verdict(ModelSpec::model(4, c.growth, c.b));
        CHECK(std::stoi(row[2]) == v.n_coexistence);
        CHECK((row[3] == "true") == v.stable);
        CHECK(row[4] == failing_label(v.failing));
    }
    CHECK_FALSE(raster.refined.empty());
    for (const auto& c : raster.refined) CHECK(c.level == 1);
}

TEST_CASE("region validation") {
    RegionConfig rc;
    rc.model = 3;
    rc.growth_lo = 0.5;
    CHECK_THROWS_AS(region_scan(rc), DomainError);
    rc.growth_lo = 1;
    rc.n_b = 1;
    CHECK_THROWS_AS(region_scan(rc), DomainError);
}

TEST_CASE("failing labels") {
    CHECK(failing_label(std::bitset<3>("000")) == "none");
    CHECK(failing_label(std::bitset<3>("101")) == "J1+J3");
    CHECK(failing_label(std::bitset<3>("010")) == "J2");
}
