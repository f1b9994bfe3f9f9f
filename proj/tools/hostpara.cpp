// hostpara: command-line front end.
//
// Exit codes: 0 success, 2 domain or usage error, 3 numeric failure.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hostpara/boundaries.hpp"
#include "hostpara/dynamics.hpp"
#include "hostpara/equilibria.hpp"
#include "hostpara/figures.hpp"
#include "hostpara/io.hpp"
#include "hostpara/report.hpp"
#include "hostpara/stability.hpp"
#include "hostpara/sweep.hpp"

using namespace hostpara;

namespace {

constexpr int kExitDomain = 2;
constexpr int kExitNumeric = 3;

struct Common {
    std::string format = "json";
    std::string out;
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

struct Point {
    int model = 1;
    std::optional<double> r;
    std::optional<double> R0;
    double b = 1.0;

    ModelSpec spec() const {
        if (r && R0) throw DomainError("give either --r or --R0, not both");
        if (!r && !R0) throw DomainError("one of --r or --R0 is required");
        return r ? ModelSpec::model(model, *r, b) : ModelSpec::model_R0(model, *R0, b);
    }
};

void add_point(CLI::App* cmd, Point& p) {
    cmd->add_option("--model", p.model, "Model 1-4: 1 (frac,frac), 2 (exp,frac), 3 (frac,exp), 4 (exp,exp)")
        ->required()
        ->check(CLI::Range(1, 4));
    cmd->add_option("--r", p.r, "Intrinsic growth rate, r >= 0 (R0 = exp(r))");
    cmd->add_option("--R0", p.R0, "Basic reproduction number, R0 >= 1");
    cmd->add_option("--b", p.b, "Composite parameter b = acK, b > 0")->required();
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", c.out, "Output path (stdout when omitted)");
    cmd->add_option("--threads", c.threads, "Worker threads, >= 1")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", c.seed, "Seed for sampled starts");
}

void add_start(CLI::App* cmd, Stated& s) {
    cmd->add_option("--x0", s.x(), "Initial host density, x0 >= 0");
    cmd->add_option("--y0", s.y(), "Initial parasitoid density, y0 >= 0");
}

// Writes through a buffer so a failed run leaves no partial file.
void emit(const Common& c, const std::function<void(std::ostream&)>& body) {
    std::ostringstream buffer;
    body(buffer);
    if (c.out.empty()) {
        std::cout << buffer.str();
        std::cout.flush();
        return;
    }
    std::ofstream os(c.out, std::ios::binary);
    if (!os) throw DomainError("cannot write " + c.out);
    os << buffer.str();
    if (!os) throw DomainError("failed writing " + c.out);
}

void emit_json(const Common& c, const Json& doc) {
    emit(c, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

FreeParameter parse_parameter(const std::string& name) {
    if (name == "b") return FreeParameter::B;
    if (name == "r") return FreeParameter::R;
    if (name == "R0") return FreeParameter::R0;
    throw DomainError("unknown parameter '" + name + "'");
}

std::vector<Stated> parse_states(const std::string& text) {
    std::vector<Stated> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw DomainError("expected x,y in '" + item + "'");
        try {
            out.emplace_back(parse_double(item.substr(0, comma)), parse_double(item.substr(comma + 1)));
        } catch (const std::invalid_argument&) {
            throw DomainError("expected numbers in '" + item + "'");
        }
    }
    if (out.empty()) throw DomainError("no states given");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Host-parasitoid models with density dependence before parasitism"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kLibraryVersion);

    Common common;
    Point point;
    Stated start(0.5, 0.5);
    std::size_t transient = 10000;
    std::size_t n = 10000;
    std::function<void()> action;

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Equilibria, Jury reports, region verdict and bifurcation hints");
    add_point(analyze, point);
    add_common(analyze, common);
    analyze->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            const Json doc = analyze_report(spec);
            if (common.format == "json") return emit_json(common, doc);
            emit(common, [&](std::ostream& os) {
                CsvWriter csv(os);
                csv.field("x").field("y").field("kind").field("verdict").end_row();
                for (const auto& e : doc["equilibria"])
                    csv.field(e["location"][0].get<double>()).field(e["location"][1].get<double>())
                        .field(e["kind"].get<std::string>()).field(e["classification"]["verdict"].get<std::string>()).end_row();
            });
        };
    });

    // equilibria
    auto* equilibria = app.add_subcommand("equilibria", "All equilibria in the closed first quadrant");
    add_point(equilibria, point);
    add_common(equilibria, common);
    equilibria->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            std::vector<EquilibriumRecord> all;
            for (const auto& eq : boundary_equilibria(spec)) all.push_back(eq);
            for (const auto& eq : coexistence_equilibria(spec)) all.push_back(eq);
            if (common.format == "json") return emit_json(common, document("equilibria", {{"spec", spec}, {"equilibria", all}}));
            emit(common, [&](std::ostream& os) {
                CsvWriter csv(os);
                csv.field("x").field("y").field("kind").field("provenance").field("residual").end_row();
                for (const auto& eq : all)
                    csv.field(eq.location.x()).field(eq.location.y()).field(to_string(eq.kind)).field(to_string(eq.provenance)).field(eq.residual).end_row();
            });
        };
    });

    // jury
    auto* jury = app.add_subcommand("jury", "Jury conditions at each coexistence equilibrium");
    add_point(jury, point);
    add_common(jury, common);
    jury->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            const auto eqs = coexistence_equilibria(spec);
            Json reports = Json::array();
            for (const auto& eq : eqs) reports.push_back({{"equilibrium", eq}, {"jury", jury_report(spec, eq)}});
            if (common.format == "json") return emit_json(common, document("jury", {{"spec", spec}, {"reports", reports}}));
            emit(common, [&](std::ostream& os) {
                CsvWriter csv(os);
                csv.field("x").field("y").field("tau").field("delta").field("j1").field("j2").field("j3").field("verdict").end_row();
                for (const auto& eq : eqs) {
                    const JuryReport r = jury_report(spec, eq);
                    csv.field(eq.location.x()).field(eq.location.y()).field(r.tau).field(r.delta).field(r.j1).field(r.j2).field(r.j3)
                        .field(to_string(r.verdict)).end_row();
                }
            });
        };
    });

    // boundary
    int boundary_model = 1;
    std::size_t curve_points = kDefaultCurvePoints;
    double curve_lo = kDefaultCurveLo;
    double curve_hi = kDefaultCurveHi;
    bool with_lines = false;
    double line_growth_hi = 10.0;
    double line_b_hi = 10.0;
    auto* boundary = app.add_subcommand("boundary", "Analytic stability-boundary curves of a model");
    boundary->add_option("--model", boundary_model, "Model 1-4")->required()->check(CLI::Range(1, 4));
    boundary->add_option("--points", curve_points, "Samples per curve, >= 2")->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
    boundary->add_option("--lo", curve_lo, "Smallest internal variable (y, or u - 3/2 for model 2), > 0");
    boundary->add_option("--hi", curve_hi, "Largest internal variable, > lo");
    boundary->add_flag("--lines", with_lines, "Also emit the straight lines b = 1 and R0 = 1");
    boundary->add_option("--growth-hi", line_growth_hi, "Right end of the b = 1 line");
    boundary->add_option("--b-hi", line_b_hi, "Top of the R0 = 1 line");
    add_common(boundary, common);
    boundary->callback([&] {
        action = [&] {
            std::vector<BoundaryCurve> curves;
            switch (boundary_model) {
                case 2: curves.push_back(curve_model2_jury2(1.5 + curve_lo, 1.5 + curve_hi, curve_points)); break;
                case 3: curves.push_back(curve_model3_jury3(curve_lo, curve_hi, curve_points)); break;
                case 4:
                    for (int j = 1; j <= 3; ++j) curves.push_back(curves_model4(j, curve_lo, curve_hi, curve_points));
                    break;
                default: break;
            }
            if (with_lines) {
                const auto lines = degenerate_lines(boundary_model, line_growth_hi, line_b_hi);
                curves.insert(curves.end(), lines.begin(), lines.end());
            }
            if (common.format == "json") return emit_json(common, document("boundary", {{"model", boundary_model}, {"curves", curves}}));
            emit(common, [&](std::ostream& os) { write_curves_csv(os, curves); });
        };
    });

    // simulate
    auto* sim = app.add_subcommand("simulate", "Iterate the map and export the orbit");
    add_point(sim, point);
    add_start(sim, start);
    sim->add_option("--transient", transient, "Iterations discarded first, >= 0");
    sim->add_option("--n", n, "Iterations recorded, >= 0");
    add_common(sim, common);
    sim->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            const Orbit orbit = simulate(spec, start, transient, n);
            if (common.format == "csv") return emit(common, [&](std::ostream& os) { write_orbit_csv(os, orbit); });
            Json samples = Json::array();
            for (const auto& s : orbit.samples) samples.push_back(state_json(s));
            emit_json(common, document("orbit", {{"spec", spec},
                                                 {"initial", state_json(orbit.initial)},
                                                 {"transient", orbit.transient},
                                                 {"flags", orbit.flags},
                                                 {"samples", samples},
                                                 {"final_state", state_json(orbit.final_state)}}));
        };
    });

    // classify
    ClassifyOptions copt;
    bool with_tail = false;
    auto* classify = app.add_subcommand("classify", "Classify the attractor reached from a start");
    add_point(classify, point);
    add_start(classify, start);
    classify->add_option("--transient", copt.transient, "Iterations discarded first");
    classify->add_option("--window", copt.window, "Iterations examined for cycles, >= 4 * max period");
    classify->add_option("--lyapunov-window", copt.lyapunov_window, "Iterations averaged for the exponent");
    classify->add_option("--max-period", copt.max_period, "Largest detected period, >= 1");
    classify->add_option("--cycle-tol", copt.cycle_tol, "Recurrence tolerance, > 0");
    classify->add_option("--lyapunov-threshold", copt.lyapunov_threshold, "Quasiperiodic band |lambda| <= threshold");
    classify->add_flag("--tail", with_tail, "Include the sampled tail in the JSON report");
    add_common(classify, common);
    classify->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            const AttractorReport rep = classify_attractor(spec, start, copt);
            if (common.format == "csv") {
                Orbit view;
                view.transient = copt.transient;
                view.samples = rep.tail;
                return emit(common, [&](std::ostream& os) { write_orbit_csv(os, view); });
            }
            Json body = attractor_json(rep, with_tail);
            body["spec"] = spec;
            body["initial"] = state_json(start);
            emit_json(common, document("attractor", body));
        };
    });

    // cycle
    int period = 2;
    bool from_equilibrium = false;
    std::string guess_text;
    auto* cycle = app.add_subcommand("cycle", "Refine a periodic orbit by Newton's method");
    add_point(cycle, point);
    cycle->add_option("--period", period, "Cycle period, >= 1")->check(CLI::PositiveNumber);
    cycle->add_option("--guess", guess_text, "Guess points 'x,y;x,y;...' (one point or `period` points)");
    cycle->add_flag("--from-equilibrium", from_equilibrium, "Seed two-cycles from the upper coexistence equilibrium");
    add_common(cycle, common);
    cycle->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            std::vector<PeriodicOrbit> cycles;
            if (from_equilibrium) {
                const auto eqs = coexistence_equilibria(spec);
                if (eqs.empty()) throw DomainError("no coexistence equilibrium to seed from");
                cycles = two_cycles_near(spec, eqs.back().location);
            } else {
                if (guess_text.empty()) throw DomainError("give --guess or --from-equilibrium");
                cycles.push_back(refine_cycle(spec, parse_states(guess_text), period));
            }
            if (common.format == "json") return emit_json(common, document("cycles", {{"spec", spec}, {"cycles", cycles}}));
            emit(common, [&](std::ostream& os) {
                CsvWriter csv(os);
                csv.field("cycle").field("index").field("x").field("y").field("stability").end_row();
                for (std::size_t c = 0; c < cycles.size(); ++c)
                    for (std::size_t k = 0; k < cycles[c].points.size(); ++k)
                        csv.field(c).field(k).field(cycles[c].points[k].x()).field(cycles[c].points[k].y()).field(to_string(cycles[c].stability)).end_row();
            });
        };
    });

    // lyapunov
    std::size_t lyap_n = kDefaultLyapunovWindow;
    auto* lyap = app.add_subcommand("lyapunov", "Largest Lyapunov exponent along an orbit");
    add_point(lyap, point);
    add_start(lyap, start);
    lyap->add_option("--transient", transient, "Iterations discarded first");
    lyap->add_option("--n", lyap_n, "Iterations averaged, >= 10000")->check(CLI::Range(std::size_t{10000}, std::size_t{1} << 40));
    add_common(lyap, common);
    lyap->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            const LyapunovResult res = lyapunov_max(spec, start, transient, lyap_n);
            if (common.format == "json") return emit_json(common, document("lyapunov", {{"spec", spec}, {"result", res}}));
            emit(common, [&](std::ostream& os) {
                CsvWriter csv(os);
                csv.field("lyapunov_max").field("iterations").end_row();
                csv.field(res.value).field(res.iterations).end_row();
            });
        };
    });

    // basin
    BasinGrid grid;
    BasinOptions bopt;
    std::string attractor_starts = "0.8,0.7;0.3,0.4";
    auto* basin = app.add_subcommand("basin", "Basin-of-attraction labels on a grid");
    add_point(basin, point);
    basin->add_option("--attractor-starts", attractor_starts, "Starts 'x,y;...' whose attractors label the grid");
    basin->add_option("--x-lo", grid.x_lo, "Grid left edge, >= 0");
    basin->add_option("--x-hi", grid.x_hi, "Grid right edge");
    basin->add_option("--y-lo", grid.y_lo, "Grid bottom edge, >= 0");
    basin->add_option("--y-hi", grid.y_hi, "Grid top edge");
    basin->add_option("--nx", grid.nx, "Nodes along x, >= 1");
    basin->add_option("--ny", grid.ny, "Nodes along y, >= 1");
    basin->add_option("--transient", bopt.transient, "Iterations before labelling");
    basin->add_option("--capture-radius", bopt.capture_radius, "Distance counted as on an attractor, > 0");
    add_common(basin, common);
    basin->callback([&] {
        action = [&] {
            const ModelSpec spec = point.spec();
            bopt.threads = common.threads;
            std::vector<std::vector<Stated>> sets;
            Json reps = Json::array();
            for (const auto& s : parse_states(attractor_starts)) {
                const AttractorReport rep = classify_attractor(spec, s);
                sets.push_back(rep.tail);
                Json j = attractor_json(rep);
                j["initial"] = state_json(s);
                reps.push_back(j);
            }
            const BasinResult res = basin_sample(spec, grid, sets, bopt);
            if (common.format == "json")
                return emit_json(common, document("basin", {{"spec", spec},
                                                            {"grid", {{"x_lo", grid.x_lo}, {"x_hi", grid.x_hi}, {"y_lo", grid.y_lo}, {"y_hi", grid.y_hi}, {"nx", grid.nx}, {"ny", grid.ny}}},
                                                            {"attractors", reps},
                                                            {"labels", res.labels}}));
            emit(common, [&](std::ostream& os) {
                CsvWriter csv(os);
                csv.field("x").field("y").field("label").end_row();
                for (std::size_t j = 0; j < grid.ny; ++j)
                    for (std::size_t i = 0; i < grid.nx; ++i) {
                        const Stated p = grid.node(i, j);
                        csv.field(p.x()).field(p.y()).field(res.at(i, j)).end_row();
                    }
            });
        };
    });

    // scan
    SweepConfig sweep;
    std::string sweep_param = "b";
    std::string policy = "inherit";
    std::string coordinate = "x";
    auto* scan_cmd = app.add_subcommand("scan", "One-parameter bifurcation scan");
    add_point(scan_cmd, point);
    scan_cmd->add_option("--param", sweep_param, "Swept parameter: b (> 0), r (>= 0) or R0 (>= 1)")->check(CLI::IsMember({"b", "r", "R0"}));
    scan_cmd->add_option("--start", sweep.start, "First parameter value")->required();
    scan_cmd->add_option("--stop", sweep.stop, "Last parameter value (may be below start)")->required();
    scan_cmd->add_option("--count", sweep.count, "Parameter values, 0 or >= 2");
    scan_cmd->add_option("--policy", policy, "Continuation: inherit or reset")->check(CLI::IsMember({"inherit", "reset"}));
    scan_cmd->add_option("--coordinate", coordinate, "Coordinate in the CSV: x or y")->check(CLI::IsMember({"x", "y"}));
    scan_cmd->add_option("--transient", sweep.budget.transient, "Iterations discarded per point");
    scan_cmd->add_option("--window", sweep.budget.window, "Iterations examined per point, >= 256");
    scan_cmd->add_option("--lyapunov-window", sweep.budget.lyapunov_window, "Iterations for the exponent per point");
    scan_cmd->add_option("--tail-points", sweep.tail_points, "Tail points recorded per attractor");
    scan_cmd->add_option("--random-starts", sweep.random_starts, "Extra random starts per point under reset");
    add_start(scan_cmd, sweep.initial);
    add_common(scan_cmd, common);
    scan_cmd->callback([&] {
        action = [&] {
            sweep.base = point.spec();
            sweep.parameter = parse_parameter(sweep_param);
            sweep.policy = policy == "inherit" ? ContinuationPolicy::Inherit : ContinuationPolicy::Reset;
            sweep.coordinate = coordinate == "x" ? Coordinate::X : Coordinate::Y;
            sweep.seed = common.seed;
            sweep.threads = common.threads;
            const SweepResult res = bifurcation_scan(sweep);
            if (common.format == "json") return emit_json(common, document("scan", res));
            emit(common, [&](std::ostream& os) { write_scan_csv(os, res); });
        };
    });

    // region
    RegionConfig region;
    auto* region_cmd = app.add_subcommand("region", "Stability-region raster over (growth parameter, b)");
    region_cmd->add_option("--model", region.model, "Model 1-4")->required()->check(CLI::Range(1, 4));
    region_cmd->add_option("--growth-lo", region.growth_lo, "Lowest R0 (models 1, 3; >= 1) or r (models 2, 4; >= 0)");
    region_cmd->add_option("--growth-hi", region.growth_hi, "Highest growth parameter");
    region_cmd->add_option("--b-lo", region.b_lo, "Lowest b, >= 0");
    region_cmd->add_option("--b-hi", region.b_hi, "Highest b");
    region_cmd->add_option("--n-growth", region.n_growth, "Cells along the growth axis, >= 2");
    region_cmd->add_option("--n-b", region.n_b, "Cells along b, >= 2");
    region_cmd->add_option("--refine", region.refine, "Subdivide boundary cells 2x2 (true/false)");
    add_common(region_cmd, common);
    region_cmd->callback([&] {
        action = [&] {
            region.threads = common.threads;
            const RegionRaster raster = region_scan(region);
            if (common.format == "json") return emit_json(common, document("region", raster));
            emit(common, [&](std::ostream& os) { write_raster_csv(os, raster); });
        };
    });

    // reproduce-figure
    std::string figure_id;
    double budget_scale = 1.0;
    auto* figure = app.add_subcommand("reproduce-figure", "Write the datasets behind a figure into a directory");
    figure->add_option("id", figure_id, "Figure id: 3a 3b 3c 3d 4 5 6 7 8 9 10 11")->required();
    figure->add_option("--out", common.out, "Output directory (default: figure-<id>)");
    figure->add_option("--threads", common.threads, "Worker threads, >= 1")->check(CLI::PositiveNumber);
    figure->add_option("--budget-scale", budget_scale, "Scale on point counts and iteration budgets, > 0");
    figure->callback([&] {
        action = [&] {
            const std::string dir = common.out.empty() ? "figure-" + figure_id : common.out;
            const auto files = reproduce_figure(figure_id, dir, FigureOptions{common.threads, budget_scale});
            for (const auto& f : files) std::cout << f.string() << '\n';
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitDomain;
    }

    try {
        if (action) action();
        return 0;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
