#include "hostpara/figures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hostpara/boundaries.hpp"
#include "hostpara/dynamics.hpp"
#include "hostpara/equilibria.hpp"
#include "hostpara/errors.hpp"
#include "hostpara/io.hpp"
#include "hostpara/report.hpp"
#include "hostpara/sweep.hpp"

namespace hostpara {

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids{"3a", "3b", "3c", "3d", "4", "5", "6", "7", "8", "9", "10", "11"};
    return ids;
}

namespace {

class FigureWriter {
public:
    FigureWriter(std::string id, std::filesystem::path dir, const FigureOptions& options)
        : id_(std::move(id)), dir_(std::move(dir)), options_(options) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec || !std::filesystem::is_directory(dir_))
            throw DomainError("cannot create output directory " + dir_.string());
    }

    std::ofstream open(const std::string& name) {
        const auto path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw DomainError("cannot write " + path.string());
        files_.push_back(path);
        return os;
    }

    void json(const std::string& name, const Json& doc) { open(name) << doc.dump(2) << '\n'; }

    std::size_t n(std::size_t base) const {
        return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(static_cast<double>(base) * options_.budget_scale)));
    }

    unsigned threads() const { return options_.threads; }
    Json& parameters() { return parameters_; }

    std::vector<std::filesystem::path> finish() {
        Json names = Json::array();
        for (const auto& f : files_) names.push_back(f.filename().string());
        names.push_back("manifest.json");
        const Json manifest = document("figure", {{"figure", id_}, {"files", names}, {"parameters", parameters_}});
        json("manifest.json", manifest);
        return files_;
    }

private:
    std::string id_;
    std::filesystem::path dir_;
    FigureOptions options_;
    std::vector<std::filesystem::path> files_;
    Json parameters_ = Json::object();
};

std::string tag(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_nullclines(std::ostream& os, const ModelSpec& spec, std::size_t n) {
    CsvWriter csv(os);
    csv.field("curve").field("x").field("y").end_row();
    for (const auto& p : nullcline_samples(spec, Nullcline::Host, 0.0, 1.0, n).points)
        csv.field("host").field(p.x()).field(p.y()).end_row();
    if (const auto range = parasitoid_nullcline_range(spec, 3.0))
        for (const auto& p : nullcline_samples(spec, Nullcline::Parasitoid, (*range)[0], (*range)[1], n).points)
            csv.field("parasitoid").field(p.x()).field(p.y()).end_row();
}

SweepResult scan(const ModelSpec& base, FreeParameter param, double start, double stop, std::size_t count,
                 ContinuationPolicy policy, unsigned threads) {
    SweepConfig c;
    c.base = base;
    c.parameter = param;
    c.start = start;
    c.stop = stop;
    c.count = count;
    c.policy = policy;
    c.threads = threads;
    return bifurcation_scan(c);
}

void write_scan(FigureWriter& w, const std::string& stem, SweepResult result) {
    for (Coordinate c : {Coordinate::X, Coordinate::Y}) {
        result.config.coordinate = c;
        auto os = w.open(stem + "_" + to_string(c) + ".csv");
        write_scan_csv(os, result);
    }
}

// Equilibria and nearby two-cycles along a parameter range.
void write_branches(std::ostream& os, const ModelSpec& base, FreeParameter param, double start, double stop, std::size_t count) {
    CsvWriter csv(os);
    csv.field("param").field("kind").field("x").field("y").field("stability").end_row();
    for (std::size_t i = 0; i < count; ++i) {
        const double v = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
        const ModelSpec spec = with_parameter(base, param, v);
        const auto eqs = coexistence_equilibria(spec);
        for (std::size_t k = 0; k < eqs.size(); ++k) {
            const auto& eq = eqs[k];
            const char* kind = eqs.size() == 1 ? "equilibrium" : (k + 1 == eqs.size() ? "equilibrium_upper" : "equilibrium_lower");
            csv.field(v).field(kind).field(eq.location.x()).field(eq.location.y()).field(to_string(jury_report(spec, eq).verdict)).end_row();
        }
        if (eqs.empty()) continue;
        for (const auto& c : two_cycles_near(spec, eqs.back().location))
            for (const auto& p : c.points) csv.field(v).field("two_cycle").field(p.x()).field(p.y()).field(to_string(c.stability)).end_row();
    }
}

std::vector<AttractorReport> distinct_attractors(const ModelSpec& spec, const ClassifyOptions& options) {
    std::vector<AttractorReport> out;
    for (const auto& start : kMultiStartStates) {
        AttractorReport rep = classify_attractor(spec, start, options);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const AttractorReport& o) {
            if (o.cls != rep.cls || o.tail.empty() || rep.tail.empty()) return false;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : o.tail) best = std::min(best, (p - rep.tail.back()).norm());
            return best < 1e-3;
        });
        if (!seen) out.push_back(std::move(rep));
    }
    return out;
}

void figure3(FigureWriter& w, int model) {
    RegionConfig c;
    c.model = model;
    const bool fractional_growth = model == 1 || model == 3;
    c.growth_lo = fractional_growth ? 1.0 : 0.0;
    c.growth_hi = fractional_growth ? 10.0 : 5.0;
    c.b_lo = 0.0;
    c.b_hi = model == 4 ? 3.0 : (model == 2 ? 5.0 : 10.0);
    c.n_growth = w.n(200);
    c.n_b = w.n(200);
    c.threads = w.threads();
    const RegionRaster raster = region_scan(c);
    {
        auto os = w.open("region.csv");
        write_raster_csv(os, raster);
    }
    auto curves = model_curves(model);
    const auto lines = degenerate_lines(model, c.growth_hi, c.b_hi);
    curves.insert(curves.end(), lines.begin(), lines.end());
    {
        auto os = w.open("curves.csv");
        write_curves_csv(os, curves);
    }
    w.parameters() = {{"model", model}, {"region", c}, {"provenance", raster.provenance}};
}

void figure4(FigureWriter& w) {
    const std::size_t count = w.n(281);
    for (double b : {1.1, 1.3, 1.5}) {
        const ModelSpec base = ModelSpec::model(2, 1.8, b);
        write_scan(w, "scan_b" + tag(b) + "_up", scan(base, FreeParameter::R, 1.8, 3.2, count, ContinuationPolicy::Inherit, 1));
        write_scan(w, "scan_b" + tag(b) + "_down", scan(base, FreeParameter::R, 3.2, 1.8, count, ContinuationPolicy::Inherit, 1));
        auto os = w.open("branches_b" + tag(b) + ".csv");
        write_branches(os, base, FreeParameter::R, 1.8, 3.2, count);
    }
    w.parameters() = {{"model", 2}, {"b", {1.1, 1.3, 1.5}}, {"r_range", {1.8, 3.2}}, {"count", count}};
}

void figure5(FigureWriter& w) {
    const std::vector<double> bs{3.0, 3.5, 4.0, 4.41, 5.0, 5.5, 6.0, 6.5, 7.0};
    auto os = w.open("attractors.csv");
    CsvWriter csv(os);
    csv.field("b").field("x").field("y").end_row();
    Json summary = Json::array();
    for (double b : bs) {
        const ModelSpec spec = ModelSpec::model_R0(3, 2.0, b);
        ClassifyOptions opt;
        opt.window = w.n(10000);
        const AttractorReport rep = classify_attractor(spec, {0.5, 0.5}, opt);
        for (const auto& p : rep.tail) csv.field(b).field(p.x()).field(p.y()).end_row();
        Json s = attractor_json(rep);
        s["b"] = b;
        summary.push_back(s);
    }
    w.parameters() = {{"model", 3}, {"R0", 2.0}, {"b", bs}, {"attractors", summary}};
}

void figure6(FigureWriter& w) {
    const ModelSpec base = ModelSpec::model_R0(3, 2.0, 2.0);
    write_scan(w, "scan", scan(base, FreeParameter::B, 2.0, 8.5, w.n(651), ContinuationPolicy::Inherit, 1));
    write_scan(w, "scan_detail", scan(base, FreeParameter::B, 4.0, 5.0, w.n(501), ContinuationPolicy::Inherit, 1));
    w.parameters() = {{"model", 3}, {"R0", 2.0}, {"b_range", {2.0, 8.5}}, {"detail_b_range", {4.0, 5.0}}};
}

void figure7(FigureWriter& w) {
    const std::size_t total = w.n(100000);
    const std::size_t kept = w.n(30000);
    Json summary = Json::array();
    for (double r : {2.92, 2.9205}) {
        const ModelSpec spec = ModelSpec::model(2, r, 1.9);
        for (const Stated& start : {Stated(0.8, 0.7), Stated(0.3, 0.4)}) {
            const Orbit orbit = simulate(spec, start, total - kept, kept);
            auto os = w.open("attractor_r" + tag(r) + "_from_" + tag(start.x()) + "_" + tag(start.y()) + ".csv");
            write_orbit_csv(os, orbit);
            Json s = attractor_json(classify_attractor(spec, start));
            s["r"] = r;
            s["initial"] = state_json(start);
            summary.push_back(s);
        }
    }
    Json eqs = Json::array();
    for (double r : {2.92, 2.9205})
        for (const auto& eq : coexistence_equilibria(ModelSpec::model(2, r, 1.9))) {
            Json e = eq;
            e["r"] = r;
            eqs.push_back(e);
        }
    w.parameters() = {{"model", 2}, {"b", 1.9}, {"iterations", total}, {"plotted", kept}, {"attractors", summary}, {"equilibria", eqs}};
}

void figure8(FigureWriter& w) {
    const ModelSpec base = ModelSpec::model(4, 2.5, 1.0);
    const double b_sn = saddle_node_b(base);
    {
        auto os = w.open("nullclines_tangent.csv");
        write_nullclines(os, with_parameter(base, FreeParameter::B, b_sn), w.n(400));
    }
    auto os = w.open("root_count.csv");
    CsvWriter csv(os);
    csv.field("b").field("n_equilibria").field("y_lower").field("y_upper").field("verdict_lower").field("verdict_upper").end_row();
    const std::size_t count = w.n(201);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < count; ++i) {
        const double b = 0.955 + 0.01 * static_cast<double>(i) / static_cast<double>(count - 1);
        const ModelSpec spec = with_parameter(base, FreeParameter::B, b);
        const RegionVerdict v = region_verdict(spec);
        const bool two = v.equilibria.size() >= 2;
        csv.field(b).field(v.n_coexistence);
        csv.field(two ? v.equilibria.front().location.y() : nan);
        csv.field(v.equilibria.empty() ? nan : v.equilibria.back().location.y());
        csv.field(two ? to_string(v.reports.front().verdict) : std::string("none"));
        csv.field(v.reports.empty() ? std::string("none") : to_string(v.reports.back().verdict));
        csv.end_row();
    }
    w.parameters() = {{"model", 4}, {"r", 2.5}, {"saddle_node_b", b_sn}};
}

void figure9(FigureWriter& w) {
    const std::vector<double> bs{0.959, 0.96, 0.9615, 0.98, 1.05, 1.6};
    const ModelSpec base = ModelSpec::model(4, 2.5, 1.0);
    Json panels = Json::array();
    for (double b : bs) {
        const ModelSpec spec = with_parameter(base, FreeParameter::B, b);
        {
            auto os = w.open("nullclines_b" + tag(b) + ".csv");
            write_nullclines(os, spec, w.n(400));
        }
        Json eqs = Json::array();
        for (const auto& eq : coexistence_equilibria(spec)) {
            Json e = eq;
            e["verdict"] = to_string(jury_report(spec, eq).verdict);
            eqs.push_back(e);
        }
        ClassifyOptions opt;
        opt.window = w.n(10000);
        const auto attractors = distinct_attractors(spec, opt);
        auto os = w.open("attractors_b" + tag(b) + ".csv");
        CsvWriter csv(os);
        csv.field("attractor").field("class").field("x").field("y").end_row();
        Json summary = Json::array();
        for (std::size_t k = 0; k < attractors.size(); ++k) {
            for (const auto& p : attractors[k].tail) csv.field(k).field(to_string(attractors[k].cls)).field(p.x()).field(p.y()).end_row();
            summary.push_back(attractor_json(attractors[k]));
        }
        panels.push_back({{"b", b}, {"equilibria", eqs}, {"attractors", summary}});
    }
    write_scan(w, "scan", scan(base, FreeParameter::B, 0.94, 1.7, w.n(381), ContinuationPolicy::Reset, w.threads()));
    w.parameters() = {{"model", 4}, {"r", 2.5}, {"panels", panels}, {"scan_b_range", {0.94, 1.7}}};
}

void figure10(FigureWriter& w) {
    const ModelSpec base = ModelSpec::model(4, 2.5, 1.0);
    const std::size_t count = w.n(201);
    {
        auto os = w.open("branches.csv");
        write_branches(os, base, FreeParameter::B, 0.955, 0.975, count);
    }
    write_scan(w, "scan", scan(base, FreeParameter::B, 0.955, 0.975, count, ContinuationPolicy::Reset, w.threads()));
    w.parameters() = {{"model", 4}, {"r", 2.5}, {"b_range", {0.955, 0.975}}, {"saddle_node_b", saddle_node_b(base)},
                      {"period_doubling_b", invert_model4_curve(2, 2.5).b}};
}

void figure11(FigureWriter& w) {
    const ModelSpec spec = ModelSpec::model(4, 2.3, 2.2);
    const std::size_t total = w.n(100000);
    const std::size_t kept = w.n(30000);
    {
        auto os = w.open("attractor.csv");
        write_orbit_csv(os, simulate(spec, {0.5, 0.5}, total - kept, kept));
    }
    const LyapunovResult lyap = lyapunov_max(spec, {0.5, 0.5}, 10000, w.n(1000000));
    w.parameters() = {{"model", 4}, {"r", 2.3}, {"b", 2.2}, {"iterations", total}, {"plotted", kept}, {"lyapunov", lyap}};
}

}  // namespace

std::vector<std::filesystem::path> reproduce_figure(const std::string& id, const std::filesystem::path& dir,
                                                    const FigureOptions& options) {
    const auto& ids = figure_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw DomainError("unknown figure id '" + id + "'");
    if (!(options.budget_scale > 0.0)) throw DomainError("budget scale must be > 0");
    FigureWriter w(id, dir, options);
    if (id == "3a") figure3(w, 1);
    else if (id == "3b") figure3(w, 2);
    else if (id == "3c") figure3(w, 3);
    else if (id == "3d") figure3(w, 4);
    else if (id == "4") figure4(w);
    else if (id == "5") figure5(w);
    else if (id == "6") figure6(w);
    else if (id == "7") figure7(w);
    else if (id == "8") figure8(w);
    else if (id == "9") figure9(w);
    else if (id == "10") figure10(w);
    else figure11(w);
    return w.finish();
}

}  // namespace hostpara
