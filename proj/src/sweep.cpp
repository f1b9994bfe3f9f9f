#include "hostpara/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

#include "hostpara/io.hpp"
#include "hostpara/parallel.hpp"
#include "hostpara/report.hpp"

namespace hostpara {

std::string to_string(ContinuationPolicy p) { return p == ContinuationPolicy::Inherit ? "inherit" : "reset"; }
std::string to_string(Coordinate c) { return c == Coordinate::X ? "x" : "y"; }

void validate(const SweepConfig& config) {
    validate(config.base);
    if (config.count == 1) throw DomainError("a sweep needs count >= 2 (or 0 for an empty result)");
    if (!std::isfinite(config.start) || !std::isfinite(config.stop)) throw DomainError("sweep range must be finite");
    const double lo = std::min(config.start, config.stop);
    switch (config.parameter) {
        case FreeParameter::B:
            if (!(lo > 0.0)) throw DomainError("swept b must stay > 0");
            break;
        case FreeParameter::R:
            if (!(lo >= 0.0)) throw DomainError("swept r must stay >= 0");
            break;
        case FreeParameter::R0:
            if (!(lo >= 1.0)) throw DomainError("swept R0 must stay >= 1");
            break;
    }
    if (config.budget.window < 4 * static_cast<std::size_t>(config.budget.max_period))
        throw DomainError("sweep window must hold 4 * max_period samples");
    if (!(config.initial.x() >= 0.0) || !(config.initial.y() >= 0.0)) throw DomainError("initial state must be in the first quadrant");
}

double sweep_value(const SweepConfig& config, std::size_t i) {
    if (config.count < 2) return config.start;
    if (i + 1 == config.count) return config.stop;
    const double t = static_cast<double>(i) / static_cast<double>(config.count - 1);
    return config.start + (config.stop - config.start) * t;
}

namespace {

AttractorSummary summarize(const AttractorReport& rep, const Stated& initial, std::size_t tail_points) {
    AttractorSummary a;
    a.initial = initial;
    a.cls = rep.cls;
    a.period = rep.period;
    a.lyapunov_max = rep.lyapunov_max;
    a.modulation_period = rep.modulation_period;
    a.flags = rep.flags;
    const std::size_t keep = std::min(tail_points, rep.tail.size());
    a.tail.assign(rep.tail.end() - static_cast<std::ptrdiff_t>(keep), rep.tail.end());
    return a;
}

double nearest(const std::vector<Stated>& set, const Stated& s) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : set) best = std::min(best, (p - s).norm());
    return best;
}

bool same_attractor(const AttractorSummary& a, const AttractorSummary& b) {
    if (a.cls != b.cls) return false;
    if (a.tail.empty() || b.tail.empty()) return a.tail.empty() && b.tail.empty();
    const bool periodic = a.cls == AttractorClass::FixedPoint || a.cls == AttractorClass::NCycle ||
                          a.cls == AttractorClass::AxisAttractor || a.cls == AttractorClass::Extinction;
    if (periodic) {
        if (a.period != b.period) return false;
        const std::size_t n = std::min<std::size_t>(a.tail.size(), static_cast<std::size_t>(std::max(1, a.period.value_or(1))));
        for (std::size_t k = 0; k < n; ++k)
            if (nearest(b.tail, a.tail[a.tail.size() - 1 - k]) > 1e-6) return false;
        return true;
    }
    return nearest(b.tail, a.tail.back()) < 0.05 && nearest(a.tail, b.tail.back()) < 0.05;
}

void record_equilibria(const SweepConfig& config, const ModelSpec& spec, SweepPoint& point) {
    if (!config.record.equilibria && !config.record.jury) return;
    const auto eqs = coexistence_equilibria(spec);
    if (config.record.equilibria) point.equilibria = eqs;
    if (config.record.jury)
        for (const auto& eq : eqs) point.jury.push_back(jury_report(spec, eq));
}

std::vector<Stated> reset_starts(const SweepConfig& config, std::size_t index) {
    std::vector<Stated> starts = kMultiStartStates;
    if (config.random_starts > 0) {
        std::mt19937_64 rng(config.seed ^ (0x9e3779b97f4a7c15ull * (index + 1)));
        std::uniform_real_distribution<double> ux(0.0, 1.5);
        std::uniform_real_distribution<double> uy(0.0, 3.0);
        for (std::size_t k = 0; k < config.random_starts; ++k) {
            const double x = ux(rng);
            const double y = uy(rng);
            starts.emplace_back(x, y);
        }
    }
    return starts;
}

}  // namespace

SweepResult bifurcation_scan(const SweepConfig& config) {
    validate(config);
    SweepResult result;
    result.config = config;
    result.provenance = RunProvenance{config_hash(config), config.seed, kLibraryVersion};
    result.points.resize(config.count);
    if (config.count == 0) return result;

    if (config.policy == ContinuationPolicy::Inherit) {
        Stated state = config.initial;
        for (std::size_t i = 0; i < config.count; ++i) {
            SweepPoint& point = result.points[i];
            point.value = sweep_value(config, i);
            try {
                const ModelSpec spec = with_parameter(config.base, config.parameter, point.value);
                const AttractorReport rep = classify_attractor(spec, state, config.budget);
                point.attractors.push_back(summarize(rep, state, config.tail_points));
                record_equilibria(config, spec, point);
                state = rep.flags.any() ? config.initial : rep.final_state;
            } catch (const std::exception& e) {
                point.error = e.what();
                state = config.initial;
            }
        }
        return result;
    }

    parallel_for(config.count, config.threads, [&](std::size_t i) {
        SweepPoint& point = result.points[i];
        point.value = sweep_value(config, i);
        try {
            const ModelSpec spec = with_parameter(config.base, config.parameter, point.value);
            for (const auto& start : reset_starts(config, i)) {
                const AttractorSummary a = summarize(classify_attractor(spec, start, config.budget), start, config.tail_points);
                const bool seen = std::any_of(point.attractors.begin(), point.attractors.end(),
                                              [&](const AttractorSummary& o) { return same_attractor(o, a); });
                if (!seen) point.attractors.push_back(a);
            }
            record_equilibria(config, spec, point);
        } catch (const std::exception& e) {
            point.error = e.what();
        }
    });
    return result;
}

void write_scan_csv(std::ostream& os, const SweepResult& result) {
    CsvWriter csv(os);
    csv.field("param").field("x_or_y").field("class").end_row();
    const bool use_x = result.config.coordinate == Coordinate::X;
    for (const auto& p : result.points) {
        if (p.error) {
            csv.field(p.value).field(std::numeric_limits<double>::quiet_NaN()).field("error").end_row();
            continue;
        }
        for (const auto& a : p.attractors)
            for (const auto& s : a.tail) csv.field(p.value).field(use_x ? s.x() : s.y()).field(to_string(a.cls)).end_row();
    }
}

void validate(const RegionConfig& config) {
    if (config.model < 1 || config.model > 4) throw DomainError("model index must be 1..4");
    if (config.n_growth < 2 || config.n_b < 2) throw DomainError("region raster needs at least 2x2 cells");
    if (!std::isfinite(config.growth_lo) || !std::isfinite(config.growth_hi) || !std::isfinite(config.b_lo) ||
        !std::isfinite(config.b_hi))
        throw DomainError("region ranges must be finite");
    if (!(config.growth_hi > config.growth_lo) || !(config.b_hi > config.b_lo))
        throw DomainError("region ranges must be increasing");
    const bool fractional_growth = config.model == 1 || config.model == 3;
    if (fractional_growth && config.growth_lo < 1.0) throw DomainError("R0 range must start at >= 1");
    if (!fractional_growth && config.growth_lo < 0.0) throw DomainError("r range must start at >= 0");
    if (config.b_lo < 0.0) throw DomainError("b range must start at >= 0");
}

namespace {

RegionCell evaluate_cell(int model, double growth, double b, int level) {
    RegionCell cell;
    cell.growth = growth;
    cell.b = b;
    cell.level = level;
    try {
        const ModelSpec spec = (model == 1 || model == 3) ? ModelSpec::model_R0(model, growth, b) : ModelSpec::model(model, growth, b);
        const RegionVerdict v = region_verdict(spec);
        cell.n_equilibria = v.n_coexistence;
        cell.stable = v.stable;
        cell.failing = v.failing;
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

RegionRaster region_scan(const RegionConfig& config) {
    validate(config);
    RegionRaster raster;
    raster.config = config;
    raster.provenance = RunProvenance{config_hash(config), 0, kLibraryVersion};
    const std::size_t nx = config.n_growth;
    const std::size_t ny = config.n_b;
    const double dg = (config.growth_hi - config.growth_lo) / static_cast<double>(nx);
    const double db = (config.b_hi - config.b_lo) / static_cast<double>(ny);
    raster.cells.resize(nx * ny);

    parallel_for(ny, config.threads, [&](std::size_t j) {
        const double b = config.b_lo + (static_cast<double>(j) + 0.5) * db;
        for (std::size_t i = 0; i < nx; ++i) {
            const double g = config.growth_lo + (static_cast<double>(i) + 0.5) * dg;
            raster.cells[j * nx + i] = evaluate_cell(config.model, g, b, 0);
        }
    });

    auto differs = [&](std::size_t a, std::size_t c) {
        const RegionCell& A = raster.cells[a];
        const RegionCell& C = raster.cells[c];
        return A.stable != C.stable || A.failing != C.failing;
    };
    std::vector<std::size_t> boundary;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = j * nx + i;
            const bool edge = (i > 0 && differs(k, k - 1)) || (i + 1 < nx && differs(k, k + 1)) ||
                              (j > 0 && differs(k, k - nx)) || (j + 1 < ny && differs(k, k + nx));
            raster.cells[k].boundary = edge;
            if (edge) boundary.push_back(k);
        }

    if (config.refine) {
        raster.refined.resize(4 * boundary.size());
        parallel_for(boundary.size(), config.threads, [&](std::size_t m) {
            const RegionCell& parent = raster.cells[boundary[m]];
            for (int q = 0; q < 4; ++q) {
                const double g = parent.growth + ((q % 2) == 0 ? -0.25 : 0.25) * dg;
                const double b = parent.b + ((q / 2) == 0 ? -0.25 : 0.25) * db;
                raster.refined[4 * m + static_cast<std::size_t>(q)] = evaluate_cell(config.model, g, b, 1);
            }
        });
    }
    return raster;
}

std::string failing_label(const std::bitset<3>& failing) {
    std::string out;
    for (std::size_t k = 0; k < 3; ++k) {
        if (!failing.test(k)) continue;
        if (!out.empty()) out += '+';
        out += 'J';
        out += static_cast<char>('1' + k);
    }
    return out.empty() ? "none" : out;
}

void write_raster_csv(std::ostream& os, const RegionRaster& raster) {
    CsvWriter csv(os);
    csv.field("growth_param").field("b").field("n_equilibria").field("stable").field("failing_conditions").end_row();
    auto row = [&](const RegionCell& c) {
        csv.field(c.growth).field(c.b).field(c.n_equilibria).field(c.stable).field(c.error ? std::string("error") : failing_label(c.failing)).end_row();
    };
    for (const auto& c : raster.cells) row(c);
    for (const auto& c : raster.refined) row(c);
}

std::string config_hash(const SweepConfig& config) { return hex64(fnv1a64(Json(config).dump())); }
std::string config_hash(const RegionConfig& config) { return hex64(fnv1a64(Json(config).dump())); }

}  // namespace hostpara
