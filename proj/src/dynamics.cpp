#include "hostpara/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

#include "hostpara/io.hpp"
#include "hostpara/parallel.hpp"

namespace hostpara {

namespace {

bool finite_state(const Stated& s) { return std::isfinite(s.x()) && std::isfinite(s.y()); }

void require_quadrant(const Stated& s, const char* what) {
    if (!finite_state(s) || s.x() < 0.0 || s.y() < 0.0) {
        std::ostringstream os;
        os << what << " (" << s.x() << ", " << s.y() << ") is outside the closed first quadrant";
        throw DomainError(os.str());
    }
}

double inf_distance(const Stated& a, const Stated& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

bool update_flags(OrbitFlags& flags, const Stated& previous, const Stated& next) {
    if (!finite_state(next)) {
        flags.diverged = true;
        return true;
    }
    if (previous.x() > 0.0 && next.x() < kExtinctionThreshold) flags.numerically_extinct_x = true;
    if (previous.y() > 0.0 && next.y() < kExtinctionThreshold) flags.numerically_extinct_y = true;
    return false;
}

Orbit simulate(const ModelSpec& spec, const Stated& init, std::size_t transient, std::size_t n) {
    validate(spec);
    require_quadrant(init, "initial state");
    Orbit orbit;
    orbit.spec = spec;
    orbit.initial = init;
    orbit.transient = transient;
    orbit.samples.reserve(n);

    Stated s = init;
    for (std::size_t t = 0; t < transient; ++t) {
        const Stated next = kernel::step(spec, s);
        const bool stop = update_flags(orbit.flags, s, next);
        s = next;
        if (stop) {
            orbit.final_state = s;
            return orbit;
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        orbit.samples.push_back(s);
        const Stated next = kernel::step(spec, s);
        const bool stop = update_flags(orbit.flags, s, next);
        s = next;
        if (stop) break;
    }
    orbit.final_state = s;
    return orbit;
}

std::optional<DetectedCycle> detect_cycle(const Orbit& orbit, int max_period, double tol) {
    if (max_period < 1) throw DomainError("max_period must be >= 1");
    const std::size_t window = 4 * static_cast<std::size_t>(max_period);
    const auto& s = orbit.samples;
    if (s.size() < window) {
        std::ostringstream os;
        os << "cycle detection needs at least " << window << " samples, orbit has " << s.size();
        throw DomainError(os.str());
    }
    const std::size_t start = s.size() - window;
    for (int n = 1; n <= max_period; ++n) {
        const auto un = static_cast<std::size_t>(n);
        bool recurrent = true;
        for (std::size_t i = start; i + un < s.size() && recurrent; ++i)
            recurrent = inf_distance(s[i + un], s[i]) < tol;
        if (recurrent) {
            DetectedCycle c;
            c.period = n;
            c.points.assign(s.end() - n, s.end());
            return c;
        }
    }
    return std::nullopt;
}

int PeriodicOrbit::minimal_period(double tol) const {
    const int n = period;
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool same = true;
        for (int k = 0; k < n && same; ++k) same = inf_distance(points[k], points[(k + d) % n]) < tol;
        if (same) return d;
    }
    return n;
}

Jacobian2d cycle_jacobian(const ModelSpec& spec, const std::vector<Stated>& points) {
    Jacobian2d M = Jacobian2d::Identity();
    for (const auto& p : points) M = kernel::jacobian(spec, p) * M;
    return M;
}

namespace {

Eigen::VectorXd shooting_residual(const ModelSpec& spec, const Eigen::VectorXd& z, int n) {
    Eigen::VectorXd F(2 * n);
    for (int i = 0; i < n; ++i) {
        const Stated zi = z.segment<2>(2 * i);
        const int j = (i + 1) % n;
        F.segment<2>(2 * i) = kernel::step(spec, zi) - z.segment<2>(2 * j);
    }
    return F;
}

double max_abs(const Eigen::VectorXd& v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) return std::numeric_limits<double>::infinity();
        m = std::max(m, std::abs(v[i]));
    }
    return m;
}

}  // namespace

PeriodicOrbit refine_cycle(const ModelSpec& spec, const std::vector<Stated>& guess, int period,
                           const RefineOptions& options) {
    validate(spec);
    if (period < 1) throw DomainError("cycle period must be >= 1");
    std::vector<Stated> pts;
    if (guess.size() == static_cast<std::size_t>(period)) {
        pts = guess;
    } else if (guess.size() == 1) {
        pts.push_back(guess.front());
        for (int i = 1; i < period; ++i) pts.push_back(kernel::step(spec, pts.back()));
    } else {
        throw DomainError("cycle guess must hold 1 or `period` points");
    }
    for (const auto& p : pts)
        if (!finite_state(p)) throw DomainError("cycle guess is not finite");

    const int n = period;
    Eigen::VectorXd z(2 * n);
    for (int i = 0; i < n; ++i) z.segment<2>(2 * i) = pts[static_cast<std::size_t>(i)];

    Eigen::VectorXd F = shooting_residual(spec, z, n);
    double res = max_abs(F);
    int steps = 0;
    while (!(res <= options.residual_tol)) {
        if (steps >= options.max_steps || !std::isfinite(res)) {
            std::ostringstream os;
            os << "cycle Newton did not converge in " << steps << " steps (residual " << res << ")";
            throw NumericError(os.str(), res, res);
        }
        Eigen::MatrixXd DF = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        for (int i = 0; i < n; ++i) {
            const Stated zi = z.segment<2>(2 * i);
            const int j = (i + 1) % n;
            DF.block<2, 2>(2 * i, 2 * i) += kernel::jacobian(spec, zi);
            DF.block<2, 2>(2 * i, 2 * j) -= Eigen::Matrix2d::Identity();
        }
        const Eigen::VectorXd dz = DF.colPivHouseholderQr().solve(-F);
        double lambda = 1.0;
        Eigen::VectorXd trial = z + dz;
        Eigen::VectorXd F_trial = shooting_residual(spec, trial, n);
        double res_trial = max_abs(F_trial);
        for (int k = 0; k < 30 && !(res_trial < res) && res > 1e-13; ++k) {
            lambda *= 0.5;
            trial = z + lambda * dz;
            F_trial = shooting_residual(spec, trial, n);
            res_trial = max_abs(F_trial);
        }
        z = trial;
        F = F_trial;
        res = res_trial;
        ++steps;
    }

    PeriodicOrbit out;
    out.period = n;
    out.points.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.points[static_cast<std::size_t>(i)] = z.segment<2>(2 * i);
    // Round-off below an axis is snapped onto it.
    const double snap = std::max(options.residual_tol, 1e-12);
    for (auto& p : out.points)
        for (int k = 0; k < 2; ++k)
            if (p[k] < 0.0 && p[k] >= -snap) p[k] = 0.0;
    for (const auto& p : out.points) require_quadrant(p, "refined cycle point");
    out.residual = res;
    out.newton_steps = steps;
    out.multipliers = eigenvalues2(cycle_jacobian(spec, out.points));
    out.stability = verdict_from_eigenvalues(out.multipliers, kCycleMultiplierBand);
    return out;
}

std::optional<PeriodicOrbit> seed_two_cycle(const ModelSpec& spec, const Stated& equilibrium, double delta) {
    const Jacobian2d J = kernel::jacobian(spec, equilibrium);
    const Eigenvalues ev = eigenvalues2(J);
    if (ev[0].imag() != 0.0) return std::nullopt;
    const double lambda = std::min(ev[0].real(), ev[1].real());
    if (!(lambda < 0.0)) return std::nullopt;

    const Eigen::Vector2d v1(J(0, 1), lambda - J(0, 0));
    const Eigen::Vector2d v2(lambda - J(1, 1), J(1, 0));
    Eigen::Vector2d v = v1.norm() >= v2.norm() ? v1 : v2;
    if (v.norm() == 0.0) v = Eigen::Vector2d(1.0, 0.0);
    v.normalize();

    try {
        PeriodicOrbit c = refine_cycle(spec, {equilibrium + delta * v, equilibrium - delta * v}, 2);
        if (c.minimal_period() != 2) return std::nullopt;
        return c;
    } catch (const NumericError&) {
        return std::nullopt;
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

std::vector<PeriodicOrbit> two_cycles_near(const ModelSpec& spec, const Stated& equilibrium,
                                           const std::vector<double>& deltas) {
    std::vector<PeriodicOrbit> found;
    for (double d : deltas) {
        auto c = seed_two_cycle(spec, equilibrium, d);
        if (!c) continue;
        const bool seen = std::any_of(found.begin(), found.end(), [&](const PeriodicOrbit& o) {
            const double same = std::max(inf_distance(o.points[0], c->points[0]), inf_distance(o.points[1], c->points[1]));
            const double swapped = std::max(inf_distance(o.points[0], c->points[1]), inf_distance(o.points[1], c->points[0]));
            return std::min(same, swapped) < 1e-8;
        });
        if (!seen) found.push_back(*c);
    }
    auto distance = [&](const PeriodicOrbit& o) { return (o.points[0] - equilibrium).norm(); };
    std::stable_sort(found.begin(), found.end(),
                     [&](const PeriodicOrbit& a, const PeriodicOrbit& b) { return distance(a) < distance(b); });
    return found;
}

LyapunovResult lyapunov_max(const ModelSpec& spec, const Stated& init, std::size_t transient, std::size_t n) {
    validate(spec);
    require_quadrant(init, "initial state");
    LyapunovResult out;
    Stated s = init;
    for (std::size_t t = 0; t < transient; ++t) {
        const Stated next = kernel::step(spec, s);
        const bool stop = update_flags(out.flags, s, next);
        s = next;
        if (stop) {
            out.value = std::numeric_limits<double>::quiet_NaN();
            out.final_state = s;
            return out;
        }
    }
    Eigen::Vector2d v(1.0, 1.0);
    v /= std::sqrt(2.0);
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        v = kernel::jacobian(spec, s) * v;
        const Stated next = kernel::step(spec, s);
        const bool stop = update_flags(out.flags, s, next);
        const double norm = v.norm();
        if (stop || !(norm > 0.0) || !std::isfinite(norm)) {
            s = next;
            break;
        }
        sum += std::log(norm);
        v /= norm;
        s = next;
        ++out.iterations;
    }
    out.value = out.iterations > 0 ? sum / static_cast<double>(out.iterations) : std::numeric_limits<double>::quiet_NaN();
    out.final_state = s;
    return out;
}

std::string to_string(AttractorClass c) {
    switch (c) {
        case AttractorClass::FixedPoint: return "fixed_point";
        case AttractorClass::NCycle: return "n_cycle";
        case AttractorClass::InvariantCircle: return "invariant_circle";
        case AttractorClass::Chaotic: return "chaotic";
        case AttractorClass::AxisAttractor: return "axis_attractor";
        case AttractorClass::Extinction: return "extinction";
        case AttractorClass::Diverged: return "diverged";
    }
    return "unknown";
}

double interleaved_spread(const std::vector<Stated>& tail, int p) {
    if (p < 1) throw DomainError("interleave count must be >= 1");
    const auto up = static_cast<std::size_t>(p);
    std::vector<Stated> centroid(up, Stated::Zero());
    std::vector<std::size_t> count(up, 0);
    for (std::size_t i = 0; i < tail.size(); ++i) {
        centroid[i % up] += tail[i];
        ++count[i % up];
    }
    for (std::size_t k = 0; k < up; ++k)
        if (count[k] > 0) centroid[k] /= static_cast<double>(count[k]);
    double spread = 0.0;
    for (std::size_t i = 0; i < tail.size(); ++i) spread = std::max(spread, (tail[i] - centroid[i % up]).norm());
    return spread;
}

int modulation_period(const std::vector<Stated>& tail, int max_period) {
    const int top = std::min<int>(max_period, static_cast<int>(tail.size() / kModulationMinSamples));
    if (top < 2) return 1;
    std::vector<double> spread(static_cast<std::size_t>(top) + 1);
    double best = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= top; ++p) {
        spread[static_cast<std::size_t>(p)] = interleaved_spread(tail, p);
        best = std::min(best, spread[static_cast<std::size_t>(p)]);
    }
    if (!(best < 0.75 * spread[1])) return 1;
    for (int p = 2; p <= top; ++p)
        if (spread[static_cast<std::size_t>(p)] <= 1.1 * best) return p;
    return 1;
}

AttractorReport classify_attractor(const ModelSpec& spec, const Stated& init, const ClassifyOptions& options) {
    if (options.transient + options.lyapunov_window < options.min_budget) {
        std::ostringstream os;
        os << "classification budget " << options.transient + options.lyapunov_window << " is below "
           << options.min_budget;
        throw DomainError(os.str());
    }
    if (options.window < 4 * static_cast<std::size_t>(options.max_period))
        throw DomainError("classification window must hold 4 * max_period samples");

    AttractorReport rep;
    rep.thresholds = options;
    rep.lyapunov_max = std::numeric_limits<double>::quiet_NaN();

    Orbit orbit = simulate(spec, init, options.transient, options.window);
    rep.flags = orbit.flags;
    rep.final_state = orbit.final_state;
    rep.tail = std::move(orbit.samples);
    if (!rep.tail.empty()) {
        Stated c = Stated::Zero();
        for (const auto& s : rep.tail) c += s;
        rep.centroid = c / static_cast<double>(rep.tail.size());
        for (const auto& s : rep.tail) rep.radius = std::max(rep.radius, (s - rep.centroid).norm());
    }

    if (rep.flags.diverged) {
        rep.cls = AttractorClass::Diverged;
        return rep;
    }
    double max_x = 0.0;
    double max_y = 0.0;
    for (const auto& s : rep.tail) {
        max_x = std::max(max_x, s.x());
        max_y = std::max(max_y, s.y());
    }
    if (rep.flags.numerically_extinct_x || max_x < kExtinctionThreshold) {
        rep.cls = AttractorClass::Extinction;
        rep.period = 1;
        return rep;
    }

    Orbit view;
    view.samples = rep.tail;
    const auto cycle = detect_cycle(view, options.max_period, options.cycle_tol);
    if (max_y < options.axis_tol) {
        rep.cls = AttractorClass::AxisAttractor;
        if (cycle) rep.period = cycle->period;
        return rep;
    }
    if (cycle) {
        rep.period = cycle->period;
        rep.cls = cycle->period == 1 ? AttractorClass::FixedPoint : AttractorClass::NCycle;
        return rep;
    }

    const LyapunovResult lyap = lyapunov_max(spec, rep.final_state, 0, options.lyapunov_window);
    rep.lyapunov_max = lyap.value;
    rep.flags.numerically_extinct_x |= lyap.flags.numerically_extinct_x;
    rep.flags.numerically_extinct_y |= lyap.flags.numerically_extinct_y;
    rep.flags.diverged |= lyap.flags.diverged;
    if (lyap.flags.diverged) {
        rep.cls = AttractorClass::Diverged;
        return rep;
    }
    if (lyap.value > options.lyapunov_threshold) {
        rep.cls = AttractorClass::Chaotic;
        rep.modulation_period = modulation_period(rep.tail, options.max_period);
        return rep;
    }
    if (lyap.value >= -options.lyapunov_threshold) {
        rep.cls = AttractorClass::InvariantCircle;
        rep.modulation_period = modulation_period(rep.tail, options.max_period);
        return rep;
    }

    // Contracting but not yet periodic within the window: look once more further on.
    const Orbit later = simulate(spec, lyap.final_state, 0, options.window);
    const auto late_cycle = detect_cycle(later, options.max_period, options.cycle_tol);
    rep.final_state = later.final_state;
    if (late_cycle) {
        rep.tail = later.samples;
        rep.period = late_cycle->period;
        rep.cls = late_cycle->period == 1 ? AttractorClass::FixedPoint : AttractorClass::NCycle;
        return rep;
    }
    rep.cls = AttractorClass::NCycle;
    rep.period = 0;
    return rep;
}

Stated BasinGrid::node(std::size_t i, std::size_t j) const {
    const double tx = nx > 1 ? static_cast<double>(i) / static_cast<double>(nx - 1) : 0.0;
    const double ty = ny > 1 ? static_cast<double>(j) / static_cast<double>(ny - 1) : 0.0;
    return {x_lo + (x_hi - x_lo) * tx, y_lo + (y_hi - y_lo) * ty};
}

namespace {

double nearest_distance(const std::vector<Stated>& set, const Stated& s, double stop_below) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : set) {
        best = std::min(best, (p - s).norm());
        if (best < stop_below) break;
    }
    return best;
}

int basin_label(const ModelSpec& spec, const Stated& start, const std::vector<std::vector<Stated>>& attractors,
                const BasinOptions& options) {
    OrbitFlags flags;
    Stated s = start;
    for (std::size_t t = 0; t < options.transient; ++t) {
        const Stated next = kernel::step(spec, s);
        const bool stop = update_flags(flags, s, next);
        s = next;
        if (stop) return kBasinOther;
    }
    if (s.x() < kExtinctionThreshold) return kBasinExtinction;

    int label = kBasinOther;
    for (std::size_t k = 0; k < std::max<std::size_t>(options.check_steps, 1); ++k) {
        int here = kBasinOther;
        double here_d = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < attractors.size(); ++a) {
            const double d = nearest_distance(attractors[a], s, 0.0);
            if (d < options.capture_radius && d < here_d) {
                here = static_cast<int>(a);
                here_d = d;
            }
        }
        if (here == kBasinOther || (k > 0 && here != label)) return kBasinOther;
        label = here;
        const Stated next = kernel::step(spec, s);
        if (update_flags(flags, s, next)) return kBasinOther;
        s = next;
    }
    return label;
}

}  // namespace

BasinResult basin_sample(const ModelSpec& spec, const BasinGrid& grid, const std::vector<std::vector<Stated>>& attractors,
                         const BasinOptions& options) {
    validate(spec);
    if (attractors.empty()) throw DomainError("basin sampling needs at least one attractor");
    for (const auto& a : attractors)
        if (a.empty()) throw DomainError("attractor point sets must be nonempty");
    if (grid.nx == 0 || grid.ny == 0) throw DomainError("basin grid must be at least 1x1");
    if (grid.x_lo < 0.0 || grid.y_lo < 0.0 || !(grid.x_hi >= grid.x_lo) || !(grid.y_hi >= grid.y_lo))
        throw DomainError("basin grid must lie in the closed first quadrant");

    BasinResult out;
    out.grid = grid;
    out.labels.assign(grid.nx * grid.ny, kBasinOther);
    parallel_for(grid.ny, options.threads, [&](std::size_t j) {
        for (std::size_t i = 0; i < grid.nx; ++i) out.labels[j * grid.nx + i] = basin_label(spec, grid.node(i, j), attractors, options);
    });
    return out;
}

void write_orbit_csv(std::ostream& os, const Orbit& orbit) {
    CsvWriter csv(os);
    csv.field("t").field("x").field("y").end_row();
    for (std::size_t k = 0; k < orbit.samples.size(); ++k)
        csv.field(orbit.transient + k).field(orbit.samples[k].x()).field(orbit.samples[k].y()).end_row();
}

}  // namespace hostpara
