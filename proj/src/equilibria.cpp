#include "hostpara/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hostpara/boundaries.hpp"

namespace hostpara {

std::string to_string(EquilibriumKind kind) {
    switch (kind) {
        case EquilibriumKind::Extinction: return "extinction";
        case EquilibriumKind::Exclusion: return "exclusion";
        case EquilibriumKind::Coexistence: return "coexistence";
    }
    return "unknown";
}

std::string to_string(Provenance p) {
    return p == Provenance::ClosedForm ? "closed_form" : "nullcline_root";
}

double equilibrium_residual(const ModelSpec& spec, const Stated& s) {
    const double du = std::abs(kernel::host_factor(spec, s) - 1.0);
    const double dv = std::abs(kernel::parasitoid_factor(spec, s) - 1.0);
    return std::max(du, dv);
}

std::array<EquilibriumRecord, 2> boundary_equilibria(const ModelSpec& spec) {
    validate(spec);
    EquilibriumRecord extinction;
    extinction.location = Stated(0.0, 0.0);
    extinction.kind = EquilibriumKind::Extinction;
    extinction.degenerate = spec.degenerate();

    EquilibriumRecord exclusion;
    exclusion.location = Stated(1.0, 0.0);
    exclusion.kind = EquilibriumKind::Exclusion;
    exclusion.degenerate = spec.degenerate();
    return {extinction, exclusion};
}

std::optional<EquilibriumRecord> coexistence_closed_form(const ModelSpec& spec) {
    validate(spec);
    if (spec.parasitism != ParasitismKind::Fractional)
        throw ContractError("closed-form coexistence equilibrium exists only for models 1 and 2");
    if (!(spec.b > 1.0) || !(spec.r > 0.0)) return std::nullopt;

    const double x = 1.0 / spec.b;
    double y = 0.0;
    if (spec.growth == GrowthKind::Fractional) {
        // R0 / (1 + (R0 - 1)/b) - 1 = (R0 - 1)(1 - 1/b) / (1 + (R0 - 1)/b)
        const double R0m1 = std::expm1(spec.r);
        y = R0m1 * (1.0 - x) / (1.0 + R0m1 * x);
    } else {
        y = std::expm1(spec.r * (1.0 - x));
    }
    EquilibriumRecord rec;
    rec.location = Stated(x, y);
    rec.kind = EquilibriumKind::Coexistence;
    rec.provenance = Provenance::ClosedForm;
    rec.residual = equilibrium_residual(spec, rec.location);
    return rec;
}

double host_nullcline_y_max(const ModelSpec& spec) {
    // x = 0 on the host nullcline: g(0) e(y) = 1, i.e. e(y) = 1/R0.
    if (spec.parasitism == ParasitismKind::Fractional) return std::expm1(spec.r);
    return spec.r;
}

double host_nullcline_x(const ModelSpec& spec, double y) {
    // g(x) e(y) = 1 solved for x.
    const double r = spec.r;
    if (spec.growth == GrowthKind::Exponential) {
        const double log_e = spec.parasitism == ParasitismKind::Fractional ? -std::log1p(y) : -y;
        return 1.0 + log_e / r;
    }
    const double R0m1 = std::expm1(r);
    if (spec.parasitism == ParasitismKind::Fractional) return (R0m1 - y) / ((1.0 + y) * R0m1);
    return std::expm1(r - y) / R0m1;
}

namespace {

double host_nullcline_dx_dy(const ModelSpec& spec, double y) {
    const double x = host_nullcline_x(spec, y);
    const double g = kernel::growth(spec, x);
    const double dg = kernel::growth_derivative(spec, x);
    const double e = kernel::escape_fraction(spec, y);
    const double de = kernel::escape_fraction_derivative(spec, y);
    return -g * de / (dg * e);
}

// v - 1 and its derivative along the host nullcline, where g(x) = 1/e(y).
double residual_derivative(const ModelSpec& spec, double y) {
    const double x = host_nullcline_x(spec, y);
    const double h = kernel::escape_kernel(spec, y);
    const double dh = kernel::escape_kernel_derivative(spec, y);
    const double e = kernel::escape_fraction(spec, y);
    const double de = kernel::escape_fraction_derivative(spec, y);
    const double q = h / e;
    const double dq = (dh * e - h * de) / (e * e);
    return spec.b * (host_nullcline_dx_dy(spec, y) * q + x * dq);
}

double golden_extremum(const ModelSpec& spec, double lo, double hi, bool maximize) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto f = [&](double y) { return maximize ? nullcline_residual(spec, y) : -nullcline_residual(spec, y); };
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

double polish_root(const ModelSpec& spec, double lo, double hi, double f_lo, const RootScanOptions& opt) {
    int iterations = 0;
    auto fail = [&](const char* msg) {
        std::ostringstream os;
        os << msg << " in bracket [" << lo << ", " << hi << "]";
        throw NumericError(os.str(), lo, hi);
    };
    const double sign_lo = f_lo < 0.0 ? -1.0 : 1.0;

    while ((hi - lo) > opt.bisection_width * 0.5 * (lo + hi)) {
        if (++iterations > opt.max_iterations) fail("root bisection did not converge");
        const double mid = 0.5 * (lo + hi);
        const double f_mid = nullcline_residual(spec, mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0 ? -1.0 : 1.0) == sign_lo) lo = mid; else hi = mid;
    }

    double y = 0.5 * (lo + hi);
    while (true) {
        const double f = nullcline_residual(spec, y);
        if (std::abs(f) < opt.residual_tol) return y;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return y;
        if (++iterations > opt.max_iterations) fail("root polish did not converge");
        if ((f < 0.0 ? -1.0 : 1.0) == sign_lo) lo = y; else hi = y;
        const double df = residual_derivative(spec, y);
        double next = (df != 0.0 && std::isfinite(df)) ? y - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        y = next;
    }
}

}  // namespace

double nullcline_residual(const ModelSpec& spec, double y) {
    const double x = host_nullcline_x(spec, y);
    const double h = kernel::escape_kernel(spec, y);
    const double e = kernel::escape_fraction(spec, y);
    return spec.b * x * (h / e) - 1.0;
}

std::vector<EquilibriumRecord> coexistence_numeric(const ModelSpec& spec, const RootScanOptions& opt) {
    validate(spec);
    std::vector<EquilibriumRecord> out;
    if (spec.degenerate()) return out;

    const double y_max = host_nullcline_y_max(spec);
    double y_min = opt.y_floor;
    if (y_max <= 10.0 * y_min) y_min = y_max * 1e-6;
    const std::size_t n = std::max<std::size_t>(opt.grid_points, 3);

    struct Sample {
        double y;
        double f;
    };
    std::vector<Sample> samples;
    samples.reserve(n + 8);
    const double log_ratio = std::log(y_max / y_min);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double y = (i + 1 == n) ? y_max : y_min * std::exp(log_ratio * t);
        samples.push_back({y, nullcline_residual(spec, y)});
    }

    // A root pair between two grid points shows up as an extremum that does not
    // cross zero on the grid; refine it and split the bracket if it does cross.
    std::vector<Sample> refined;
    refined.reserve(samples.size() + 8);
    std::vector<double> touching;  // extrema within residual_tol of zero: double roots
    refined.push_back(samples.front());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        const Sample& a = samples[i - 1];
        const Sample& m = samples[i];
        const Sample& c = samples[i + 1];
        const bool all_neg = a.f < 0.0 && m.f < 0.0 && c.f < 0.0;
        const bool all_pos = a.f > 0.0 && m.f > 0.0 && c.f > 0.0;
        const bool is_max = m.f >= a.f && m.f >= c.f;
        const bool is_min = m.f <= a.f && m.f <= c.f;
        if ((all_neg && is_max) || (all_pos && is_min)) {
            const double y_ext = golden_extremum(spec, a.y, c.y, all_neg);
            const double f_ext = nullcline_residual(spec, y_ext);
            const bool crosses = all_neg ? f_ext >= 0.0 : f_ext <= 0.0;
            if (crosses) {
                if (y_ext < m.y) {
                    refined.push_back({y_ext, f_ext});
                    refined.push_back(m);
                } else {
                    refined.push_back(m);
                    refined.push_back({y_ext, f_ext});
                }
                continue;
            }
            if (std::abs(f_ext) <= opt.residual_tol) touching.push_back(y_ext);
        }
        refined.push_back(m);
    }
    refined.push_back(samples.back());

    std::vector<double> roots;
    for (std::size_t i = 0; i < refined.size(); ++i) {
        const Sample& s = refined[i];
        if (s.f == 0.0) {
            roots.push_back(s.y);
            continue;
        }
        if (i + 1 < refined.size()) {
            const Sample& t = refined[i + 1];
            if (t.f != 0.0 && ((s.f < 0.0) != (t.f < 0.0))) roots.push_back(polish_root(spec, s.y, t.y, s.f, opt));
        }
    }
    for (double y : touching) {
        const bool known = std::any_of(roots.begin(), roots.end(), [&](double r) { return std::abs(r - y) < opt.tangent_separation; });
        if (!known) {
            roots.push_back(y);
            roots.push_back(y);  // counted twice so the merge below marks it tangent
        }
    }
    std::sort(roots.begin(), roots.end());

    for (std::size_t i = 0; i < roots.size(); ++i) {
        double y = roots[i];
        bool tangent = false;
        while (i + 1 < roots.size() && roots[i + 1] - roots[i] < opt.tangent_separation) {
            y = 0.5 * (y + roots[i + 1]);
            tangent = true;
            ++i;
        }
        const double x = host_nullcline_x(spec, y);
        if (!(x > 0.0) || !(y > 0.0)) continue;
        EquilibriumRecord rec;
        rec.location = Stated(x, y);
        rec.kind = EquilibriumKind::Coexistence;
        rec.provenance = Provenance::NullclineRoot;
        rec.residual = equilibrium_residual(spec, rec.location);
        rec.tangent = tangent;
        out.push_back(rec);
    }
    return out;
}

std::vector<EquilibriumRecord> coexistence_equilibria(const ModelSpec& spec) {
    if (spec.parasitism == ParasitismKind::Fractional) {
        auto rec = coexistence_closed_form(spec);
        if (rec) return {*rec};
        return {};
    }
    return coexistence_numeric(spec);
}

double saddle_node_b(const ModelSpec& spec) {
    validate(spec);
    if (spec.index() != 4) throw ContractError("saddle-node branch is defined for model 4 only");
    if (!(spec.r > 2.0)) throw DomainError("saddle-node branch requires r > 2");
    return invert_model4_curve(1, spec.r).b;
}

XIntercept parasitoid_x_intercept(const ModelSpec& spec) {
    validate(spec);
    if (spec.index() != 3) throw ContractError("parasitoid x-intercept is defined for model 3");
    if (!(spec.r > 0.0)) throw DomainError("parasitoid x-intercept requires R0 > 1");
    const double denom = spec.R0() * (spec.b - 1.0) + 1.0;
    XIntercept out;
    out.value = denom == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / denom;
    out.interior_equilibrium = out.value > 0.0 && out.value < 1.0;
    return out;
}

namespace {

// h^{-1}(c) for the exponential kernel, c in (0, 1].
double invert_exponential_kernel(const ModelSpec& spec, double c) {
    if (c >= 1.0) return 0.0;
    double lo = 0.0;
    double hi = 2.0 / c + 1.0;
    double y = std::min(2.0 * (1.0 - c), 0.5 * hi);
    for (int i = 0; i < 200; ++i) {
        const double f = kernel::escape_kernel(spec, y) - c;  // decreasing in y
        if (f == 0.0) return y;
        if (f > 0.0) lo = y; else hi = y;
        if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) return y;
        const double df = kernel::escape_kernel_derivative(spec, y);
        double next = df != 0.0 ? y - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        y = next;
    }
    return y;
}

double parasitoid_nullcline_y(const ModelSpec& spec, double x) {
    const double level = spec.b * x * kernel::growth(spec, x);  // h(y) = 1/level
    if (level < 1.0) {
        std::ostringstream os;
        os << "parasitoid nullcline leaves the first quadrant at x = " << x;
        throw DomainError(os.str());
    }
    if (spec.parasitism == ParasitismKind::Fractional) return level - 1.0;
    return invert_exponential_kernel(spec, 1.0 / level);
}

double host_nullcline_y(const ModelSpec& spec, double x) {
    if (x < 0.0 || x > 1.0) {
        std::ostringstream os;
        os << "host nullcline leaves the first quadrant at x = " << x << " (domain is [0, 1])";
        throw DomainError(os.str());
    }
    // e(y) = 1/g(x)
    const double g = kernel::growth(spec, x);
    if (spec.parasitism == ParasitismKind::Fractional) return g - 1.0;
    return std::log(g);
}

}  // namespace

std::optional<std::array<double, 2>> parasitoid_nullcline_range(const ModelSpec& spec, double x_cap) {
    validate(spec);
    auto level = [&](double x) { return spec.b * x * kernel::growth(spec, x) - 1.0; };
    if (spec.growth == GrowthKind::Fractional) {
        const double denom = spec.R0() * (spec.b - 1.0) + 1.0;
        if (!(denom > 0.0)) return std::nullopt;
        const double lo = 1.0 / denom;
        if (lo > x_cap) return std::nullopt;
        return std::array<double, 2>{lo, x_cap};
    }
    // x e^{r(1-x)} peaks at x = 1/r.
    const double peak = spec.r > 0.0 ? 1.0 / spec.r : x_cap;
    const double x_peak = std::min(peak, x_cap);
    if (level(x_peak) < 0.0) return std::nullopt;
    auto bisect = [&](double a, double b) {
        // level(a) < 0 <= level(b) or the reverse
        const bool a_neg = level(a) < 0.0;
        for (int i = 0; i < 200; ++i) {
            const double m = 0.5 * (a + b);
            if ((level(m) < 0.0) == a_neg) a = m; else b = m;
        }
        return a_neg ? b : a;
    };
    const double lo = bisect(0.0, x_peak);
    double hi = x_cap;
    if (level(x_cap) < 0.0) hi = bisect(x_peak, x_cap);
    return std::array<double, 2>{lo, hi};
}

NullclineSamples nullcline_samples(const ModelSpec& spec, Nullcline which, double x_lo, double x_hi,
                                   std::size_t n) {
    validate(spec);
    if (n < 2) throw DomainError("nullcline sampling needs n >= 2");
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || x_lo > x_hi)
        throw DomainError("nullcline sampling range must be finite and ordered");
    NullclineSamples out;
    out.which = which;
    out.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double x = (i + 1 == n) ? x_hi : x_lo + (x_hi - x_lo) * t;
        const double y = which == Nullcline::Host ? host_nullcline_y(spec, x) : parasitoid_nullcline_y(spec, x);
        out.points.emplace_back(x, y);
    }
    return out;
}

}  // namespace hostpara
