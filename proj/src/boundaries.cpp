#include "hostpara/boundaries.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hostpara/io.hpp"

namespace hostpara {

std::string to_string(GrowthParam p) { return p == GrowthParam::R0 ? "R0" : "r"; }

std::string to_string(CurveKind k) {
    switch (k) {
        case CurveKind::Parametric: return "parametric";
        case CurveKind::LineB1: return "line_b1";
        case CurveKind::LineR0: return "line_R0";
    }
    return "unknown";
}

std::string to_string(FreeParameter p) {
    switch (p) {
        case FreeParameter::B: return "b";
        case FreeParameter::R: return "r";
        case FreeParameter::R0: return "R0";
    }
    return "unknown";
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw DomainError("geometric grid needs 0 < lo <= hi");
    if (n < 2) throw DomainError("geometric grid needs n >= 2");
    std::vector<double> out(n);
    const double log_ratio = std::log(hi / lo);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = (i + 1 == n) ? hi : lo * std::exp(log_ratio * t);
    }
    return out;
}

double expm1_minus_arg(double y) {
    if (std::abs(y) >= 0.5) return std::expm1(y) - y;
    // y^2/2! + y^3/3! + ...
    double term = y * y / 2.0;
    double sum = 0.0;
    for (int k = 3; k < 40 && term != 0.0; ++k) {
        sum += term;
        term *= y / k;
    }
    return sum;
}

namespace {

void require_positive_internal(double y) {
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("curve parameter y must be finite and > 0");
}

}  // namespace

CurveSample model2_jury2_point(double u) {
    if (!(u > 1.5) || !std::isfinite(u)) throw DomainError("model 2 Jury-2 curve needs u > 3/2");
    const double log_term = std::log1p(2.0 * u - 4.0);  // ln(2u - 3)
    CurveSample s;
    s.internal = u;
    s.growth = u - log_term;
    s.b = 1.0 - log_term / u;
    s.in_existence_region = s.b > 1.0;
    return s;
}

CurveSample model3_jury3_point(double y) {
    require_positive_internal(y);
    const double E = std::expm1(y);
    const double D = expm1_minus_arg(y);
    CurveSample s;
    s.internal = y;
    s.growth = y * std::exp(2.0 * y) / E;
    // (y^2 e^{2y} - y e^y + y) / ((e^y - 1)(y e^y - e^y + 1))
    s.b = y * (y * std::expm1(2.0 * y) - D) / (E * (y * E - D));
    s.in_existence_region = s.b > 1.0;
    return s;
}

CurveSample model4_curve_point(int jury, double y) {
    require_positive_internal(y);
    const double E = std::expm1(y);
    const double D = expm1_minus_arg(y);
    const double ey = std::exp(y);
    CurveSample s;
    s.internal = y;
    switch (jury) {
        case 1:
            // r = y^2 e^y / (1 + y e^y - e^y),  b = y^2 e^y / (e^y - 1)^2
            s.growth = y * y * ey / (y * E - D);
            s.b = y * y * ey / (E * E);
            break;
        case 2:
            // r = (e^y (y^2 + 2y + 2) - 2) / (e^y (y + 1) - 1)
            // b = (2y (e^y - 1) + y^2 e^y (2 + y)) / ((2 + y) e^{2y} - 4 e^y - y + 2)
            s.growth = (2.0 * E + ey * y * (y + 2.0)) / (E + y * ey);
            s.b = (2.0 * y * E + y * y * ey * (2.0 + y)) / (2.0 * E * E + 2.0 * y * E + y * E * E);
            break;
        case 3:
            // r = (e^y (y^2 + y - 1) + 1) / (y e^y)
            // b = (e^y (y^3 + y^2 - y) + y) / ((e^y - 1)(y e^y - e^y + 1))
            s.growth = (y * y - D + E * y * (1.0 + y)) / (y * ey);
            s.b = (y * y * y * ey + E * y * y - y * D) / (E * (y * E - D));
            break;
        default:
            throw DomainError("Jury index must be 1, 2 or 3");
    }
    s.in_existence_region = true;
    return s;
}

BoundaryCurve curve_model2_jury2(double u_lo, double u_hi, std::size_t n) {
    if (!(u_lo > 1.5)) throw DomainError("model 2 Jury-2 curve needs u > 3/2");
    BoundaryCurve c;
    c.model = 2;
    c.jury = 2;
    c.param_kind = GrowthParam::r;
    for (double t : geometric_grid(u_lo - 1.5, u_hi - 1.5, n)) c.samples.push_back(model2_jury2_point(1.5 + t));
    return c;
}

BoundaryCurve curve_model3_jury3(double y_lo, double y_hi, std::size_t n) {
    BoundaryCurve c;
    c.model = 3;
    c.jury = 3;
    c.param_kind = GrowthParam::R0;
    for (double y : geometric_grid(y_lo, y_hi, n)) c.samples.push_back(model3_jury3_point(y));
    return c;
}

BoundaryCurve curves_model4(int jury, double y_lo, double y_hi, std::size_t n) {
    if (jury < 1 || jury > 3) throw DomainError("Jury index must be 1, 2 or 3");
    BoundaryCurve c;
    c.model = 4;
    c.jury = jury;
    c.param_kind = GrowthParam::r;
    for (double y : geometric_grid(y_lo, y_hi, n)) c.samples.push_back(model4_curve_point(jury, y));
    return c;
}

std::vector<BoundaryCurve> model_curves(int model) {
    switch (model) {
        case 1: return {};
        case 2: return {curve_model2_jury2(1.5 + kDefaultCurveLo, 1.5 + kDefaultCurveHi)};
        case 3: return {curve_model3_jury3(kDefaultCurveLo, kDefaultCurveHi)};
        case 4: {
            std::vector<BoundaryCurve> out;
            for (int j = 1; j <= 3; ++j) out.push_back(curves_model4(j, kDefaultCurveLo, kDefaultCurveHi));
            return out;
        }
        default: throw DomainError("model index must be 1..4");
    }
}

std::vector<BoundaryCurve> degenerate_lines(int model, double growth_hi, double b_hi, std::size_t n) {
    if (model < 1 || model > 4) throw DomainError("model index must be 1..4");
    if (n < 2) throw DomainError("line sampling needs n >= 2");
    const bool fractional_growth = model == 1 || model == 3;
    const GrowthParam kind = fractional_growth ? GrowthParam::R0 : GrowthParam::r;
    const double growth_lo = fractional_growth ? 1.0 : 0.0;
    // Exponential growth: the b = 1 line bounds the region only for 0 < r < 2.
    const double b1_hi = fractional_growth ? growth_hi : std::min(growth_hi, 2.0);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<BoundaryCurve> out;
    BoundaryCurve b1;
    b1.model = model;
    b1.jury = 1;
    b1.param_kind = kind;
    b1.kind = CurveKind::LineB1;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        b1.samples.push_back({nan, growth_lo + (b1_hi - growth_lo) * t, 1.0, false});
    }
    out.push_back(b1);
    for (int jury : {1, 3}) {
        BoundaryCurve line;
        line.model = model;
        line.jury = jury;
        line.param_kind = kind;
        line.kind = CurveKind::LineR0;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(n - 1);
            line.samples.push_back({nan, growth_lo, b_hi * t, false});
        }
        out.push_back(line);
    }
    return out;
}

namespace {

// Internal variable t in (lo, hi) where growth(t) = target, for growth monotone on the interval.
template <typename PointFn>
CurveSample invert_monotone(PointFn point, double lo, double hi, double target, bool increasing) {
    const double g_lo = point(lo).growth;
    const double g_hi = point(hi).growth;
    const bool inside = increasing ? (target >= g_lo && target <= g_hi) : (target <= g_lo && target >= g_hi);
    if (!inside) {
        std::ostringstream os;
        os << "growth value " << target << " is not reached on the curve segment";
        throw DomainError(os.str());
    }
    double prev_mid = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < 400; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == prev_mid || mid <= lo || mid >= hi) break;
        prev_mid = mid;
        const double g = point(mid).growth;
        if ((g < target) == increasing) lo = mid; else hi = mid;
    }
    return point(0.5 * (lo + hi));
}

// Smallest upper bracket with growth(hi) >= target, checking monotone growth on the way.
template <typename PointFn>
double expand_bracket(PointFn point, double lo, double target) {
    double hi = std::max(2.0 * lo, 1.0);
    double prev = point(lo).growth;
    for (int i = 0; i < 200; ++i) {
        const double g = point(hi).growth;
        if (!(g > prev)) throw NumericError("curve is not monotone in its internal variable", lo, hi);
        if (g >= target) return hi;
        prev = g;
        hi *= 2.0;
    }
    throw DomainError("growth value beyond the sampled curve");
}

}  // namespace

CurveSample invert_model2_curve(double r) {
    // Branch u in (3/2, 2]: r decreases from +inf to 2 while b decreases to 1.
    if (!(r >= 2.0) || !std::isfinite(r)) throw DomainError("model 2 Jury-2 boundary meets b >= 1 only for r >= 2");
    auto point = [](double t) { return model2_jury2_point(1.5 + t); };
    double lo = 0.5;
    while (point(lo).growth < r) {
        lo *= 0.5;
        if (lo < 1e-300) throw DomainError("r beyond the representable curve");
    }
    return invert_monotone(point, lo, 0.5, r, false);
}

CurveSample invert_model3_curve(double R0) {
    if (!(R0 > 1.0) || !std::isfinite(R0)) throw DomainError("model 3 Jury-3 boundary needs R0 > 1");
    auto point = [](double y) { return model3_jury3_point(y); };
    double lo = 1e-6;
    while (point(lo).growth > R0) {
        lo *= 0.5;
        if (lo < 1e-300) throw DomainError("R0 too close to 1 to invert");
    }
    return invert_monotone(point, lo, expand_bracket(point, lo, R0), R0, true);
}

CurveSample invert_model4_curve(int jury, double r) {
    if (jury < 1 || jury > 3) throw DomainError("Jury index must be 1, 2 or 3");
    if (jury < 3 && !(r > 2.0)) throw DomainError("model 4 Jury-1/2 curves exist only for r > 2");
    if (jury == 3 && !(r > 0.0)) throw DomainError("model 4 Jury-3 curve needs r > 0");
    if (!std::isfinite(r)) throw DomainError("r must be finite");
    auto point = [jury](double y) { return model4_curve_point(jury, y); };
    double lo = 1e-6;
    while (point(lo).growth > r) {
        lo *= 0.5;
        if (lo < 1e-300) throw DomainError("r too close to the curve limit to invert");
    }
    return invert_monotone(point, lo, expand_bracket(point, lo, r), r, true);
}

CurveSample invert_curve(int model, int jury, double growth) {
    if (model == 2 && jury == 2) return invert_model2_curve(growth);
    if (model == 3 && jury == 3) return invert_model3_curve(growth);
    if (model == 4) return invert_model4_curve(jury, growth);
    throw DomainError("no parametric boundary for model " + std::to_string(model) + " Jury " + std::to_string(jury));
}

RegionVerdict region_verdict(const ModelSpec& spec) {
    validate(spec);
    RegionVerdict out;
    out.degenerate = spec.degenerate();
    if (out.degenerate) {
        out.failing.set(0);
        out.failing.set(2);
        return out;
    }
    out.equilibria = coexistence_equilibria(spec);
    out.n_coexistence = static_cast<int>(out.equilibria.size());
    if (out.equilibria.empty()) {
        out.failing.set(0);
        return out;
    }
    for (const auto& eq : out.equilibria) out.reports.push_back(jury_report(spec, eq));
    for (std::size_t i = out.reports.size(); i-- > 0;) {
        if (out.reports[i].verdict == Verdict::Stable) {
            out.stable = true;
            out.stable_equilibrium_index = static_cast<int>(i);
            break;
        }
    }
    out.failing = out.stable ? std::bitset<3>() : out.reports.back().failing;
    return out;
}

ModelSpec with_parameter(const ModelSpec& spec, FreeParameter which, double value) {
    ModelSpec out = spec;
    switch (which) {
        case FreeParameter::B: out.b = value; break;
        case FreeParameter::R: out.r = value; break;
        case FreeParameter::R0:
            if (!(value >= 1.0)) throw DomainError("R0 must be >= 1");
            out.r = std::log(value);
            break;
    }
    validate(out);
    return out;
}

double tracked_jury_residual(const ModelSpec& spec, int jury) {
    if (jury < 1 || jury > 3) throw DomainError("Jury index must be 1, 2 or 3");
    const auto eqs = coexistence_equilibria(spec);
    if (eqs.empty()) {
        std::ostringstream os;
        os << "no coexistence equilibrium at r = " << spec.r << ", b = " << spec.b;
        throw DomainError(os.str());
    }
    return jury_report(spec, eqs.back()).residual(jury);
}

double critical_parameter(const ModelSpec& spec, FreeParameter which, int jury, double lo, double hi) {
    if (!(lo < hi)) throw DomainError("critical_parameter needs lo < hi");
    auto f = [&](double p) {
        const ModelSpec at = with_parameter(spec, which, p);
        if (jury == 1 && coexistence_equilibria(at).empty()) return -1.0;
        return tracked_jury_residual(at, jury);
    };
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        std::ostringstream os;
        os << "Jury " << jury << " residual has no sign change over [" << lo << ", " << hi << "]";
        throw NumericError(os.str(), lo, hi);
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void write_curves_csv(std::ostream& os, const std::vector<BoundaryCurve>& curves) {
    CsvWriter csv(os);
    csv.field("internal_param").field("growth_param").field("b").field("model").field("jury").end_row();
    for (const auto& c : curves)
        for (const auto& s : c.samples) csv.field(s.internal).field(s.growth).field(s.b).field(c.model).field(c.jury).end_row();
}

}  // namespace hostpara
