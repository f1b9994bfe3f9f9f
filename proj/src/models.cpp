#include "hostpara/models.hpp"

#include <cmath>
#include <string>

namespace hostpara {

namespace {

void require_finite_nonneg(double value, const char* what) {
    if (!std::isfinite(value)) throw DomainError(std::string(what) + " must be finite");
    if (value < 0.0) throw DomainError(std::string(what) + " must be non-negative");
}

void require_state(const Stated& s) {
    require_finite_nonneg(s.x(), "x");
    require_finite_nonneg(s.y(), "y");
}

}  // namespace

ModelSpec ModelSpec::model(int index, double r, double b) {
    ModelSpec spec;
    switch (index) {
        case 1: spec.growth = GrowthKind::Fractional;  spec.parasitism = ParasitismKind::Fractional;  break;
        case 2: spec.growth = GrowthKind::Exponential; spec.parasitism = ParasitismKind::Fractional;  break;
        case 3: spec.growth = GrowthKind::Fractional;  spec.parasitism = ParasitismKind::Exponential; break;
        case 4: spec.growth = GrowthKind::Exponential; spec.parasitism = ParasitismKind::Exponential; break;
        default: throw DomainError("model index must be 1..4, got " + std::to_string(index));
    }
    spec.r = r;
    spec.b = b;
    validate(spec);
    return spec;
}

ModelSpec ModelSpec::model_R0(int index, double R0, double b) {
    if (!std::isfinite(R0) || R0 < 1.0) throw DomainError("R0 must be finite and >= 1");
    return model(index, std::log(R0), b);
}

int ModelSpec::index() const noexcept {
    const bool exp_growth = growth == GrowthKind::Exponential;
    const bool exp_para = parasitism == ParasitismKind::Exponential;
    return 1 + (exp_growth ? 1 : 0) + (exp_para ? 2 : 0);
}

const char* ModelSpec::growth_param_name() const noexcept {
    return growth == GrowthKind::Fractional ? "R0" : "r";
}

void validate(const ModelSpec& spec) {
    if (!std::isfinite(spec.r) || spec.r < 0.0) throw DomainError("r must be finite and >= 0 (R0 >= 1)");
    if (!std::isfinite(spec.b) || spec.b <= 0.0) throw DomainError("b must be finite and > 0");
}

std::string to_string(GrowthKind kind) {
    return kind == GrowthKind::Fractional ? "fractional" : "exponential";
}

std::string to_string(ParasitismKind kind) {
    return kind == ParasitismKind::Fractional ? "fractional" : "exponential";
}

double growth_per_capita(const ModelSpec& spec, double x) {
    require_finite_nonneg(x, "x");
    return kernel::growth(spec, x);
}

double parasitism_factor(const ModelSpec& spec, double y) {
    require_finite_nonneg(y, "y");
    return kernel::escape_kernel(spec, y);
}

Stated map_step(const ModelSpec& spec, const Stated& s) {
    require_state(s);
    return kernel::step(spec, s);
}

double host_factor(const ModelSpec& spec, const Stated& s) {
    require_state(s);
    return kernel::host_factor(spec, s);
}

double parasitoid_factor(const ModelSpec& spec, const Stated& s) {
    require_state(s);
    return kernel::parasitoid_factor(spec, s);
}

Partials partials_at(const ModelSpec& spec, const Stated& s) {
    require_state(s);
    const double x = s.x();
    const double y = s.y();
    const double g = kernel::growth(spec, x);
    const double dg = kernel::growth_derivative(spec, x);
    const double h = kernel::escape_kernel(spec, y);
    Partials p;
    p.u_x = dg * kernel::escape_fraction(spec, y);
    p.u_y = g * kernel::escape_fraction_derivative(spec, y);
    p.v_x = spec.b * (g + x * dg) * h;
    p.v_y = spec.b * x * g * kernel::escape_kernel_derivative(spec, y);
    return p;
}

Partials equilibrium_partials(const ModelSpec& spec, const Stated& s, double tol) {
    require_state(s);
    if (s.x() <= 0.0 || s.y() <= 0.0)
        throw ContractError("equilibrium partials need an interior state");
    const double du = std::abs(kernel::host_factor(spec, s) - 1.0);
    const double dv = std::abs(kernel::parasitoid_factor(spec, s) - 1.0);
    if (du > tol || dv > tol)
        throw ContractError("equilibrium partials requested away from a coexistence equilibrium");

    const double x = s.x();
    const double y = s.y();
    const double g = kernel::growth(spec, x);
    const double h = kernel::escape_kernel(spec, y);
    const double R0 = spec.R0();

    Partials p;
    if (spec.growth == GrowthKind::Fractional) {
        p.u_x = (1.0 - R0) / R0 * g;
        p.v_x = g / (R0 * x);
    } else {
        p.u_x = -spec.r;
        p.v_x = 1.0 / x - spec.r;
    }
    if (spec.parasitism == ParasitismKind::Fractional) {
        p.u_y = -h;
        p.v_y = -h;
    } else {
        p.u_y = -1.0;
        p.v_y = (1.0 - y * h - h) / (y * h);
    }
    return p;
}

RawParams RawParams::with_R0(GrowthKind g, ParasitismKind p, double a, double c, double K, double R0) {
    if (!std::isfinite(R0) || R0 < 1.0) throw DomainError("R0 must be finite and >= 1");
    return RawParams{g, p, a, c, K, std::log(R0)};
}

Nondimensionalization from_raw(const RawParams& raw) {
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || v <= 0.0) throw DomainError(std::string(name) + " must be finite and > 0");
    };
    positive(raw.a, "a");
    positive(raw.c, "c");
    positive(raw.K, "K");
    ModelSpec spec;
    spec.growth = raw.growth;
    spec.parasitism = raw.parasitism;
    spec.r = raw.r;
    spec.b = raw.a * raw.c * raw.K;
    validate(spec);
    return Nondimensionalization(spec, raw.a, raw.K);
}

}  // namespace hostpara
