#pragma once

// Reference implementations for the tests. Written directly from the model
// formulas with no shared code beyond ModelSpec, so they disagree with the
// library if either side is wrong.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Core>
#include <Eigen/LU>

#include "hostpara/models.hpp"

namespace oracle {

using hostpara::ModelSpec;
using hostpara::Stated;

inline bool exp_growth(const ModelSpec& s) { return s.index() == 2 || s.index() == 4; }
inline bool exp_parasitism(const ModelSpec& s) { return s.index() == 3 || s.index() == 4; }

inline double g(const ModelSpec& s, double x) {
    const double R0 = std::exp(s.r);
    return exp_growth(s) ? std::exp(s.r * (1.0 - x)) : R0 / (1.0 + (R0 - 1.0) * x);
}

inline double h(const ModelSpec& s, double y) {
    if (!exp_parasitism(s)) return 1.0 / (1.0 + y);
    return y == 0.0 ? 1.0 : (1.0 - std::exp(-y)) / y;
}

inline Stated step(const ModelSpec& s, const Stated& z) {
    const double x = z.x(), y = z.y();
    return {x * g(s, x) * (1.0 - y * h(s, y)), y * s.b * x * g(s, x) * h(s, y)};
}

/// Central differences with a step relative to the coordinate.
inline Eigen::Matrix2d fd_jacobian(const std::function<Stated(const Stated&)>& f, const Stated& z) {
    Eigen::Matrix2d J;
    for (int k = 0; k < 2; ++k) {
        const double hk = 1e-6 * std::max(1.0, std::abs(z[k]));
        Stated p = z, m = z;
        p[k] += hk;
        m[k] -= hk;
        J.col(k) = (f(p) - f(m)) / (2.0 * hk);
    }
    return J;
}

/// Plain bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// x on the host nullcline g(x) (1 - y h(y)) = 1.
inline double host_x(const ModelSpec& s, double y) {
    const double e = 1.0 - y * h(s, y);
    if (exp_growth(s)) return 1.0 + std::log(e) / s.r;
    const double R0 = std::exp(s.r);
    return (R0 * e - 1.0) / (R0 - 1.0);
}

/// b that puts an interior equilibrium at height y.
inline double b_for_equilibrium_y(const ModelSpec& s, double y) {
    const double x = host_x(s, y);
    return 1.0 / (x * g(s, x) * h(s, y));
}

/// Jury residuals from the trace and determinant of a matrix.
struct Jury {
    double j1, j2, j3;
};
inline Jury jury(const Eigen::Matrix2d& J) {
    const double tau = J.trace(), delta = J.determinant();
    return {1.0 - tau + delta, 1.0 + tau + delta, 1.0 - delta};
}

}  // namespace oracle
