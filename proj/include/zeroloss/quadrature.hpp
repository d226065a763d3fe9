#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "zeroloss/errors.hpp"

namespace zeroloss {

struct QuadratureOptions {
    double rel_tol = 1e-10;
    int max_level = 13;
    std::size_t max_evals = 1'000'000;
};

namespace detail {

/// Node of the tanh-sinh rule on (0, 1): u, 1-u (computed without
/// cancellation on either end) and the quadrature weight du/dt.
struct TanhSinhNode {
    double u;
    double omu;
    double weight;
};

inline TanhSinhNode tanh_sinh_node(double t) {
    const double pi = 3.14159265358979323846;
    const double z = 2.0 * (pi / 2.0) * std::sinh(t); // 2 * (pi/2) sinh t
    // u = logistic(z), 1-u = logistic(-z); exact at both endpoints.
    double u, omu;
    if (z >= 0.0) {
        const double e = std::exp(-z);
        u = 1.0 / (1.0 + e);
        omu = e / (1.0 + e);
    } else {
        const double e = std::exp(z);
        u = e / (1.0 + e);
        omu = 1.0 / (1.0 + e);
    }
    const double weight = pi * std::cosh(t) * u * omu;
    return TanhSinhNode{u, omu, weight};
}

} // namespace detail

/// Tanh-sinh quadrature of f(u, 1-u) over u in (0, 1). The double-exponential
/// substitution concentrates nodes at both endpoints, so integrable endpoint
/// singularities (powers u^{a-1}, (1-u)^{b-1} with a, b > 0) converge at the
/// nominal rate. Throws QUADRATURE_FAILURE when the tolerance is not reached
/// within the level/evaluation budget.
template <class F>
double integrate01(F&& f, QuadratureOptions opt = {}) {
    const double t_max = 6.11; // beyond this u or 1-u underflows
    std::size_t evals = 0;

    auto eval = [&](double t) -> double {
        const auto node = detail::tanh_sinh_node(t);
        if (node.u <= 0.0 || node.omu <= 0.0 || node.weight <= 0.0) return 0.0;
        ++evals;
        return f(node.u, node.omu) * node.weight;
    };

    double h = 1.0;
    double sum = eval(0.0);
    for (int j = 1; j * h <= t_max; ++j) sum += eval(j * h) + eval(-j * h);
    double previous = sum * h;

    for (int level = 1; level <= opt.max_level; ++level) {
        h *= 0.5;
        double added = 0.0;
        for (int j = 1; j * h <= t_max; j += 2)
            added += eval(j * h) + eval(-j * h);
        const double current = previous * 0.5 + added * h;
        const double err = std::abs(current - previous);
        previous = current;
        if (level >= 3 &&
            err <= opt.rel_tol * std::max(std::abs(current),
                                          std::numeric_limits<double>::min()))
            return current;
        if (evals > opt.max_evals)
            throw NumericalError("QUADRATURE_FAILURE",
                                 "evaluation budget exhausted");
    }
    throw NumericalError("QUADRATURE_FAILURE",
                         "tolerance not reached within level budget");
}

namespace detail {

/// Max of a log-integrand over a coarse probe set (tanh-sinh nodes up to
/// level 3 plus a uniform grid). Used as the shift for log-space integration;
/// it only needs to be within ~700 of the true maximum.
template <class G>
double probe_log_max(G&& g) {
    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](double u, double omu) {
        const double v = g(u, omu);
        if (std::isfinite(v) && v > best) best = v;
    };
    const double h = 0.125;
    for (int j = 0; j * h <= 6.11; ++j) {
        const auto a = tanh_sinh_node(j * h);
        if (a.u > 0.0 && a.omu > 0.0) consider(a.u, a.omu);
        const auto b = tanh_sinh_node(-j * h);
        if (b.u > 0.0 && b.omu > 0.0) consider(b.u, b.omu);
    }
    for (int i = 1; i < 256; ++i) {
        const double u = static_cast<double>(i) / 256.0;
        consider(u, 1.0 - u);
    }
    return std::isfinite(best) ? best : 0.0;
}

} // namespace detail

/// log of the integral of exp(g(u, 1-u)) over (0, 1), with max-shift
/// normalization so integrands like (1-E)^n with n ~ 1e6 neither underflow
/// nor overflow.
template <class G>
double integrate01_log(G&& g, QuadratureOptions opt = {}) {
    const double shift = detail::probe_log_max(g);
    const double value = integrate01(
        [&](double u, double omu) {
            const double v = g(u, omu) - shift;
            return v > 700.0 ? std::exp(700.0) : std::exp(v);
        },
        opt);
    if (!(value > 0.0))
        throw NumericalError("QUADRATURE_FAILURE",
                             "log-space integral vanished");
    return shift + std::log(value);
}

} // namespace zeroloss
