#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "zeroloss/errors.hpp"
#include "zeroloss/quadrature.hpp"

namespace zeroloss {

/// Two-power density of classifiers D(E) = (E-e_min)^(alpha-1) *
/// (e_max-E)^(beta-1) on (e_min, e_max), zero elsewhere. Unnormalized: only
/// its shape enters the learning curve.
struct DocParams {
    double e_min = 0.0;
    double e_max = 1.0;
    double alpha = 1.0;
    double beta = 1.0;

    void validate() const {
        if (!(e_min >= 0.0 && e_min < 1.0))
            throw PreconditionError("INVALID_PARAMS", "e_min must lie in [0, 1)");
        if (!(e_max > e_min && e_max <= 1.0))
            throw PreconditionError("INVALID_PARAMS",
                                    "e_max must lie in (e_min, 1]");
        if (!(alpha > 0.0))
            throw PreconditionError("INVALID_PARAMS", "alpha must be > 0");
        if (!(beta > 0.0))
            throw PreconditionError("INVALID_PARAMS", "beta must be > 0");
    }

    double span() const { return e_max - e_min; }
};

/// Degenerate density D(E) = delta(E - location); the random-labelling case.
/// Kept as its own type: all its integrals are exact, no quadrature involved.
struct PointMassDoc {
    double location = 0.9;

    void validate() const {
        if (!(location >= 0.0 && location <= 1.0))
            throw PreconditionError("INVALID_PARAMS",
                                    "location must lie in [0, 1]");
    }
};

inline double density(double E, const DocParams& params) {
    params.validate();
    if (E <= params.e_min || E >= params.e_max) return 0.0;
    return std::pow(E - params.e_min, params.alpha - 1.0) *
           std::pow(params.e_max - E, params.beta - 1.0);
}

namespace detail {

inline void require_nonnegative_n(double n) {
    if (!(n >= 0.0))
        throw PreconditionError("INVALID_N", "n must be >= 0");
}

/// log of (1-E)^n D(E) at E = e_min + span*u, expressed through (u, 1-u) so
/// neither endpoint loses precision: E-e_min = span*u, e_max-E = span*(1-u),
/// 1-E = (1-e_max) + span*(1-u).
struct LogWeight {
    double n;
    DocParams p;

    double operator()(double u, double omu) const {
        const double span = p.span();
        double v = (p.alpha - 1.0) * std::log(span * u) +
                   (p.beta - 1.0) * std::log(span * omu);
        if (n > 0.0) v += n * std::log((1.0 - p.e_max) + span * omu);
        return v;
    }
};

} // namespace detail

/// log of Z(n) = integral of (1-E)^n D(E) dE over [e_min, e_max].
inline double log_doc_normalizer(double n, const DocParams& params,
                                 QuadratureOptions opt = {}) {
    params.validate();
    detail::require_nonnegative_n(n);
    return std::log(params.span()) +
           integrate01_log(detail::LogWeight{n, params}, opt);
}

/// log of the unnormalized weight (1-E)^n D(E); -inf outside (e_min, e_max).
inline double log_q_n_unnormalized(double E, double n,
                                   const DocParams& params) {
    params.validate();
    detail::require_nonnegative_n(n);
    if (E <= params.e_min || E >= params.e_max)
        return -std::numeric_limits<double>::infinity();
    double v = (params.alpha - 1.0) * std::log(E - params.e_min) +
               (params.beta - 1.0) * std::log(params.e_max - E);
    if (n > 0.0) v += n * std::log1p(-E);
    return v;
}

/// log Q_n(E): the zero-training-error density (1-E)^n D(E), normalized to
/// unit integral. -inf outside (e_min, e_max). Callers evaluating a whole
/// curve should compute log_doc_normalizer once and subtract it from
/// log_q_n_unnormalized instead.
inline double log_q_n(double E, double n, const DocParams& params,
                      QuadratureOptions opt = {}) {
    return log_q_n_unnormalized(E, n, params) -
           log_doc_normalizer(n, params, opt);
}

inline double q_n(double E, double n, const DocParams& params,
                  QuadratureOptions opt = {}) {
    return std::exp(log_q_n(E, n, params, opt));
}

/// Expected true error of a uniformly drawn global minimum:
/// integral of E (1-E)^n D(E) over integral of (1-E)^n D(E).
inline double expected_error_quadrature(double n, const DocParams& params,
                                        QuadratureOptions opt = {}) {
    params.validate();
    detail::require_nonnegative_n(n);
    const detail::LogWeight g{n, params};
    const double shift = detail::probe_log_max(g);
    auto weighted = [&](double u, double omu) {
        const double v = g(u, omu) - shift;
        return v > 700.0 ? std::exp(700.0) : std::exp(v);
    };
    const double denom = integrate01(weighted, opt);
    const double numer = integrate01(
        [&](double u, double omu) {
            return (params.e_min + params.span() * u) * weighted(u, omu);
        },
        opt);
    if (!(denom > 0.0))
        throw NumericalError("QUADRATURE_FAILURE", "normalizer vanished");
    return numer / denom;
}

inline double expected_error(double /*n*/, const PointMassDoc& doc) {
    doc.validate();
    return doc.location;
}

/// Closed-form learning curve for e_max = 1:
/// (e_min (beta + n) + alpha) / (alpha + beta + n).
inline double expected_error_closed(double n, double e_min, double alpha,
                                    double beta) {
    detail::require_nonnegative_n(n);
    DocParams{e_min, 1.0, alpha, beta}.validate();
    return (e_min * (beta + n) + alpha) / (alpha + beta + n);
}

/// Same curve in the (e_min, eta, e0) parametrization:
/// e_min + (e0 - e_min) / (1 + n/eta).
inline double learning_curve(double n, double e_min, double eta, double e0) {
    return e_min + (e0 - e_min) / (1.0 + n / eta);
}

/// log of the partition function Z(n) = integral of e^{-nE} D(E) dE.
inline double log_partition(double n, const DocParams& params,
                            QuadratureOptions opt = {}) {
    params.validate();
    detail::require_nonnegative_n(n);
    auto g = [&](double u, double omu) {
        const double span = params.span();
        const double E = params.e_min + span * u;
        return -n * E + (params.alpha - 1.0) * std::log(span * u) +
               (params.beta - 1.0) * std::log(span * omu);
    };
    return std::log(params.span()) + integrate01_log(g, opt);
}

inline double log_partition(double n, const PointMassDoc& doc) {
    doc.validate();
    return -n * doc.location;
}

/// d/dn log Z(n), computed as the exact Boltzmann ratio
/// -integral(E e^{-nE} D) / integral(e^{-nE} D), not a finite difference.
inline double dlog_partition_dn(double n, const DocParams& params,
                                QuadratureOptions opt = {}) {
    params.validate();
    detail::require_nonnegative_n(n);
    const double span = params.span();
    auto g = [&](double u, double omu) {
        const double E = params.e_min + span * u;
        return -n * E + (params.alpha - 1.0) * std::log(span * u) +
               (params.beta - 1.0) * std::log(span * omu);
    };
    const double shift = detail::probe_log_max(g);
    auto weighted = [&](double u, double omu) {
        const double v = g(u, omu) - shift;
        return v > 700.0 ? std::exp(700.0) : std::exp(v);
    };
    const double denom = integrate01(weighted, opt);
    const double numer = integrate01(
        [&](double u, double omu) {
            return (params.e_min + span * u) * weighted(u, omu);
        },
        opt);
    if (!(denom > 0.0))
        throw NumericalError("QUADRATURE_FAILURE", "partition vanished");
    return -numer / denom;
}

inline double dlog_partition_dn(double /*n*/, const PointMassDoc& doc) {
    doc.validate();
    return -doc.location;
}

/// log of the exponential-decay envelope of Q_n at E:
/// log [ D(E) / integral_0^a D ] - n log B(a), with B(a) = (1-a)/(1-E).
/// Requires e_min < a < E < 1; dominates log_q_n pointwise.
inline double log_decay_bound(double E, double a, double n,
                              const DocParams& params,
                              QuadratureOptions opt = {}) {
    params.validate();
    detail::require_nonnegative_n(n);
    if (!(params.e_min < a && a < E && E < 1.0))
        throw PreconditionError("INVALID_SPLIT",
                                "need e_min < a < E < 1");
    if (E >= params.e_max)
        return -std::numeric_limits<double>::infinity(); // D(E) = 0 there
    const double log_density = (params.alpha - 1.0) * std::log(E - params.e_min) +
                               (params.beta - 1.0) * std::log(params.e_max - E);
    // integral of D over [e_min, min(a, e_max)] via E' = e_min + (a-e_min)v
    const double hi = std::min(a, params.e_max);
    const double seg = hi - params.e_min;
    auto g = [&](double v, double omv) {
        return (params.alpha - 1.0) * std::log(seg * v) +
               (params.beta - 1.0) *
                   std::log((params.e_max - hi) + seg * omv);
    };
    const double log_tail = std::log(seg) + integrate01_log(g, opt);
    const double log_B = std::log1p(-a) - std::log1p(-E);
    return log_density - log_tail - n * log_B;
}

inline double decay_bound(double E, double a, double n, const DocParams& params,
                          QuadratureOptions opt = {}) {
    return std::exp(log_decay_bound(E, a, n, params, opt));
}

} // namespace zeroloss
