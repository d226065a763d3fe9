#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "zeroloss/errors.hpp"

namespace zeroloss {

namespace detail {

inline void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        throw PreconditionError("INVALID_EPSILON",
                                "epsilon must lie in (0, 1]");
}

inline void check_delta(double delta) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw PreconditionError("INVALID_DELTA", "delta must lie in (0, 1]");
}

} // namespace detail

/// log of the VC uniform bound 2 (2en/d)^d e^{-eps n / 2}.
inline double log_vc_bound(int d, double n, double epsilon) {
    if (d < 1) throw PreconditionError("INVALID_D", "VC dimension must be >= 1");
    if (!(n >= 1.0)) throw PreconditionError("INVALID_N", "n must be >= 1");
    detail::check_epsilon(epsilon);
    const double dd = static_cast<double>(d);
    return std::log(2.0) + dd * (1.0 + std::log(2.0 * n / dd)) -
           0.5 * epsilon * n;
}

/// The VC bound itself; may exceed 1 (vacuous) and saturates to +inf when
/// the log form exceeds double range.
inline double vc_bound(int d, double n, double epsilon) {
    return std::exp(log_vc_bound(d, n, epsilon));
}

/// Smallest n on the decreasing tail of the VC bound with bound <= delta.
/// The bound rises until n = 2d/eps and falls afterwards; if even the peak
/// is <= delta the answer is n = 1.
inline long long vc_min_n(int d, double epsilon, double delta) {
    detail::check_epsilon(epsilon);
    detail::check_delta(delta);
    const double log_delta = std::log(delta);
    const double peak_real = 2.0 * static_cast<double>(d) / epsilon;
    if (!(peak_real < 9.0e18))
        throw NumericalError("NO_SOLUTION",
                             "bound does not reach delta in integer range");
    const long long peak =
        std::max(1LL, static_cast<long long>(std::ceil(peak_real)));
    auto below = [&](long long n) {
        return log_vc_bound(d, static_cast<double>(n), epsilon) <= log_delta;
    };
    if (below(peak)) return 1; // bound increases up to the peak
    long long lo = peak, hi = 2 * peak;
    while (!below(hi)) {
        lo = hi;
        if (hi > (1LL << 61))
            throw NumericalError("NO_SOLUTION",
                                 "bound does not reach delta in range");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const long long mid = lo + (hi - lo) / 2;
        (below(mid) ? hi : lo) = mid;
    }
    return hi;
}

enum class FracForm { power, exponential };

/// Mean-fraction-of-bad-minima bound: R (1-eps)^n (power) or
/// R e^{-eps n} (exponential). Power <= exponential everywhere.
inline double frac_bound(double R, double n, double epsilon, FracForm form) {
    if (!(R >= 0.0)) throw PreconditionError("INVALID_R", "R must be >= 0");
    detail::check_epsilon(epsilon);
    if (!(n >= 0.0)) throw PreconditionError("INVALID_N", "n must be >= 0");
    if (form == FracForm::exponential) return R * std::exp(-epsilon * n);
    if (n == 0.0) return R;
    return R * std::exp(n * std::log1p(-epsilon));
}

/// Both closed forms of the epsilon achieving exceedance quantile q:
/// 1 - (q/R)^{1/n} and its looser relaxation ln(R/q)/n, clamped to [0, 1].
struct QuartileEps {
    double power_form;
    double log_form;
};

inline QuartileEps quartile_eps(double R, long long n, double q) {
    if (!(R > 0.0)) throw PreconditionError("INVALID_R", "R must be > 0");
    if (!(q > 0.0 && q < 1.0))
        throw PreconditionError("INVALID_Q", "q must lie in (0, 1)");
    if (n < 1) throw PreconditionError("INVALID_N", "n must be >= 1");
    auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    const double nn = static_cast<double>(n);
    const double power = 1.0 - std::pow(q / R, 1.0 / nn);
    const double logf = std::log(R / q) / nn;
    return QuartileEps{clamp01(power), clamp01(logf)};
}

/// Minimal integer n with frac_bound(R, n, eps, form) <= delta; 0 when
/// R <= delta already. Closed form plus a direct-evaluation bracket fix so
/// the postcondition holds exactly despite rounding.
inline long long frac_min_n(double R, double epsilon, double delta,
                            FracForm form) {
    if (!(R >= 0.0)) throw PreconditionError("INVALID_R", "R must be >= 0");
    detail::check_epsilon(epsilon);
    detail::check_delta(delta);
    if (R <= delta) return 0;
    double v;
    if (form == FracForm::exponential)
        v = std::log(R / delta) / epsilon;
    else
        v = std::log(delta / R) / std::log1p(-epsilon);
    long long n = static_cast<long long>(std::ceil(v - 1e-12));
    if (n < 0) n = 0;
    while (frac_bound(R, static_cast<double>(n), epsilon, form) > delta) ++n;
    while (n > 0 &&
           frac_bound(R, static_cast<double>(n - 1), epsilon, form) <= delta)
        --n;
    return n;
}

} // namespace zeroloss
