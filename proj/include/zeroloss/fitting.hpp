#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "zeroloss/docmodel.hpp"
#include "zeroloss/errors.hpp"
#include "zeroloss/textio.hpp"

namespace zeroloss {

struct CurvePoint {
    long long n = 0;
    double mean_error = 0.0;
    std::optional<double> std_error;
};

struct CurveFit {
    double e_min = 0.0;
    double eta = 1.0;
    double e0 = 1.0;
    bool e0_fixed = false;
    double rss = 0.0; // weighted when weights are in effect
    std::vector<double> per_point_residuals; // mean_i - model(n_i), unweighted
    bool weighted = false;
    bool mixed_std_ignored = false;
};

/// Header-driven CSV parse: columns n, mean_error and optionally std_error
/// are consumed by name, anything else is ignored. Rows come back sorted by
/// n; duplicate n is an error.
inline std::vector<CurvePoint> parse_curve_csv(std::istream& in,
                                               const std::string& name) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError("PARSE_ERROR", name + ": empty file");
    const auto header = split_csv_line(line);
    int col_n = -1, col_mean = -1, col_std = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "n") col_n = static_cast<int>(i);
        else if (header[i] == "mean_error") col_mean = static_cast<int>(i);
        else if (header[i] == "std_error") col_std = static_cast<int>(i);
    }
    if (col_n < 0 || col_mean < 0)
        throw ParseError("PARSE_ERROR",
                         name + ": header must contain n,mean_error");

    auto parse_double = [&](const std::string& field, int line_no) {
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (field.empty() || end != field.c_str() + field.size())
            throw ParseError("PARSE_ERROR", name + ":" + std::to_string(line_no) +
                                                ": bad number '" + field + "'");
        return v;
    };

    std::vector<CurvePoint> points;
    std::set<long long> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < header.size())
            throw ParseError("PARSE_ERROR", name + ":" + std::to_string(line_no) +
                                                ": expected " +
                                                std::to_string(header.size()) +
                                                " fields");
        CurvePoint point;
        const double n_raw = parse_double(fields[col_n], line_no);
        if (!(n_raw >= 0.0) || n_raw != std::floor(n_raw))
            throw ParseError("RANGE_ERROR", name + ":" + std::to_string(line_no) +
                                                ": n must be a non-negative integer");
        point.n = static_cast<long long>(n_raw);
        point.mean_error = parse_double(fields[col_mean], line_no);
        if (!(point.mean_error >= 0.0 && point.mean_error <= 1.0))
            throw ParseError("RANGE_ERROR", name + ":" + std::to_string(line_no) +
                                                ": mean_error outside [0, 1]");
        if (col_std >= 0 && !fields[col_std].empty()) {
            const double s = parse_double(fields[col_std], line_no);
            if (!(s >= 0.0))
                throw ParseError("RANGE_ERROR",
                                 name + ":" + std::to_string(line_no) +
                                     ": std_error must be >= 0");
            point.std_error = s;
        }
        if (!seen.insert(point.n).second)
            throw ParseError("DUPLICATE_N", name + ":" + std::to_string(line_no) +
                                                ": duplicate n = " +
                                                std::to_string(point.n));
        points.push_back(point);
    }
    std::sort(points.begin(), points.end(),
              [](const CurvePoint& a, const CurvePoint& b) { return a.n < b.n; });
    return points;
}

inline std::vector<CurvePoint> parse_curve_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ParseError("PARSE_ERROR", "cannot open " + path);
    return parse_curve_csv(file, path);
}

struct FitOptions {
    std::optional<double> e0_fixed;
};

namespace detail {

struct InnerSolution {
    double e_min = 0.0;
    double e0 = 0.0;
    double rss = 0.0;
};

/// Weighted least squares in (e_min, e0) for fixed eta. The model is
/// e0*c + e_min*(1-c) with c = eta/(eta+n): exactly linear in both
/// parameters. e_min is projected into [0, 1] and the remaining parameter
/// re-solved on the boundary.
inline InnerSolution solve_inner(const std::vector<CurvePoint>& points,
                                 const std::vector<double>& weights,
                                 double eta,
                                 const std::optional<double>& e0_fixed) {
    const std::size_t N = points.size();
    std::vector<double> c(N);
    for (std::size_t i = 0; i < N; ++i)
        c[i] = eta / (eta + static_cast<double>(points[i].n));

    auto rss_at = [&](double a, double b) {
        double total = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double model = b * c[i] + a * (1.0 - c[i]);
            const double r = points[i].mean_error - model;
            total += weights[i] * r * r;
        }
        return total;
    };
    auto solve_e_min_given_e0 = [&](double b) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double x = 1.0 - c[i];
            num += weights[i] * x * (points[i].mean_error - b * c[i]);
            den += weights[i] * x * x;
        }
        return den > 0.0 ? num / den : 0.0;
    };
    auto solve_e0_given_e_min = [&](double a) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            num += weights[i] * c[i] * (points[i].mean_error - a * (1.0 - c[i]));
            den += weights[i] * c[i] * c[i];
        }
        return den > 0.0 ? num / den : a;
    };

    double a, b;
    if (e0_fixed) {
        b = *e0_fixed;
        a = solve_e_min_given_e0(b);
        if (a < 0.0 || a > 1.0) a = std::clamp(a, 0.0, 1.0);
    } else {
        double S11 = 0.0, S12 = 0.0, S22 = 0.0, T1 = 0.0, T2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double x = 1.0 - c[i];
            S11 += weights[i] * x * x;
            S12 += weights[i] * x * c[i];
            S22 += weights[i] * c[i] * c[i];
            T1 += weights[i] * x * points[i].mean_error;
            T2 += weights[i] * c[i] * points[i].mean_error;
        }
        const double det = S11 * S22 - S12 * S12;
        if (det <= 1e-14 * S11 * S22 || !(det > 0.0)) {
            // columns collinear (all c equal): flat model
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                num += weights[i] * points[i].mean_error;
                den += weights[i];
            }
            const double v = den > 0.0 ? num / den : 0.0;
            return InnerSolution{v, v, rss_at(v, v)};
        }
        a = (T1 * S22 - T2 * S12) / det;
        b = (T2 * S11 - T1 * S12) / det;
        if (a < 0.0 || a > 1.0) {
            a = std::clamp(a, 0.0, 1.0);
            b = solve_e0_given_e_min(a);
        }
    }
    return InnerSolution{a, b, rss_at(a, b)};
}

} // namespace detail

/// Fits e_min + (e0 - e_min)/(1 + n/eta) by weighted least squares:
/// a log grid over eta (200 points per decade on [1e-2, 1e6]) with the
/// profiled (e_min, e0) subproblem solved in closed form, then golden-section
/// refinement around the best grid point. Weights are 1/std^2 when every
/// point carries a positive std; mixed presence falls back to unweighted.
inline CurveFit fit_curve(const std::vector<CurvePoint>& points,
                          FitOptions options = {}) {
    std::set<long long> distinct;
    for (const auto& p : points) distinct.insert(p.n);
    const std::size_t needed = options.e0_fixed ? 2 : 3;
    if (points.size() < needed)
        throw PreconditionError(
            "INSUFFICIENT_DATA",
            "need at least " + std::to_string(needed) + " points, have " +
                std::to_string(points.size()));
    if (distinct.size() == 1)
        throw PreconditionError("DEGENERATE", "all points share the same n");
    if (distinct.size() < needed)
        throw PreconditionError(
            "INSUFFICIENT_DATA",
            "need at least " + std::to_string(needed) + " distinct n, have " +
                std::to_string(distinct.size()));

    bool all_std = !points.empty();
    bool any_std = false;
    for (const auto& p : points) {
        const bool has = p.std_error && *p.std_error > 0.0;
        all_std = all_std && has;
        any_std = any_std || p.std_error.has_value();
    }
    std::vector<double> weights(points.size(), 1.0);
    if (all_std)
        for (std::size_t i = 0; i < points.size(); ++i)
            weights[i] = 1.0 / (*points[i].std_error * *points[i].std_error);

    auto profile = [&](double eta) {
        return detail::solve_inner(points, weights, eta, options.e0_fixed);
    };

    // Grid pass; ties go to the smaller eta.
    const double t_lo = -2.0, t_hi = 6.0;
    const int per_decade = 200;
    const int steps = static_cast<int>((t_hi - t_lo) * per_decade);
    double best_t = t_lo;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / steps;
        const double rss = profile(std::pow(10.0, t)).rss;
        if (rss < best_rss) {
            best_rss = rss;
            best_t = t;
        }
    }

    // Golden-section on log10(eta) in the bracket around the best grid point.
    const double step = (t_hi - t_lo) / steps;
    double lo = std::max(t_lo, best_t - step);
    double hi = std::min(t_hi, best_t + step);
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = profile(std::pow(10.0, x1)).rss;
    double f2 = profile(std::pow(10.0, x2)).rss;
    while (hi - lo > 1e-11) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = profile(std::pow(10.0, x1)).rss;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = profile(std::pow(10.0, x2)).rss;
        }
    }
    double eta = std::pow(10.0, 0.5 * (lo + hi));
    detail::InnerSolution solution = profile(eta);
    if (best_rss < solution.rss) { // keep the grid winner on a refinement miss
        eta = std::pow(10.0, best_t);
        solution = profile(eta);
    }

    CurveFit fit;
    fit.e_min = solution.e_min;
    fit.eta = eta;
    fit.e0 = solution.e0;
    fit.e0_fixed = options.e0_fixed.has_value();
    fit.rss = solution.rss;
    fit.weighted = all_std;
    fit.mixed_std_ignored = any_std && !all_std;
    fit.per_point_residuals.reserve(points.size());
    for (const auto& p : points)
        fit.per_point_residuals.push_back(
            p.mean_error - learning_curve(static_cast<double>(p.n), fit.e_min,
                                          fit.eta, fit.e0));
    return fit;
}

/// Noiseless learning-curve sample on a grid of n; the round-trip partner of
/// fit_curve.
inline std::vector<CurvePoint> generate_curve(double e_min, double eta,
                                              double e0,
                                              const std::vector<long long>& grid) {
    std::vector<CurvePoint> points;
    points.reserve(grid.size());
    for (long long n : grid)
        points.push_back(CurvePoint{
            n, learning_curve(static_cast<double>(n), e_min, eta, e0), {}});
    return points;
}

inline nlohmann::json fit_report_json(const CurveFit& fit,
                                      const std::vector<CurvePoint>& points) {
    nlohmann::json j;
    j["e_min"] = fit.e_min;
    j["eta"] = fit.eta;
    j["e0"] = fit.e0;
    j["e0_fixed"] = fit.e0_fixed;
    j["rss"] = fit.rss;
    j["weighted"] = fit.weighted;
    j["mixed_std_ignored"] = fit.mixed_std_ignored;
    j["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
        nlohmann::json row{{"n", points[i].n},
                           {"mean_error", points[i].mean_error},
                           {"residual", fit.per_point_residuals[i]}};
        if (points[i].std_error) row["std_error"] = *points[i].std_error;
        j["points"].push_back(row);
    }
    return j;
}

/// Fitted curve over `grid` as CSV. The first two columns re-use the input
/// schema so the file can be fed back into the fitter; the log10 columns
/// support the double-logarithmic deviation-from-e_min view (blank when
/// undefined).
inline void write_fit_curve_csv(const CurveFit& fit,
                                const std::vector<long long>& grid,
                                std::ostream& out) {
    out << "n,mean_error,log10_n,log10_excess\n";
    for (long long n : grid) {
        const double model =
            learning_curve(static_cast<double>(n), fit.e_min, fit.eta, fit.e0);
        out << n << ',' << format_double(model) << ',';
        if (n > 0) out << format_double(std::log10(static_cast<double>(n)));
        out << ',';
        if (model > fit.e_min)
            out << format_double(std::log10(model - fit.e_min));
        out << '\n';
    }
}

} // namespace zeroloss
