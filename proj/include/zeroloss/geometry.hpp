#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "zeroloss/errors.hpp"
#include "zeroloss/rng.hpp"

namespace zeroloss {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Normalize an angle in degrees into [0, 360).
inline double norm360(double deg) {
    double a = std::fmod(deg, 360.0);
    return a < 0.0 ? a + 360.0 : a;
}

// ---------------------------------------------------------------------------
// Feature maps
// ---------------------------------------------------------------------------

/// Identity map (x, y) or the monomial basis of total degree 1..d,
/// ordered by total degree with x-power descending inside each block:
/// x, y, x^2, xy, y^2, ..., x^d, ..., y^d.
struct FeatureMap {
    enum class Kind { identity, polynomial };

    Kind kind = Kind::identity;
    int degree = 1;

    static FeatureMap identity() { return FeatureMap{Kind::identity, 1}; }

    static FeatureMap polynomial(int degree) {
        if (degree < 1)
            throw PreconditionError("INVALID_DEGREE",
                                    "polynomial degree must be >= 1, got " +
                                        std::to_string(degree));
        return FeatureMap{Kind::polynomial, degree};
    }

    int output_dim() const {
        if (kind == Kind::identity) return 2;
        return degree * (degree + 3) / 2; // sum_{k=1..d} (k+1)
    }

    /// Fills `out` (resized to output_dim) with the feature vector of (x, y).
    void apply(double x, double y, std::vector<double>& out) const {
        out.resize(static_cast<std::size_t>(output_dim()));
        out[0] = x;
        out[1] = y;
        if (kind == Kind::identity) return;
        // Block k+1 is x * (first entry of block k) followed by y * block k.
        std::size_t prev = 0;
        for (int k = 1; k < degree; ++k) {
            const std::size_t cur = prev + static_cast<std::size_t>(k + 1);
            out[cur] = x * out[prev];
            for (int t = 0; t <= k; ++t)
                out[cur + 1 + static_cast<std::size_t>(t)] =
                    y * out[prev + static_cast<std::size_t>(t)];
            prev = cur;
        }
    }

    std::vector<double> operator()(double x, double y) const {
        std::vector<double> out;
        apply(x, y, out);
        return out;
    }
};

/// Monomials x^i y^j for i+j = 1..degree, x-power descending per block.
inline std::vector<double> poly_features(double x, double y, int degree) {
    return FeatureMap::polynomial(degree)(x, y);
}

// ---------------------------------------------------------------------------
// Hypotheses
// ---------------------------------------------------------------------------

/// sign(w . phi(x)); ties (w . phi == 0) predict +1.
struct Hypothesis {
    std::vector<double> weights;
    FeatureMap feature_map;

    int predict(double x, double y, std::vector<double>& scratch) const {
        feature_map.apply(x, y, scratch);
        double dot = 0.0;
        for (std::size_t i = 0; i < scratch.size(); ++i)
            dot += weights[i] * scratch[i];
        return dot >= 0.0 ? +1 : -1;
    }

    int predict(double x, double y) const {
        std::vector<double> scratch;
        return predict(x, y, scratch);
    }
};

/// Identity-map hypothesis whose decision line is the diameter at
/// `boundary_angle_deg` and whose positive half-plane is the counterclockwise
/// side when positive_side_sign > 0 (the clockwise side otherwise).
inline Hypothesis linear_hypothesis(double boundary_angle_deg,
                                    int positive_side_sign) {
    const double s = positive_side_sign > 0 ? 1.0 : -1.0;
    const double w_angle = deg_to_rad(boundary_angle_deg + s * 90.0);
    return Hypothesis{{std::cos(w_angle), std::sin(w_angle)},
                      FeatureMap::identity()};
}

// ---------------------------------------------------------------------------
// The disk problem
// ---------------------------------------------------------------------------

struct LabeledPoint {
    double x = 0.0;
    double y = 0.0;
    int label = +1; // in {-1, +1}
};

/// Uniform distribution on a disk minus two excluded sectors of angular
/// width 2*gap_halfwidth each, centered on the two ends of the separator
/// diameter. Points counterclockwise of the separator (relative angle in
/// [gap, 180-gap]) carry label +1, the opposite wedge -1.
struct DiskProblem {
    double gap_halfwidth = 1.8;    // degrees, half-width of each gap
    double separator_angle = 0.0;  // degrees, direction of the class boundary
    double radius = 1.0;

    void validate() const {
        if (!(gap_halfwidth > 0.0 && gap_halfwidth < 90.0))
            throw PreconditionError("INVALID_PROBLEM",
                                    "gap_halfwidth must lie in (0, 90)");
        if (!(radius > 0.0))
            throw PreconditionError("INVALID_PROBLEM", "radius must be > 0");
    }

    /// Angular measure of the support, 360 - 4*gap_halfwidth degrees.
    double support_measure() const { return 360.0 - 4.0 * gap_halfwidth; }

    /// Label of a supported relative angle; 0 if the angle is inside a gap.
    int label_of_relative_angle(double rho) const {
        const double g = gap_halfwidth;
        if (rho >= g && rho <= 180.0 - g) return +1;
        if (rho >= 180.0 + g && rho <= 360.0 - g) return -1;
        return 0;
    }
};

/// Exact label of a supported point. Throws UNSUPPORTED_POINT for points
/// outside the disk or inside a gap.
inline int true_label(const DiskProblem& problem, double x, double y) {
    problem.validate();
    if (x * x + y * y > problem.radius * problem.radius)
        throw PreconditionError("UNSUPPORTED_POINT", "point outside the disk");
    const double angle = std::atan2(y, x) * 180.0 / kPi;
    const double rho = norm360(angle - problem.separator_angle);
    const int label = problem.label_of_relative_angle(rho);
    if (label == 0)
        throw PreconditionError("UNSUPPORTED_POINT",
                                "point lies inside an excluded sector");
    return label;
}

/// Streaming sampler for the disk distribution: angles are drawn directly on
/// the union of the two allowed arcs (no rejection), radii as radius*sqrt(u)
/// for uniform area density.
class DiskSampler {
public:
    DiskSampler(const DiskProblem& problem, std::uint64_t seed)
        : problem_(problem), rng_(seed) {
        problem.validate();
    }

    LabeledPoint next() {
        const double g = problem_.gap_halfwidth;
        const double arc = 180.0 - 2.0 * g; // measure of one class arc
        const double w = rng_.next_double() * 2.0 * arc;
        double theta;
        int label;
        if (w < arc) {
            theta = problem_.separator_angle + g + w;
            label = +1;
        } else {
            theta = problem_.separator_angle + 180.0 + g + (w - arc);
            label = -1;
        }
        const double r = problem_.radius * std::sqrt(rng_.next_double());
        const double rad = deg_to_rad(theta);
        return LabeledPoint{r * std::cos(rad), r * std::sin(rad), label};
    }

private:
    DiskProblem problem_;
    Rng rng_;
};

/// i.i.d. sample of `count` labeled points; deterministic given seed.
inline std::vector<LabeledPoint> sample_points(const DiskProblem& problem,
                                               std::size_t count,
                                               std::uint64_t seed) {
    DiskSampler sampler(problem, seed);
    std::vector<LabeledPoint> points;
    points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) points.push_back(sampler.next());
    return points;
}

namespace detail {

/// Overlap length of the circular arcs [a0, a0+la) and [b0, b0+lb) in
/// degrees. Arcs are split at 0/360 and intersected as linear intervals.
inline double arc_overlap(double a0, double la, double b0, double lb) {
    a0 = norm360(a0);
    b0 = norm360(b0);
    double seg_a[2][2], seg_b[2][2];
    int na = 0, nb = 0;
    auto split = [](double s, double len, double seg[2][2], int& n) {
        if (s + len <= 360.0) {
            seg[0][0] = s;
            seg[0][1] = s + len;
            n = 1;
        } else {
            seg[0][0] = s;
            seg[0][1] = 360.0;
            seg[1][0] = 0.0;
            seg[1][1] = s + len - 360.0;
            n = 2;
        }
    };
    split(a0, la, seg_a, na);
    split(b0, lb, seg_b, nb);
    double total = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            const double lo = std::max(seg_a[i][0], seg_b[j][0]);
            const double hi = std::min(seg_a[i][1], seg_b[j][1]);
            if (hi > lo) total += hi - lo;
        }
    return total;
}

} // namespace detail

/// Exact true error of the diameter classifier at `boundary_angle_deg`
/// (positive side as in linear_hypothesis): misclassified angular measure
/// over the support measure. Radius-independent since all regions are wedges.
inline double linear_true_error(const DiskProblem& problem,
                                double boundary_angle_deg,
                                int positive_side_sign) {
    problem.validate();
    const double g = problem.gap_halfwidth;
    const double arc = 180.0 - 2.0 * g;
    const double plus_start = problem.separator_angle + g;
    const double minus_start = problem.separator_angle + 180.0 + g;
    const double pred_plus_start = positive_side_sign > 0
                                       ? boundary_angle_deg
                                       : boundary_angle_deg + 180.0;
    const double pred_minus_start = pred_plus_start + 180.0;
    const double mis =
        detail::arc_overlap(plus_start, arc, pred_minus_start, 180.0) +
        detail::arc_overlap(minus_start, arc, pred_plus_start, 180.0);
    return mis / problem.support_measure();
}

/// Fraction of misclassified points on a fresh test sample of
/// `test_count` points; deterministic given seed.
inline double estimate_true_error(const Hypothesis& h,
                                  const DiskProblem& problem,
                                  std::size_t test_count, std::uint64_t seed) {
    if (test_count < 1)
        throw PreconditionError("INVALID_COUNT", "test_count must be >= 1");
    DiskSampler sampler(problem, seed);
    std::vector<double> scratch;
    std::size_t mistakes = 0;
    for (std::size_t i = 0; i < test_count; ++i) {
        const LabeledPoint p = sampler.next();
        if (h.predict(p.x, p.y, scratch) != p.label) ++mistakes;
    }
    return static_cast<double>(mistakes) / static_cast<double>(test_count);
}

} // namespace zeroloss
