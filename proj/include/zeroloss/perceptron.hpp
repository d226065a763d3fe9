#pragma once

#include <cstdint>
#include <vector>

#include "zeroloss/errors.hpp"
#include "zeroloss/geometry.hpp"
#include "zeroloss/rng.hpp"

namespace zeroloss {

struct TrainConfig {
    long max_updates = 1'000'000;
    std::uint64_t seed = 0;
    FeatureMap feature_map = FeatureMap::identity();
};

struct TrainResult {
    Hypothesis hypothesis;
    long updates = 0;
    long sweeps = 1;
    double training_error = 0.0; // exactly 0 on success
};

/// Random unit vector in `dim` dimensions, from normalized standard normals.
inline std::vector<double> random_unit_vector(int dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> w(static_cast<std::size_t>(dim));
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (auto& wi : w) {
            wi = rng.next_gaussian();
            norm2 += wi * wi;
        }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& wi : w) wi *= inv;
    return w;
}

/// Perceptron sweeps in fixed input order from an explicit initial weight
/// vector: on each misclassified point w <- w + y*phi(x), until a full sweep
/// makes no update. Throws UPDATE_BUDGET_EXCEEDED once max_updates updates
/// have been spent without reaching zero training error.
inline TrainResult train_from_initial(const std::vector<LabeledPoint>& points,
                                      std::vector<double> initial_weights,
                                      const FeatureMap& feature_map,
                                      long max_updates) {
    if (points.empty())
        throw PreconditionError("EMPTY_TRAINING_SET",
                                "perceptron needs at least one point");
    if (max_updates < 1)
        throw PreconditionError("INVALID_BUDGET", "max_updates must be >= 1");

    const std::size_t dim = static_cast<std::size_t>(feature_map.output_dim());
    std::vector<double> features(points.size() * dim);
    std::vector<double> scratch;
    for (std::size_t i = 0; i < points.size(); ++i) {
        feature_map.apply(points[i].x, points[i].y, scratch);
        std::copy(scratch.begin(), scratch.end(), features.begin() + i * dim);
    }

    std::vector<double>& w = initial_weights;
    long updates = 0;
    long sweeps = 0;
    for (;;) {
        ++sweeps;
        bool updated = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double* phi = features.data() + i * dim;
            double dot = 0.0;
            for (std::size_t k = 0; k < dim; ++k) dot += w[k] * phi[k];
            const int predicted = dot >= 0.0 ? +1 : -1;
            const int y = points[i].label;
            if (predicted != y) {
                if (updates >= max_updates)
                    throw NumericalError(
                        "UPDATE_BUDGET_EXCEEDED",
                        "no zero-error solution within the update budget");
                for (std::size_t k = 0; k < dim; ++k)
                    w[k] += static_cast<double>(y) * phi[k];
                ++updates;
                updated = true;
            }
        }
        if (!updated) break;
    }
    return TrainResult{Hypothesis{std::move(w), feature_map}, updates, sweeps,
                       0.0};
}

/// ERM by the perceptron rule; the initial weight vector is a random unit
/// vector drawn deterministically from config.seed.
inline TrainResult train(const std::vector<LabeledPoint>& points,
                         const TrainConfig& config) {
    return train_from_initial(
        points, random_unit_vector(config.feature_map.output_dim(), config.seed),
        config.feature_map, config.max_updates);
}

} // namespace zeroloss
