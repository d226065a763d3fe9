#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "zeroloss/errors.hpp"
#include "zeroloss/geometry.hpp"
#include "zeroloss/perceptron.hpp"
#include "zeroloss/rng.hpp"
#include "zeroloss/textio.hpp"

namespace zeroloss {

struct ExperimentConfig {
    std::vector<int> n_values;
    int trials_per_n = 10'000;
    int test_count = 100'000;
    FeatureMap feature_map = FeatureMap::identity();
    std::uint64_t master_seed = 0;
    std::vector<double> epsilons = {0.05, 0.1};
    std::vector<double> quantiles = {0.25, 0.5, 0.75};
    long max_updates = 1'000'000;

    void validate() const {
        if (n_values.empty())
            throw PreconditionError("INVALID_CONFIG", "n_values is empty");
        std::set<int> seen;
        for (int n : n_values) {
            if (n < 1)
                throw PreconditionError("INVALID_CONFIG", "all n must be >= 1");
            if (!seen.insert(n).second)
                throw PreconditionError("INVALID_CONFIG",
                                        "duplicate n breaks (n, trial) keying");
        }
        if (trials_per_n < 1)
            throw PreconditionError("INVALID_CONFIG", "trials_per_n must be >= 1");
        if (test_count < 1)
            throw PreconditionError("INVALID_CONFIG", "test_count must be >= 1");
        for (std::size_t i = 0; i < epsilons.size(); ++i) {
            if (!(epsilons[i] > 0.0 && epsilons[i] < 1.0))
                throw PreconditionError("INVALID_CONFIG",
                                        "epsilons must lie in (0, 1)");
            if (i > 0 && !(epsilons[i] > epsilons[i - 1]))
                throw PreconditionError("INVALID_CONFIG",
                                        "epsilons must be strictly increasing");
        }
        for (double q : quantiles)
            if (!(q > 0.0 && q < 1.0))
                throw PreconditionError("INVALID_CONFIG",
                                        "quantiles must lie in (0, 1)");
    }
};

enum class TrialStatus { ok, update_budget_exceeded };

inline const char* to_string(TrialStatus s) {
    return s == TrialStatus::ok ? "ok" : "update_budget_exceeded";
}

struct TrialRecord {
    int n = 0;
    int trial_index = 0;
    std::uint64_t trial_seed = 0;
    double test_error = std::numeric_limits<double>::quiet_NaN();
    long updates = 0;
    TrialStatus status = TrialStatus::ok;
};

/// One train-until-zero-error / test cycle. The trial seed is a fixed
/// avalanche mix of (master_seed, n, trial_index); sampling, initialization
/// and testing draw three sub-seeds from it in a fixed order.
inline TrialRecord run_trial(const DiskProblem& problem,
                             const ExperimentConfig& config, int n,
                             int trial_index) {
    TrialRecord record;
    record.n = n;
    record.trial_index = trial_index;
    record.trial_seed = derive_seed(config.master_seed,
                                    static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(trial_index));
    Rng sub(record.trial_seed);
    const std::uint64_t sample_seed = sub.next_u64();
    const std::uint64_t init_seed = sub.next_u64();
    const std::uint64_t test_seed = sub.next_u64();

    const auto points =
        sample_points(problem, static_cast<std::size_t>(n), sample_seed);
    try {
        TrainResult trained = train_from_initial(
            points,
            random_unit_vector(config.feature_map.output_dim(), init_seed),
            config.feature_map, config.max_updates);
        record.updates = trained.updates;
        record.test_error = estimate_true_error(
            trained.hypothesis, problem,
            static_cast<std::size_t>(config.test_count), test_seed);
    } catch (const NumericalError&) {
        record.updates = config.max_updates;
        record.status = TrialStatus::update_budget_exceeded;
    }
    return record;
}

/// All trials for all n. Trials are independent and may run on `threads`
/// workers; records are keyed and sorted by (n, trial_index), so the output
/// is identical for every thread count.
inline std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                               const DiskProblem& problem,
                                               int threads = 1) {
    config.validate();
    problem.validate();
    const std::size_t per_n = static_cast<std::size_t>(config.trials_per_n);
    const std::size_t total = config.n_values.size() * per_n;
    std::vector<TrialRecord> records(total);

    auto job = [&](std::size_t index) {
        const int n = config.n_values[index / per_n];
        const int trial = static_cast<int>(index % per_n);
        records[index] = run_trial(problem, config, n, trial);
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < total; ++i) job(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= total) break;
                job(i);
            }
        };
        std::vector<std::thread> pool;
        const int count = std::min<int>(threads, static_cast<int>(total));
        pool.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::sort(records.begin(), records.end(),
              [](const TrialRecord& a, const TrialRecord& b) {
                  return a.n != b.n ? a.n < b.n : a.trial_index < b.trial_index;
              });
    return records;
}

struct SummaryRow {
    int n = 0;
    std::size_t trials = 0;    // all records for this n
    std::size_t successes = 0; // records with status ok
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<std::pair<double, double>> quantile_values;  // (q, value)
    std::vector<std::pair<double, double>> exceed_fractions; // (eps, fraction)
};

/// Linear interpolation between order statistics with h = (N-1)q + 1
/// (the common box-plot convention). `sorted` must be ascending.
inline double quantile_type7(const std::vector<double>& sorted, double q) {
    const std::size_t N = sorted.size();
    if (N == 1) return sorted[0];
    const double h = static_cast<double>(N - 1) * q;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= N) return sorted[N - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// Per-n statistics over successful trials: mean, sample std, quantiles and
/// inclusive exceedance fractions #{test_error >= eps} / successes.
inline std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records,
                                         const std::vector<double>& epsilons,
                                         const std::vector<double>& quantiles) {
    std::map<int, std::vector<double>> errors_by_n;
    std::map<int, std::size_t> totals;
    for (const auto& r : records) {
        ++totals[r.n];
        if (r.status == TrialStatus::ok) errors_by_n[r.n].push_back(r.test_error);
    }
    std::vector<SummaryRow> rows;
    for (const auto& [n, total] : totals) {
        auto it = errors_by_n.find(n);
        if (it == errors_by_n.end() || it->second.empty())
            throw PreconditionError("NO_RECORDS",
                                    "no successful trials for n = " +
                                        std::to_string(n));
        std::vector<double>& errs = it->second;
        std::sort(errs.begin(), errs.end());
        SummaryRow row;
        row.n = n;
        row.trials = total;
        row.successes = errs.size();
        double sum = 0.0;
        for (double e : errs) sum += e;
        row.mean = sum / static_cast<double>(errs.size());
        double ss = 0.0;
        for (double e : errs) ss += (e - row.mean) * (e - row.mean);
        row.stddev = errs.size() > 1
                         ? std::sqrt(ss / static_cast<double>(errs.size() - 1))
                         : 0.0;
        for (double q : quantiles)
            row.quantile_values.emplace_back(q, quantile_type7(errs, q));
        for (double eps : epsilons) {
            const auto first =
                std::lower_bound(errs.begin(), errs.end(), eps);
            const double frac = static_cast<double>(errs.end() - first) /
                                static_cast<double>(errs.size());
            row.exceed_fractions.emplace_back(eps, frac);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_trials_csv(const std::vector<TrialRecord>& records,
                             std::ostream& out) {
    out << "n,trial_index,trial_seed,test_error,updates,status\n";
    for (const auto& r : records) {
        out << r.n << ',' << r.trial_index << ',' << r.trial_seed << ','
            << (r.status == TrialStatus::ok ? format_double(r.test_error)
                                            : std::string("nan"))
            << ',' << r.updates << ',' << to_string(r.status) << '\n';
    }
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows,
                              std::ostream& out) {
    out << "n,trials,successes,mean,std";
    if (!rows.empty()) {
        for (const auto& [q, value] : rows.front().quantile_values)
            out << ",q" << format_double(q);
        for (const auto& [eps, frac] : rows.front().exceed_fractions)
            out << ",exceed" << format_double(eps);
    }
    out << '\n';
    for (const auto& row : rows) {
        out << row.n << ',' << row.trials << ',' << row.successes << ','
            << format_double(row.mean) << ',' << format_double(row.stddev);
        for (const auto& [q, value] : row.quantile_values)
            out << ',' << format_double(value);
        for (const auto& [eps, frac] : row.exceed_fractions)
            out << ',' << format_double(frac);
        out << '\n';
    }
}

} // namespace zeroloss
