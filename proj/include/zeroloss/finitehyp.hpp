#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "zeroloss/errors.hpp"

namespace zeroloss {

/// Finite input space with probabilities and labels plus a finite hypothesis
/// table (row h = prediction per input). The exact-enumeration oracle for the
/// mean-fraction identities.
struct FiniteInput {
    double p = 0.0;
    int label = 0;
};

struct FiniteProblem {
    std::vector<FiniteInput> inputs;
    std::vector<std::vector<int>> hypotheses;
    int class_count = 2;

    std::size_t input_count() const { return inputs.size(); }
    std::size_t hypothesis_count() const { return hypotheses.size(); }

    void validate() const {
        if (inputs.empty())
            throw PreconditionError("INVALID_PROBLEM", "no inputs");
        if (hypotheses.empty())
            throw PreconditionError("INVALID_PROBLEM", "no hypotheses");
        if (class_count < 2)
            throw PreconditionError("INVALID_PROBLEM", "class_count must be >= 2");
        long double total = 0.0L;
        for (const auto& in : inputs) {
            if (!(in.p > 0.0))
                throw PreconditionError("INVALID_PROBLEM",
                                        "input probabilities must be > 0");
            if (in.label < 0 || in.label >= class_count)
                throw PreconditionError("INVALID_PROBLEM", "label out of range");
            total += in.p;
        }
        if (std::abs(static_cast<double>(total) - 1.0) > 1e-12)
            throw PreconditionError("INVALID_PROBLEM",
                                    "probabilities must sum to 1 (1e-12)");
        for (const auto& row : hypotheses) {
            if (row.size() != inputs.size())
                throw PreconditionError("INVALID_PROBLEM",
                                        "hypothesis row size mismatch");
            for (int pred : row)
                if (pred < 0 || pred >= class_count)
                    throw PreconditionError("INVALID_PROBLEM",
                                            "prediction out of range");
        }
    }

    static FiniteProblem from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

inline FiniteProblem FiniteProblem::from_json(const nlohmann::json& j) {
    FiniteProblem problem;
    try {
        for (const auto& item : j.at("inputs"))
            problem.inputs.push_back(
                FiniteInput{item.at("p").get<double>(),
                            item.at("label").get<int>()});
        for (const auto& row : j.at("hypotheses"))
            problem.hypotheses.push_back(row.get<std::vector<int>>());
        if (j.contains("class_count")) {
            problem.class_count = j.at("class_count").get<int>();
        } else {
            int max_id = 1;
            for (const auto& in : problem.inputs)
                max_id = std::max(max_id, in.label);
            for (const auto& row : problem.hypotheses)
                for (int pred : row) max_id = std::max(max_id, pred);
            problem.class_count = max_id + 1;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("PARSE_ERROR",
                         std::string("finite problem JSON: ") + e.what());
    }
    problem.validate();
    return problem;
}

inline nlohmann::json FiniteProblem::to_json() const {
    nlohmann::json j;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : inputs)
        j["inputs"].push_back({{"p", in.p}, {"label", in.label}});
    j["hypotheses"] = hypotheses;
    j["class_count"] = class_count;
    return j;
}

inline FiniteProblem load_finite_problem(const std::string& path) {
    std::ifstream file(path);
    if (!file)
        throw ParseError("PARSE_ERROR", "cannot open " + path);
    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("PARSE_ERROR", path + ": " + e.what());
    }
    return FiniteProblem::from_json(j);
}

/// True error of hypothesis row h: sum of p_i over misclassified inputs.
inline double exact_error(const FiniteProblem& problem, std::size_t h) {
    if (h >= problem.hypothesis_count())
        throw PreconditionError("INDEX_OUT_OF_RANGE",
                                "hypothesis row " + std::to_string(h));
    long double err = 0.0L;
    for (std::size_t i = 0; i < problem.inputs.size(); ++i)
        if (problem.hypotheses[h][i] != problem.inputs[i].label)
            err += problem.inputs[i].p;
    return static_cast<double>(err);
}

/// Rows correct on every input in `support` (indices into inputs). Zero
/// training error depends only on the support of a sample, not multiplicity.
inline std::vector<std::size_t> global_minima(
    const FiniteProblem& problem, const std::vector<std::size_t>& support) {
    problem.validate();
    if (support.empty())
        throw PreconditionError("EMPTY_SUPPORT",
                                "support must contain at least one input");
    for (std::size_t i : support)
        if (i >= problem.input_count())
            throw PreconditionError("INDEX_OUT_OF_RANGE",
                                    "input index " + std::to_string(i));
    std::vector<std::size_t> rows;
    for (std::size_t h = 0; h < problem.hypothesis_count(); ++h) {
        bool ok = true;
        for (std::size_t i : support)
            if (problem.hypotheses[h][i] != problem.inputs[i].label) {
                ok = false;
                break;
            }
        if (ok) rows.push_back(h);
    }
    return rows;
}

enum class EnumerationMode { exhaustive, support };

struct EnumerationOptions {
    /// Condition the ratio averages on H(S) nonempty instead of erroring;
    /// the conditioning probability is reported. mean_bad_count and
    /// formula_bad_count stay unconditional (their identity is exact either
    /// way).
    bool condition_on_nonempty = false;
};

struct EnumerationReport {
    long long n = 0;
    double epsilon = 0.0;
    EnumerationMode mode = EnumerationMode::exhaustive;
    double lhs_mean_ratio = 0.0;      // <|H_eps(S)| / |H(S)|>
    double rhs_ratio_of_means = 0.0;  // <|H_eps(S)|> / <|H(S)|>
    double covariance_term = 0.0;     // cov(ratio, |H(S)|)
    double mean_bad_count = 0.0;      // <|H_eps(S)|>, unconditional
    double formula_bad_count = 0.0;   // sum over bad h of (1-E(h))^n
    double mean_minima_count = 0.0;   // <|H(S)|>
    double conditioning_probability = 1.0;
};

inline const char* to_string(EnumerationMode mode) {
    return mode == EnumerationMode::exhaustive ? "exhaustive" : "support";
}

inline nlohmann::json report_to_json(const EnumerationReport& r) {
    return nlohmann::json{
        {"n", r.n},
        {"epsilon", r.epsilon},
        {"mode", to_string(r.mode)},
        {"lhs_mean_ratio", r.lhs_mean_ratio},
        {"rhs_ratio_of_means", r.rhs_ratio_of_means},
        {"covariance_term", r.covariance_term},
        {"mean_bad_count", r.mean_bad_count},
        {"formula_bad_count", r.formula_bad_count},
        {"mean_minima_count", r.mean_minima_count},
        {"conditioning_probability", r.conditioning_probability}};
}

namespace detail {

struct EnumerationAccumulator {
    long double total_p = 0.0L;      // all supports
    long double sum_minima = 0.0L;   // p * |H(S)|, all supports
    long double sum_bad = 0.0L;      // p * |H_eps(S)|, all supports
    long double cond_p = 0.0L;       // supports with |H(S)| > 0
    long double cond_minima = 0.0L;
    long double cond_bad = 0.0L;
    long double cond_ratio = 0.0L;   // p * |H_eps|/|H|
    bool saw_empty_minima = false;

    void add(long double p, long long minima, long long bad) {
        total_p += p;
        sum_minima += p * static_cast<long double>(minima);
        sum_bad += p * static_cast<long double>(bad);
        if (minima > 0) {
            cond_p += p;
            cond_minima += p * static_cast<long double>(minima);
            cond_bad += p * static_cast<long double>(bad);
            cond_ratio += p * static_cast<long double>(bad) /
                          static_cast<long double>(minima);
        } else {
            saw_empty_minima = true;
        }
    }
};

inline EnumerationReport finish_report(const EnumerationAccumulator& acc,
                                       long long n, double epsilon,
                                       EnumerationMode mode,
                                       long double formula_bad,
                                       const EnumerationOptions& options) {
    if (acc.saw_empty_minima && !options.condition_on_nonempty)
        throw PreconditionError(
            "EMPTY_MINIMA_SET",
            "a reachable support admits no zero-training-error hypothesis");
    if (!(acc.cond_p > 0.0L))
        throw PreconditionError("EMPTY_MINIMA_SET",
                                "no support admits a global minimum");
    EnumerationReport r;
    r.n = n;
    r.epsilon = epsilon;
    r.mode = mode;
    r.conditioning_probability = static_cast<double>(acc.cond_p);
    const long double mean_minima = acc.cond_minima / acc.cond_p;
    r.mean_minima_count = static_cast<double>(mean_minima);
    r.lhs_mean_ratio = static_cast<double>(acc.cond_ratio / acc.cond_p);
    r.rhs_ratio_of_means =
        static_cast<double>((acc.cond_bad / acc.cond_p) / mean_minima);
    r.covariance_term = static_cast<double>(
        acc.cond_bad / acc.cond_p -
        (acc.cond_ratio / acc.cond_p) * mean_minima);
    r.mean_bad_count = static_cast<double>(acc.sum_bad);
    r.formula_bad_count = static_cast<double>(formula_bad);
    return r;
}

} // namespace detail

/// Exact enumeration report: either over all ordered n-tuples with product
/// probabilities (exhaustive) or over supports with inclusion-exclusion
/// probabilities (support mode; reaches larger input spaces since |H(S)|
/// depends only on the support).
inline EnumerationReport exact_report(const FiniteProblem& problem,
                                      long long n, double epsilon,
                                      EnumerationMode mode,
                                      EnumerationOptions options = {}) {
    problem.validate();
    if (n < 0) throw PreconditionError("INVALID_N", "n must be >= 0");
    const std::size_t m = problem.input_count();
    const std::size_t H = problem.hypothesis_count();
    if (m > 62)
        throw PreconditionError("BUDGET_EXCEEDED", "too many inputs");

    // Per-hypothesis true error and correct-prediction mask.
    std::vector<long double> err(H, 0.0L);
    std::vector<std::uint64_t> correct(H, 0);
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t i = 0; i < m; ++i) {
            if (problem.hypotheses[h][i] != problem.inputs[i].label)
                err[h] += problem.inputs[i].p;
            else
                correct[h] |= (1ULL << i);
        }
    }
    long double formula_bad = 0.0L;
    for (std::size_t h = 0; h < H; ++h)
        if (static_cast<double>(err[h]) >= epsilon)
            formula_bad += std::pow(1.0L - err[h], static_cast<long double>(n));

    // Counting tables over support masks (m <= 20 keeps them in memory):
    // cnt_minima[T] = #{h : correct_mask(h) superset of T}, ditto for bad h.
    const bool tabulate = m <= 20;
    std::vector<long long> cnt_minima, cnt_bad;
    if (tabulate) {
        const std::size_t size = 1ULL << m;
        cnt_minima.assign(size, 0);
        cnt_bad.assign(size, 0);
        for (std::size_t h = 0; h < H; ++h) {
            ++cnt_minima[correct[h]];
            if (static_cast<double>(err[h]) >= epsilon) ++cnt_bad[correct[h]];
        }
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t mask = 0; mask < size; ++mask)
                if (!(mask & (1ULL << b))) {
                    cnt_minima[mask] += cnt_minima[mask | (1ULL << b)];
                    cnt_bad[mask] += cnt_bad[mask | (1ULL << b)];
                }
    }
    auto count_consistent = [&](std::uint64_t mask) -> std::pair<long long, long long> {
        if (tabulate) return {cnt_minima[mask], cnt_bad[mask]};
        long long minima = 0, bad = 0;
        for (std::size_t h = 0; h < H; ++h)
            if ((mask & ~correct[h]) == 0) {
                ++minima;
                if (static_cast<double>(err[h]) >= epsilon) ++bad;
            }
        return {minima, bad};
    };

    detail::EnumerationAccumulator acc;

    if (mode == EnumerationMode::exhaustive) {
        if (n * std::log(static_cast<double>(m)) > std::log(1e7) + 1e-9)
            throw PreconditionError("BUDGET_EXCEEDED",
                                    "m^n exceeds the exhaustive-mode budget");
        // Odometer over ordered tuples; the prefix stack carries support mask
        // and product probability so only the changed suffix is recomputed.
        struct Frame {
            std::uint64_t mask;
            long double prob;
        };
        const std::size_t len = static_cast<std::size_t>(n);
        std::vector<std::size_t> digit(len, 0);
        std::vector<Frame> stack(len + 1);
        stack[0] = {0, 1.0L};
        std::size_t depth = 0;
        for (;;) {
            while (depth < len) {
                const std::size_t i = digit[depth];
                stack[depth + 1] = {stack[depth].mask | (1ULL << i),
                                    stack[depth].prob *
                                        static_cast<long double>(
                                            problem.inputs[i].p)};
                ++depth;
            }
            const auto [minima, bad] = count_consistent(stack[len].mask);
            acc.add(stack[len].prob, minima, bad);
            std::size_t pos = len;
            while (pos > 0 && digit[pos - 1] + 1 == m) {
                digit[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) break;
            ++digit[pos - 1];
            depth = pos - 1;
        }
    } else {
        if (m > 20 || (1ULL << m) > 1'000'000ULL)
            throw PreconditionError("BUDGET_EXCEEDED",
                                    "2^m exceeds the support-mode budget");
        const std::size_t size = 1ULL << m;
        // Pr(support subset of T) = p(T)^n, then a subset Mobius transform
        // yields Pr(support = T) = sum over U subset T of (-1)^{|T|-|U|} p(U)^n.
        std::vector<long double> pmass(size, 0.0L);
        for (std::size_t mask = 1; mask < size; ++mask) {
            const std::size_t low = mask & (~mask + 1);
            const std::size_t idx = std::countr_zero(low);
            pmass[mask] = pmass[mask ^ low] +
                          static_cast<long double>(problem.inputs[idx].p);
        }
        std::vector<long double> prob(size);
        for (std::size_t mask = 0; mask < size; ++mask)
            prob[mask] = n == 0
                             ? 1.0L // p(T)^0; Mobius leaves a delta at the empty set
                             : std::pow(pmass[mask], static_cast<long double>(n));
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t mask = 0; mask < size; ++mask)
                if (mask & (1ULL << b)) prob[mask] -= prob[mask ^ (1ULL << b)];
        for (std::size_t mask = 0; mask < size; ++mask) {
            if (static_cast<long long>(
                    std::popcount(static_cast<std::uint64_t>(mask))) > n)
                continue; // support cannot exceed the sample size
            const auto [minima, bad] = count_consistent(mask);
            acc.add(prob[mask], minima, bad);
        }
    }

    return detail::finish_report(acc, n, epsilon, mode, formula_bad, options);
}

} // namespace zeroloss
