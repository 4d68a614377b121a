#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pcd {

struct DecisionRule {
    enum class Kind { TopK, Threshold };

    Kind kind = Kind::TopK;
    int k = 0;
    double value = 0.0;  // threshold

    static DecisionRule top_k(int k) { return {Kind::TopK, k, 0.0}; }
    static DecisionRule threshold(double t) { return {Kind::Threshold, 0, t}; }

    std::string describe() const;
};

struct EvalReport {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    DecisionRule decision_rule;
    std::string detector;

    std::string to_json() const;  // snake_case keys, 2-space indent
};

// Scores against ground truth under one decision rule. Top-K predicts the
// k highest scores (ties broken by ascending id); threshold predicts
// score >= t. Precision/recall/F fall back to 0 when undefined.
EvalReport evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    const DecisionRule& rule, const std::string& detector = {});

// Tries the threshold rule at every distinct score value and returns the
// threshold with the best F-measure (ties go to the lower threshold).
std::pair<double, EvalReport> best_f_sweep(std::span<const double> scores,
                                           std::span<const std::uint8_t> labels,
                                           const std::string& detector = {});

}  // namespace pcd
