#include "pcd/eval.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "pcd/pcd.hpp"

namespace pcd {

namespace {

EvalReport from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn, std::int64_t tn,
                       const DecisionRule& rule, const std::string& detector) {
    EvalReport r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    r.tn = tn;
    r.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    r.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    const double pr = r.precision + r.recall;
    r.f_measure = pr > 0.0 ? 2.0 * r.precision * r.recall / pr : 0.0;
    r.decision_rule = rule;
    r.detector = detector;
    return r;
}

void check_inputs(std::span<const double> scores, std::span<const std::uint8_t> labels) {
    if (labels.empty()) throw std::invalid_argument("evaluation requires ground-truth labels");
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("scores and labels must have the same length");
    }
}

}  // namespace

std::string DecisionRule::describe() const {
    if (kind == Kind::TopK) return "top_k(" + std::to_string(k) + ")";
    return "threshold(" + std::to_string(value) + ")";
}

std::string EvalReport::to_json() const {
    nlohmann::json j;
    j["tp"] = tp;
    j["fp"] = fp;
    j["fn"] = fn;
    j["tn"] = tn;
    j["precision"] = precision;
    j["recall"] = recall;
    j["f_measure"] = f_measure;
    if (decision_rule.kind == DecisionRule::Kind::TopK) {
        j["decision_rule"] = {{"type", "top_k"}, {"k", decision_rule.k}};
    } else {
        j["decision_rule"] = {{"type", "threshold"}, {"value", decision_rule.value}};
    }
    j["detector"] = detector;
    return j.dump(2);
}

EvalReport evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels,
                    const DecisionRule& rule, const std::string& detector) {
    check_inputs(scores, labels);
    const std::size_t n = scores.size();

    std::vector<std::uint8_t> predicted(n, 0);
    if (rule.kind == DecisionRule::Kind::TopK) {
        if (rule.k < 1 || static_cast<std::size_t>(rule.k) > n) {
            throw std::invalid_argument("top-k must satisfy 1 <= k <= n");
        }
        const auto ranking = rank_scores(scores);
        for (int i = 0; i < rule.k; ++i) {
            predicted[static_cast<std::size_t>(ranking[static_cast<std::size_t>(i)].first)] = 1;
        }
    } else {
        for (std::size_t j = 0; j < n; ++j) predicted[j] = scores[j] >= rule.value ? 1 : 0;
    }

    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (predicted[j] && labels[j]) ++tp;
        else if (predicted[j] && !labels[j]) ++fp;
        else if (!predicted[j] && labels[j]) ++fn;
        else ++tn;
    }
    return from_counts(tp, fp, fn, tn, rule, detector);
}

std::pair<double, EvalReport> best_f_sweep(std::span<const double> scores,
                                           std::span<const std::uint8_t> labels,
                                           const std::string& detector) {
    check_inputs(scores, labels);
    const std::size_t n = scores.size();

    std::int64_t positives = 0;
    for (const auto l : labels) positives += l;

    // Walk the distinct score values from highest to lowest, maintaining
    // prefix counts of the predicted set {score >= t}.
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    double best_t = scores[idx[0]];
    double best_f = -1.0;
    std::int64_t best_tp = 0;
    std::int64_t best_pred = 0;

    std::int64_t tp = 0;
    std::int64_t pred = 0;
    std::size_t i = 0;
    while (i < n) {
        const double t = scores[idx[i]];
        while (i < n && scores[idx[i]] == t) {
            tp += labels[idx[i]];
            ++pred;
            ++i;
        }
        const double precision = static_cast<double>(tp) / static_cast<double>(pred);
        const double recall = positives > 0 ? static_cast<double>(tp) / positives : 0.0;
        const double pr = precision + recall;
        const double f = pr > 0.0 ? 2.0 * precision * recall / pr : 0.0;
        if (f >= best_f) {  // >= so ties settle on the lower threshold
            best_f = f;
            best_t = t;
            best_tp = tp;
            best_pred = pred;
        }
    }

    const auto total = static_cast<std::int64_t>(n);
    EvalReport report = from_counts(best_tp, best_pred - best_tp, positives - best_tp,
                                    total - best_pred - (positives - best_tp),
                                    DecisionRule::threshold(best_t), detector);
    return {best_t, report};
}

}  // namespace pcd
