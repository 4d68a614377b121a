#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcd/dataset.hpp"
#include "pcd/eval.hpp"
#include "pcd/lof.hpp"
#include "pcd/pcd.hpp"

namespace pcd {

struct PlanRow {
    GenSpec gen;               // seed is overridden per run from plan.seeds
    std::optional<int> cn;     // per-row cell count
};

// One experiment matrix: rows x detectors x seeds. Parsed from a JSON
// config; see plans/highdim.json for the shipped default.
struct ExperimentPlan {
    std::vector<PlanRow> rows;
    std::vector<std::string> detectors;  // "pcd" and/or "lof"
    std::vector<std::uint64_t> seeds;
    std::optional<int> cn_override;                 // wins over per-row cn
    std::optional<ProjectionSchedule> schedule;     // default: full for m <= 1000, sampled(5) above
    std::optional<int> top_k;                       // default: the row's planted outlier count
    LofConfig lof;

    void validate() const;  // throws std::invalid_argument
    static ExperimentPlan from_json_text(const std::string& text);
    static ExperimentPlan load(const std::string& path);
};

struct RunRecord {
    std::size_t row = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string detector;
    int cn = 0;
    double elapsed_seconds = 0.0;  // detector scoring time (generation excluded)
    bool ok = false;
    EvalReport report;
    std::string error;
};

struct StatSummary {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct Aggregate {
    std::size_t row = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::string detector;
    std::size_t run_count = 0;  // successful runs only
    StatSummary precision;
    StatSummary recall;
    StatSummary f_measure;
    StatSummary elapsed_seconds;
};

struct BenchReport {
    std::vector<RunRecord> runs;
    std::vector<Aggregate> aggregates;

    std::string to_json() const;
    std::string to_csv() const;  // one line per run, plot-ready
};

// Executes every (row, seed, detector) cell: generate the dataset, run the
// detector, evaluate against the planted labels, record metrics and wall
// time. A failed run is recorded with its error and skipped in the
// aggregates; it never aborts the plan. The whole report is deterministic
// given the plan.
BenchReport run_plan(const ExperimentPlan& plan, int threads = 1);

}  // namespace pcd
