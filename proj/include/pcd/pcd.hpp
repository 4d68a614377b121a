#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcd/dataset.hpp"
#include "pcd/grid.hpp"

namespace pcd {

enum class ScheduleMode { Full, Sampled };

struct DimPair {
    std::int32_t src = 0;
    std::int32_t dst = 0;

    bool operator==(const DimPair&) const = default;
};

// Which (source dim -> target dim) pairs the second projection visits.
// Full mode: every ordered pair (i, k), i != k, in row-major order —
// m(m-1) projections. Sampled mode: `rounds` passes, each drawing a fresh
// seeded permutation of the dimensions and projecting every adjacent pair,
// with the last dimension wrapping to the first — m projections per round.
struct ProjectionSchedule {
    ScheduleMode mode = ScheduleMode::Full;
    int rounds = 5;
    std::uint64_t seed = 0;

    static ProjectionSchedule full() { return {ScheduleMode::Full, 0, 0}; }
    static ProjectionSchedule sampled(int rounds, std::uint64_t seed) {
        return {ScheduleMode::Sampled, rounds, seed};
    }
    // Full up to 1000 dimensions, sampled(5, seed) above — full mode is
    // deterministic and exhaustive but quadratic in m.
    static ProjectionSchedule default_for(std::size_t m, std::uint64_t seed = 0);

    void validate() const;  // throws std::invalid_argument
    std::size_t pair_count(std::size_t m) const;
    std::vector<DimPair> pairs(std::size_t m) const;

    // Projections charged to each dimension: m-1 in full mode, rounds in
    // sampled mode. Normalizes the second-projection term of the score.
    std::size_t per_dim_projections(std::size_t m) const;
};

// Per-point weights from both projection passes plus the final scores.
struct ScoreTable {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> pt_val;            // m * n, first-projection weights
    std::vector<double> ptp_sumsq;         // n, running sum of squared PtValp
    std::vector<std::int64_t> ptp_count;   // n, PtValp values accumulated
    std::vector<double> si;                // n, final scores

    double pt(std::size_t dim, std::size_t point) const { return pt_val[dim * n + point]; }
};

// First projection: each point's cell density over the dimension's mean
// occupied-cell density, for every dimension. Returns an m x n table laid
// out dim-major.
std::vector<double> first_projection(const GridIndex& grid, int threads = 1);

// Second-projection weights for the members of one source cell carried
// into dim dst: occupancy times cell-cluster length, normalized by the
// mean of that product over the distinct occupied target cells. Values
// align with grid.members(src_dim, src_cell). Throws std::invalid_argument
// on an empty source cell or src_dim == dst_dim.
std::vector<double> project_cell(const GridIndex& grid, std::size_t src_dim,
                                 std::int32_t src_cell, std::size_t dst_dim);

// Runs every (src -> dst) pair in the schedule over every non-empty source
// cell, accumulating squared weights per point. Pairs are reduced in
// schedule order through fixed-size blocks, so sums are bit-identical at
// any thread count.
void second_projection(const GridIndex& grid, const ProjectionSchedule& schedule,
                       std::vector<double>& ptp_sumsq, std::vector<std::int64_t>& ptp_count,
                       int threads = 1);

// Final score: 2m over the sum of squared first-projection weights plus
// the per-dimension-normalized sum of squared second-projection weights.
// Scores sit near 1 for points that blend in everywhere and grow as a
// point keeps landing in sparse, scattered cells.
std::vector<double> si_scores(std::span<const double> pt_val, std::span<const double> ptp_sumsq,
                              std::span<const std::int64_t> ptp_count, std::size_t n,
                              std::size_t m, const ProjectionSchedule& schedule,
                              int threads = 1);

// Full pipeline over a prebuilt grid.
ScoreTable score_grid(const GridIndex& grid, const ProjectionSchedule& schedule,
                      int threads = 1);
ScoreTable score(const Dataset& ds, int cn, const ProjectionSchedule& schedule,
                 int threads = 1);

struct DetectionResult {
    std::vector<std::pair<std::int32_t, double>> ranking;  // (id, score), score desc, id asc
    int k = 0;
    std::optional<double> threshold;

    std::vector<std::int32_t> top_ids() const;  // ids of the first k entries
};

// Ranks all points by score, descending, ties broken by ascending id;
// the first k entries are the detected outliers.
DetectionResult detect(const Dataset& ds, int cn, const ProjectionSchedule& schedule, int k,
                       int threads = 1);

// Ranking helper shared by detectors: ids ordered by (score desc, id asc).
std::vector<std::pair<std::int32_t, double>> rank_scores(std::span<const double> scores);

}  // namespace pcd
