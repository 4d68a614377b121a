#include "pcd/pcd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pcd/parallel.hpp"
#include "pcd/rng.hpp"

namespace pcd {

ProjectionSchedule ProjectionSchedule::default_for(std::size_t m, std::uint64_t seed) {
    return m <= 1000 ? full() : sampled(5, seed);
}

void ProjectionSchedule::validate() const {
    if (mode == ScheduleMode::Sampled && rounds < 1) {
        throw std::invalid_argument("sampled schedule needs rounds >= 1");
    }
}

std::size_t ProjectionSchedule::pair_count(std::size_t m) const {
    if (m < 2) return 0;
    if (mode == ScheduleMode::Full) return m * (m - 1);
    return static_cast<std::size_t>(rounds) * m;
}

std::size_t ProjectionSchedule::per_dim_projections(std::size_t m) const {
    if (m < 2) return 0;
    return mode == ScheduleMode::Full ? m - 1 : static_cast<std::size_t>(rounds);
}

std::vector<DimPair> ProjectionSchedule::pairs(std::size_t m) const {
    validate();
    std::vector<DimPair> out;
    if (m < 2) return out;
    out.reserve(pair_count(m));
    if (mode == ScheduleMode::Full) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                if (i == k) continue;
                out.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(k)});
            }
        }
        return out;
    }
    Rng rng(seed);
    std::vector<std::int32_t> perm(m);
    for (int r = 0; r < rounds; ++r) {
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        for (std::size_t t = 0; t < m; ++t) {
            out.push_back({perm[t], perm[(t + 1) % m]});  // last wraps to first
        }
    }
    return out;
}

namespace {

// Scratch arrays sized cn, reused across source cells. cellnum is kept
// all-zero between uses.
struct ProjectionWorkspace {
    std::vector<std::int32_t> cellnum;
    std::vector<std::int32_t> clulen;

    explicit ProjectionWorkspace(int cn) : cellnum(cn, 0), clulen(cn, 0) {}
};

// Weights for one source cell projected into dst_dim. Calls
// sink(member_index, point_id, weight) for every member, in member order.
template <typename Sink>
void project_members(const GridIndex& g, std::size_t src_dim, std::int32_t src_cell,
                     std::size_t dst_dim, ProjectionWorkspace& ws, Sink&& sink) {
    const auto members = g.members(src_dim, src_cell);
    const std::int32_t* target_cell = g.cell_of.data() + dst_dim * g.n;
    std::int32_t* cellnum = ws.cellnum.data();
    std::int32_t* clulen = ws.clulen.data();

    std::int32_t lo = g.cn();
    std::int32_t hi = -1;
    for (const auto j : members) {
        const std::int32_t c = target_cell[j];
        ++cellnum[c];
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }

    // Cell-clusters: maximal runs of consecutive occupied cells. Every cell
    // in a run shares the run's length.
    std::int64_t sum_products = 0;
    std::int32_t occupied = 0;
    for (std::int32_t c = lo; c <= hi;) {
        if (cellnum[c] == 0) {
            ++c;
            continue;
        }
        std::int32_t end = c;
        while (end < hi && cellnum[end + 1] > 0) ++end;
        const std::int32_t len = end - c + 1;
        for (std::int32_t cc = c; cc <= end; ++cc) {
            clulen[cc] = len;
            sum_products += static_cast<std::int64_t>(cellnum[cc]) * len;
        }
        occupied += len;
        c = end + 1;
    }
    const double denom = static_cast<double>(sum_products) / occupied;

    for (std::size_t idx = 0; idx < members.size(); ++idx) {
        const std::int32_t j = members[idx];
        const std::int32_t c = target_cell[j];
        const double raw = static_cast<double>(cellnum[c]) * clulen[c];
        sink(idx, j, raw / denom);
    }

    for (std::int32_t c = lo; c <= hi; ++c) cellnum[c] = 0;
}

// One (src -> dst) projection: every non-empty source cell, accumulating
// squared weights into acc (indexed by point id).
void accumulate_pair(const GridIndex& g, const DimPair& pair, ProjectionWorkspace& ws,
                     double* acc) {
    const auto src = static_cast<std::size_t>(pair.src);
    const auto counts = g.cell_counts(src);
    for (std::int32_t cell = 0; cell < g.cn(); ++cell) {
        if (counts[cell] == 0) continue;
        project_members(g, src, cell, static_cast<std::size_t>(pair.dst), ws,
                        [acc](std::size_t, std::int32_t j, double v) { acc[j] += v * v; });
    }
}

}  // namespace

std::vector<double> first_projection(const GridIndex& grid, int threads) {
    const std::size_t n = grid.n;
    const std::size_t m = grid.m;
    std::vector<double> pt_val(m * n);
    parallel_for(0, m, threads, [&](std::size_t dim, int) {
        const std::int32_t* cell = grid.cell_of.data() + dim * n;
        const std::int32_t* count = grid.counts.data() + dim * static_cast<std::size_t>(grid.cn());
        const double inv_avg = 1.0 / grid.avg_density[dim];
        double* out = pt_val.data() + dim * n;
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = count[cell[j]] * inv_avg;
        }
    });
    return pt_val;
}

std::vector<double> project_cell(const GridIndex& grid, std::size_t src_dim,
                                 std::int32_t src_cell, std::size_t dst_dim) {
    if (src_dim == dst_dim) throw std::invalid_argument("source and target dim must differ");
    if (src_dim >= grid.m || dst_dim >= grid.m) throw std::invalid_argument("dimension out of range");
    if (src_cell < 0 || src_cell >= grid.cn()) throw std::invalid_argument("cell out of range");
    if (grid.cell_counts(src_dim)[src_cell] == 0) {
        throw std::invalid_argument("source cell is empty");
    }
    ProjectionWorkspace ws(grid.cn());
    std::vector<double> out(grid.members(src_dim, src_cell).size());
    project_members(grid, src_dim, src_cell, dst_dim, ws,
                    [&out](std::size_t idx, std::int32_t, double v) { out[idx] = v; });
    return out;
}

void second_projection(const GridIndex& grid, const ProjectionSchedule& schedule,
                       std::vector<double>& ptp_sumsq, std::vector<std::int64_t>& ptp_count,
                       int threads) {
    const std::size_t n = grid.n;
    const auto pairs = schedule.pairs(grid.m);

    ptp_sumsq.assign(n, 0.0);
    ptp_count.assign(n, static_cast<std::int64_t>(pairs.size()));
    if (pairs.empty()) return;

    // Blocks of consecutive schedule pairs are the parallel work unit;
    // block partials are reduced in block order, which pins the floating-
    // point accumulation order independently of the thread count.
    constexpr std::size_t kPairsPerBlock = 64;
    const std::size_t n_blocks = (pairs.size() + kPairsPerBlock - 1) / kPairsPerBlock;
    const int t = resolve_threads(threads);
    const std::size_t in_flight = std::min<std::size_t>(n_blocks, static_cast<std::size_t>(t) * 4);

    std::vector<std::vector<double>> partial(in_flight, std::vector<double>(n));
    std::vector<ProjectionWorkspace> ws(static_cast<std::size_t>(t), ProjectionWorkspace(grid.cn()));

    for (std::size_t wave = 0; wave < n_blocks; wave += in_flight) {
        const std::size_t wave_blocks = std::min(in_flight, n_blocks - wave);
        parallel_for(0, wave_blocks, t, [&](std::size_t slot, int worker) {
            const std::size_t block = wave + slot;
            double* acc = partial[slot].data();
            std::fill_n(acc, n, 0.0);
            const std::size_t first = block * kPairsPerBlock;
            const std::size_t last = std::min(first + kPairsPerBlock, pairs.size());
            for (std::size_t p = first; p < last; ++p) {
                accumulate_pair(grid, pairs[p], ws[static_cast<std::size_t>(worker)], acc);
            }
        });
        for (std::size_t slot = 0; slot < wave_blocks; ++slot) {
            const double* acc = partial[slot].data();
            for (std::size_t j = 0; j < n; ++j) ptp_sumsq[j] += acc[j];
        }
    }
}

std::vector<double> si_scores(std::span<const double> pt_val, std::span<const double> ptp_sumsq,
                              std::span<const std::int64_t> ptp_count, std::size_t n,
                              std::size_t m, const ProjectionSchedule& schedule, int threads) {
    if (pt_val.size() != n * m || ptp_sumsq.size() != n || ptp_count.size() != n) {
        throw std::invalid_argument("score table shapes do not match n, m");
    }
    const double norm = static_cast<double>(schedule.per_dim_projections(m));
    std::vector<double> si(n);
    parallel_chunks(0, n, threads, [&](std::size_t a, std::size_t b, int) {
        std::vector<double> acc(b - a, 0.0);
        for (std::size_t dim = 0; dim < m; ++dim) {
            const double* row = pt_val.data() + dim * n;
            for (std::size_t j = a; j < b; ++j) {
                acc[j - a] += row[j] * row[j];
            }
        }
        for (std::size_t j = a; j < b; ++j) {
            double denom = acc[j - a];
            if (norm > 0.0) denom += ptp_sumsq[j] / norm;
            si[j] = 2.0 * static_cast<double>(m) / denom;
        }
    });
    return si;
}

ScoreTable score_grid(const GridIndex& grid, const ProjectionSchedule& schedule, int threads) {
    ScoreTable table;
    table.n = grid.n;
    table.m = grid.m;
    table.pt_val = first_projection(grid, threads);
    second_projection(grid, schedule, table.ptp_sumsq, table.ptp_count, threads);
    table.si = si_scores(table.pt_val, table.ptp_sumsq, table.ptp_count, table.n, table.m,
                         schedule, threads);
    return table;
}

ScoreTable score(const Dataset& ds, int cn, const ProjectionSchedule& schedule, int threads) {
    const GridIndex grid = build_grid(ds, cn, threads);
    return score_grid(grid, schedule, threads);
}

std::vector<std::pair<std::int32_t, double>> rank_scores(std::span<const double> scores) {
    std::vector<std::pair<std::int32_t, double>> ranking(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j) {
        ranking[j] = {static_cast<std::int32_t>(j), scores[j]};
    }
    std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranking;
}

std::vector<std::int32_t> DetectionResult::top_ids() const {
    std::vector<std::int32_t> ids;
    ids.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k && i < static_cast<int>(ranking.size()); ++i) {
        ids.push_back(ranking[static_cast<std::size_t>(i)].first);
    }
    return ids;
}

DetectionResult detect(const Dataset& ds, int cn, const ProjectionSchedule& schedule, int k,
                       int threads) {
    if (k < 1 || static_cast<std::size_t>(k) > ds.n) {
        throw std::invalid_argument("k must be in [1, n]");
    }
    const ScoreTable table = score(ds, cn, schedule, threads);
    DetectionResult result;
    result.ranking = rank_scores(table.si);
    result.k = k;
    return result;
}

}  // namespace pcd
