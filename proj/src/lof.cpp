#include "pcd/lof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pcd/parallel.hpp"

namespace pcd {

namespace {

constexpr double kDegenerateLrd = 1e12;

}  // namespace

void LofConfig::validate(std::size_t n) const {
    if (min_pts < 1 || static_cast<std::size_t>(min_pts) >= n) {
        throw std::invalid_argument("min_pts must satisfy 1 <= min_pts < n");
    }
}

std::vector<double> lof_scores(const Dataset& ds, const LofConfig& cfg, int threads) {
    ds.validate();
    cfg.validate(ds.n);

    const std::size_t n = ds.n;
    const std::size_t m = ds.m;
    const auto k = static_cast<std::size_t>(cfg.min_pts);

    // Exact pairwise Euclidean distances; upper triangle then mirror.
    std::vector<double> dist(n * n, 0.0);
    parallel_for(0, n, threads, [&](std::size_t a, int) {
        const double* pa = &ds.values[a * m];
        for (std::size_t b = a + 1; b < n; ++b) {
            const double* pb = &ds.values[b * m];
            double sq = 0.0;
            for (std::size_t d = 0; d < m; ++d) {
                const double diff = pa[d] - pb[d];
                sq += diff * diff;
            }
            dist[a * n + b] = std::sqrt(sq);
        }
    });
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            dist[b * n + a] = dist[a * n + b];
        }
    }

    // k-distance and neighborhood (everything within k-distance, so ties
    // may push the neighborhood past min_pts).
    std::vector<double> k_distance(n);
    std::vector<std::vector<std::int32_t>> neighbors(n);
    parallel_for(0, n, threads, [&](std::size_t a, int) {
        const double* row = &dist[a * n];
        std::vector<double> others;
        others.reserve(n - 1);
        for (std::size_t b = 0; b < n; ++b) {
            if (b != a) others.push_back(row[b]);
        }
        std::nth_element(others.begin(), others.begin() + (k - 1), others.end());
        const double kd = others[k - 1];
        k_distance[a] = kd;
        auto& nb = neighbors[a];
        for (std::size_t b = 0; b < n; ++b) {
            if (b != a && row[b] <= kd) nb.push_back(static_cast<std::int32_t>(b));
        }
    });

    std::vector<double> lrd(n);
    parallel_for(0, n, threads, [&](std::size_t a, int) {
        const double* row = &dist[a * n];
        double sum_reach = 0.0;
        for (const auto b : neighbors[a]) {
            sum_reach += std::max(k_distance[static_cast<std::size_t>(b)], row[b]);
        }
        lrd[a] = sum_reach > 0.0 ? static_cast<double>(neighbors[a].size()) / sum_reach
                                 : kDegenerateLrd;
    });

    std::vector<double> lof(n);
    parallel_for(0, n, threads, [&](std::size_t a, int) {
        double sum_ratio = 0.0;
        for (const auto b : neighbors[a]) {
            sum_ratio += lrd[static_cast<std::size_t>(b)] / lrd[a];
        }
        lof[a] = sum_ratio / static_cast<double>(neighbors[a].size());
    });
    return lof;
}

}  // namespace pcd
