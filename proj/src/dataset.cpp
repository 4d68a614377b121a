#include "pcd/dataset.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pcd/rng.hpp"

namespace pcd {

std::size_t Dataset::labeled_outlier_count() const {
    return std::accumulate(labels.begin(), labels.end(), std::size_t{0});
}

void Dataset::validate() const {
    if (n < 1 || m < 1) throw std::invalid_argument("dataset must have n >= 1 and m >= 1");
    if (values.size() != n * m) {
        throw std::invalid_argument("dataset value buffer does not match n*m");
    }
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
        if (!std::isfinite(values[idx])) {
            throw std::invalid_argument("dataset contains a non-finite value at row " +
                                        std::to_string(idx / m) + ", column " +
                                        std::to_string(idx % m));
        }
    }
    if (!labels.empty() && labels.size() != n) {
        throw std::invalid_argument("label count does not match point count");
    }
}

void GenSpec::validate() const {
    if (dims < 1) throw std::invalid_argument("dims must be >= 1");
    if (points < 1) throw std::invalid_argument("points must be >= 1");
    if (cluster_count < 1) throw std::invalid_argument("cluster_count must be >= 1");
    if (outlier_count >= points) {
        throw std::invalid_argument("outlier_count must be smaller than points");
    }
    if (mean_range.lo > mean_range.hi) throw std::invalid_argument("mean_range is empty");
    if (outlier_range.lo > outlier_range.hi) throw std::invalid_argument("outlier_range is empty");
    if (!(sd_range.lo > 0.0) || sd_range.lo > sd_range.hi) {
        throw std::invalid_argument("sd_range must be positive and non-empty");
    }
}

Dataset generate_highdim(const GenSpec& spec) {
    spec.validate();

    const std::size_t n = spec.points;
    const std::size_t m = spec.dims;
    const std::size_t n_normal = n - spec.outlier_count;

    Rng rng(spec.seed);

    // Component parameters, fixed per (component, dimension) pair.
    std::vector<double> comp_mean(spec.cluster_count * m);
    std::vector<double> comp_sd(spec.cluster_count * m);
    for (std::size_t c = 0; c < spec.cluster_count; ++c) {
        for (std::size_t d = 0; d < m; ++d) {
            comp_mean[c * m + d] = rng.uniform(spec.mean_range.lo, spec.mean_range.hi);
            comp_sd[c * m + d] = rng.uniform(spec.sd_range.lo, spec.sd_range.hi);
        }
    }

    // Equiprobable component assignment per normal point.
    std::vector<std::size_t> component(n_normal);
    for (std::size_t j = 0; j < n_normal; ++j) {
        component[j] = rng.uniform_index(spec.cluster_count);
    }

    Dataset ds;
    ds.n = n;
    ds.m = m;
    ds.values.resize(n * m);
    ds.labels.assign(n, 0);

    for (std::size_t j = 0; j < n_normal; ++j) {
        const double* mean = &comp_mean[component[j] * m];
        const double* sd = &comp_sd[component[j] * m];
        double* row = &ds.values[j * m];
        for (std::size_t d = 0; d < m; ++d) {
            row[d] = rng.normal(mean[d], sd[d]);
        }
    }
    for (std::size_t j = n_normal; j < n; ++j) {
        double* row = &ds.values[j * m];
        for (std::size_t d = 0; d < m; ++d) {
            row[d] = rng.uniform(spec.outlier_range.lo, spec.outlier_range.hi);
        }
        ds.labels[j] = 1;
    }
    return ds;
}

Dataset generate_2d(std::uint64_t seed) {
    constexpr std::size_t kPerCluster = 20;
    constexpr std::size_t kOutliers = 3;

    // Two of the outliers sit near opposite corners of the gap, each
    // hugging one cluster's range in one dimension, so they stay hidden in
    // every single-dimension view and only the projection step exposes
    // them. The third sits at the gap center and is sparse in both
    // dimensions on its own.
    constexpr double kOutlierX[kOutliers] = {10.6, 15.4, 13.0};
    constexpr double kOutlierY[kOutliers] = {15.4, 10.6, 13.0};
    constexpr double kJitter = 0.35;

    Rng rng(seed);
    Dataset ds;
    ds.n = 2 * kPerCluster + kOutliers;
    ds.m = 2;
    ds.values.resize(ds.n * ds.m);
    ds.labels.assign(ds.n, 0);

    // Draw order: upper cluster, lower cluster, outliers. Rows keep the
    // layout lower cluster, upper cluster, outliers.
    for (std::size_t j = 0; j < kPerCluster; ++j) {
        ds.at(kPerCluster + j, 0) = rng.uniform(16.0, 21.0);
        ds.at(kPerCluster + j, 1) = rng.uniform(16.0, 21.0);
    }
    for (std::size_t j = 0; j < kPerCluster; ++j) {
        ds.at(j, 0) = rng.uniform(5.0, 10.0);
        ds.at(j, 1) = rng.uniform(5.0, 10.0);
    }
    for (std::size_t i = 0; i < kOutliers; ++i) {
        const std::size_t row = 2 * kPerCluster + i;
        ds.at(row, 0) = kOutlierX[i] + rng.uniform(-kJitter, kJitter);
        ds.at(row, 1) = kOutlierY[i] + rng.uniform(-kJitter, kJitter);
        ds.labels[row] = 1;
    }
    return ds;
}

}  // namespace pcd
