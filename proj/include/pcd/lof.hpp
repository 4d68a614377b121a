#pragma once

#include <vector>

#include "pcd/dataset.hpp"

namespace pcd {

struct LofConfig {
    int min_pts = 10;  // neighborhood size; metric is Euclidean

    void validate(std::size_t n) const;  // throws std::invalid_argument
};

// Local Outlier Factor with exact O(n^2 m) distances: k-distance
// neighborhoods (ties included), reachability distances, local
// reachability density, and the mean lrd ratio. Scores sit near 1 inside
// uniform regions. A point whose neighborhood collapses to distance zero
// (more than min_pts duplicates) gets a large-sentinel lrd, which makes
// the ratio exactly 1 within the duplicate set.
std::vector<double> lof_scores(const Dataset& ds, const LofConfig& cfg, int threads = 1);

}  // namespace pcd
