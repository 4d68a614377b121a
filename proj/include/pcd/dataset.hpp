#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pcd {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

// An n x m table of finite reals, plus optional 0/1 outlier labels.
// Immutable by convention once built; safe to share read-only.
struct Dataset {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> values;         // row-major, n * m
    std::vector<std::uint8_t> labels;   // empty, or one flag per point

    double at(std::size_t row, std::size_t col) const { return values[row * m + col]; }
    double& at(std::size_t row, std::size_t col) { return values[row * m + col]; }

    bool has_labels() const { return !labels.empty(); }
    std::size_t labeled_outlier_count() const;

    // Throws std::invalid_argument if the shape/label/finiteness invariants
    // do not hold.
    void validate() const;
};

// Parameters for the synthetic high-dimensional benchmark: a mixture of
// equally weighted per-dimension Gaussian components with planted
// uniform-random outliers whose coordinates stay inside the normal range.
// The default component spread is drawn as sd in [sqrt(10), sqrt(20)],
// i.e. component variances in [10, 20]; spreads that wide in sd terms
// would wash out the per-dimension cluster structure entirely.
struct GenSpec {
    std::size_t dims = 0;
    std::size_t points = 0;
    std::size_t cluster_count = 5;
    std::size_t outlier_count = 10;
    Interval mean_range{20.0, 80.0};
    Interval sd_range{3.1622776601683795, 4.47213595499958};
    Interval outlier_range{20.0, 80.0};
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

// Deterministic generator; identical spec (including seed) gives a
// bit-identical dataset. Draw order: per (component, dimension) the mean
// then the sd; then one component index per normal point; then normal
// coordinates point-major; then outlier coordinates point-major. Normal
// points occupy rows [0, n - outlier_count), outliers the tail rows.
Dataset generate_highdim(const GenSpec& spec);

// The 43-point two-dimensional instance: 20 points uniform in [5,10]^2,
// 20 uniform in [16,21]^2, and 3 outliers in the gap between the clusters
// (the last 3 rows, labeled 1). Two outliers sit near opposite corners of
// the gap so each blends into a cluster's range in one dimension; the
// third sits at the gap center. All outlier coordinates stay strictly
// inside (10, 16).
Dataset generate_2d(std::uint64_t seed);

}  // namespace pcd
