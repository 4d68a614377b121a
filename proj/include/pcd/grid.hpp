#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcd/dataset.hpp"

namespace pcd {

struct GridConfig {
    int cn = 0;                    // cells per dimension, identical in all dims
    std::vector<Interval> ranges;  // per-dimension [min, max] used for binning
};

// Equal-width cell decomposition of every dimension plus the point<->cell
// index. Cell ids live in [0, cn); a dimension's range is its data min/max
// and the max value clamps into the last cell. Immutable after build.
struct GridIndex {
    std::size_t n = 0;
    std::size_t m = 0;
    GridConfig config;

    std::vector<std::int32_t> cell_of;     // m * n, cell id of point j in dim i
    std::vector<std::int32_t> counts;      // m * cn, occupancy per cell
    std::vector<double> avg_density;       // per dim: n / #non-empty cells
    std::vector<std::int32_t> nonempty;    // per dim: #non-empty cells

    // Points grouped by cell (CSR): members of (dim, cell) are
    // order[cell_begin[dim*(cn+1)+cell] .. cell_begin[dim*(cn+1)+cell+1]),
    // in ascending point id.
    std::vector<std::int32_t> order;       // m * n
    std::vector<std::int32_t> cell_begin;  // m * (cn + 1)

    int cn() const { return config.cn; }

    std::span<const std::int32_t> cells(std::size_t dim) const {
        return {cell_of.data() + dim * n, n};
    }
    std::span<const std::int32_t> cell_counts(std::size_t dim) const {
        return {counts.data() + dim * static_cast<std::size_t>(config.cn),
                static_cast<std::size_t>(config.cn)};
    }
    std::span<const std::int32_t> members(std::size_t dim, std::int32_t cell) const {
        const std::size_t base = dim * static_cast<std::size_t>(config.cn + 1);
        const auto a = cell_begin[base + static_cast<std::size_t>(cell)];
        const auto b = cell_begin[base + static_cast<std::size_t>(cell) + 1];
        return {order.data() + dim * n + a, static_cast<std::size_t>(b - a)};
    }
};

// Bins every dimension into cn equal-width cells over its own data range.
// A zero-width dimension (all values equal) puts every point in cell 0.
// Dimensions are independent, so the build parallelizes across them;
// results are identical at any thread count.
GridIndex build_grid(const Dataset& ds, int cn, int threads = 1);

// ceil(sqrt(n)) — the usual starting point for the cell count; callers may
// override.
int default_cn(std::size_t n);

}  // namespace pcd
