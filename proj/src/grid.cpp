#include "pcd/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pcd/parallel.hpp"

namespace pcd {

GridIndex build_grid(const Dataset& ds, int cn, int threads) {
    ds.validate();
    if (cn < 1) throw std::invalid_argument("cn must be >= 1");

    const std::size_t n = ds.n;
    const std::size_t m = ds.m;
    const auto ucn = static_cast<std::size_t>(cn);

    GridIndex g;
    g.n = n;
    g.m = m;
    g.config.cn = cn;
    g.config.ranges.resize(m);
    g.cell_of.resize(m * n);
    g.counts.assign(m * ucn, 0);
    g.avg_density.resize(m);
    g.nonempty.resize(m);
    g.order.resize(m * n);
    g.cell_begin.resize(m * (ucn + 1));

    parallel_for(0, m, threads, [&](std::size_t dim, int) {
        double lo = ds.at(0, dim);
        double hi = lo;
        for (std::size_t j = 1; j < n; ++j) {
            const double v = ds.at(j, dim);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        g.config.ranges[dim] = {lo, hi};

        std::int32_t* cell = &g.cell_of[dim * n];
        std::int32_t* count = &g.counts[dim * ucn];
        const double width = (hi - lo) / cn;
        if (width > 0.0) {
            for (std::size_t j = 0; j < n; ++j) {
                auto c = static_cast<std::int32_t>((ds.at(j, dim) - lo) / width);
                if (c >= cn) c = cn - 1;  // v == hi lands in the last cell
                if (c < 0) c = 0;
                cell[j] = c;
                ++count[c];
            }
        } else {
            for (std::size_t j = 0; j < n; ++j) cell[j] = 0;
            count[0] = static_cast<std::int32_t>(n);
        }

        std::int32_t occupied = 0;
        for (std::size_t c = 0; c < ucn; ++c) {
            if (count[c] > 0) ++occupied;
        }
        g.nonempty[dim] = occupied;
        g.avg_density[dim] = static_cast<double>(n) / occupied;

        // Counting sort by cell; ascending point id within a cell.
        std::int32_t* begin = &g.cell_begin[dim * (ucn + 1)];
        begin[0] = 0;
        for (std::size_t c = 0; c < ucn; ++c) begin[c + 1] = begin[c] + count[c];
        std::vector<std::int32_t> cursor(begin, begin + ucn);
        std::int32_t* order = &g.order[dim * n];
        for (std::size_t j = 0; j < n; ++j) {
            order[cursor[cell[j]]++] = static_cast<std::int32_t>(j);
        }
    });

    return g;
}

int default_cn(std::size_t n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    auto c = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    while (c * c < n) ++c;
    while (c > 1 && (c - 1) * (c - 1) >= n) --c;
    return static_cast<int>(c);
}

}  // namespace pcd
