#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace pcd::reference {

std::vector<std::vector<int>> naive_cells(const Dataset& ds, int cn) {
    std::vector<std::vector<int>> cells(ds.m, std::vector<int>(ds.n, 0));
    for (std::size_t i = 0; i < ds.m; ++i) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ds.n; ++j) {
            lo = std::min(lo, ds.at(j, i));
            hi = std::max(hi, ds.at(j, i));
        }
        const double width = (hi - lo) / cn;
        for (std::size_t j = 0; j < ds.n; ++j) {
            int c = 0;
            if (width > 0.0) {
                c = static_cast<int>(std::floor((ds.at(j, i) - lo) / width));
                if (c > cn - 1) c = cn - 1;
                if (c < 0) c = 0;
            }
            cells[i][j] = c;
        }
    }
    return cells;
}

std::vector<std::vector<int>> naive_counts(const Dataset& ds, int cn) {
    const auto cells = naive_cells(ds, cn);
    std::vector<std::vector<int>> counts(ds.m, std::vector<int>(cn, 0));
    for (std::size_t i = 0; i < ds.m; ++i) {
        for (std::size_t j = 0; j < ds.n; ++j) {
            counts[i][cells[i][j]] += 1;
        }
    }
    return counts;
}

std::vector<std::vector<double>> naive_first_projection(const Dataset& ds, int cn) {
    const auto cells = naive_cells(ds, cn);
    const auto counts = naive_counts(ds, cn);
    std::vector<std::vector<double>> ptval(ds.m, std::vector<double>(ds.n, 0.0));
    for (std::size_t i = 0; i < ds.m; ++i) {
        int occupied = 0;
        for (int c = 0; c < cn; ++c) {
            if (counts[i][c] > 0) ++occupied;
        }
        const double avg = static_cast<double>(ds.n) / occupied;
        for (std::size_t j = 0; j < ds.n; ++j) {
            ptval[i][j] = counts[i][cells[i][j]] / avg;
        }
    }
    return ptval;
}

namespace {

// Weights for an explicit member set projected into dst_dim, given the
// already-binned cells. Cluster length is found by walking left and right
// from the member's cell while cells stay occupied.
std::vector<double> project_members_naive(const std::vector<int>& dst_cells_of_members, int cn) {
    const auto s = dst_cells_of_members.size();
    std::vector<int> occupancy(cn, 0);
    for (const int c : dst_cells_of_members) occupancy[c] += 1;

    auto cluster_len = [&](int c) {
        int a = c;
        while (a > 0 && occupancy[a - 1] > 0) --a;
        int b = c;
        while (b + 1 < cn && occupancy[b + 1] > 0) ++b;
        return b - a + 1;
    };

    std::set<int> distinct(dst_cells_of_members.begin(), dst_cells_of_members.end());
    double total = 0.0;
    for (const int c : distinct) {
        total += static_cast<double>(occupancy[c]) * cluster_len(c);
    }
    const double denom = total / static_cast<double>(distinct.size());

    std::vector<double> out(s);
    for (std::size_t idx = 0; idx < s; ++idx) {
        const int c = dst_cells_of_members[idx];
        out[idx] = static_cast<double>(occupancy[c]) * cluster_len(c) / denom;
    }
    return out;
}

}  // namespace

std::vector<double> naive_project(const Dataset& ds, int cn, std::size_t src_dim,
                                  std::size_t dst_dim, int src_cell) {
    const auto cells = naive_cells(ds, cn);
    std::vector<int> member_dst;
    for (std::size_t j = 0; j < ds.n; ++j) {
        if (cells[src_dim][j] == src_cell) member_dst.push_back(cells[dst_dim][j]);
    }
    return project_members_naive(member_dst, cn);
}

std::vector<double> naive_full_si(const Dataset& ds, int cn) {
    const auto cells = naive_cells(ds, cn);
    const auto ptval = naive_first_projection(ds, cn);
    const std::size_t n = ds.n;
    const std::size_t m = ds.m;

    std::vector<double> sumsq_second(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            if (i == k) continue;
            for (int cell = 0; cell < cn; ++cell) {
                std::vector<std::size_t> members;
                std::vector<int> member_dst;
                for (std::size_t j = 0; j < n; ++j) {
                    if (cells[i][j] == cell) {
                        members.push_back(j);
                        member_dst.push_back(cells[k][j]);
                    }
                }
                if (members.empty()) continue;
                const auto vals = project_members_naive(member_dst, cn);
                for (std::size_t idx = 0; idx < members.size(); ++idx) {
                    sumsq_second[members[idx]] += vals[idx] * vals[idx];
                }
            }
        }
    }

    std::vector<double> si(n);
    for (std::size_t j = 0; j < n; ++j) {
        double denom = 0.0;
        for (std::size_t i = 0; i < m; ++i) denom += ptval[i][j] * ptval[i][j];
        if (m >= 2) denom += sumsq_second[j] / static_cast<double>(m - 1);
        si[j] = 2.0 * static_cast<double>(m) / denom;
    }
    return si;
}

std::vector<double> naive_lof(const Dataset& ds, int min_pts) {
    const std::size_t n = ds.n;
    auto distance = [&](std::size_t a, std::size_t b) {
        double sq = 0.0;
        for (std::size_t d = 0; d < ds.m; ++d) {
            const double diff = ds.at(a, d) - ds.at(b, d);
            sq += diff * diff;
        }
        return std::sqrt(sq);
    };

    std::vector<double> kdist(n);
    std::vector<std::vector<std::size_t>> nbrs(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<double> ds_all;
        for (std::size_t b = 0; b < n; ++b) {
            if (b != a) ds_all.push_back(distance(a, b));
        }
        std::sort(ds_all.begin(), ds_all.end());
        kdist[a] = ds_all[static_cast<std::size_t>(min_pts) - 1];
        for (std::size_t b = 0; b < n; ++b) {
            if (b != a && distance(a, b) <= kdist[a]) nbrs[a].push_back(b);
        }
    }

    std::vector<double> lrd(n);
    for (std::size_t a = 0; a < n; ++a) {
        double sum = 0.0;
        for (const auto b : nbrs[a]) sum += std::max(kdist[b], distance(a, b));
        lrd[a] = sum > 0.0 ? static_cast<double>(nbrs[a].size()) / sum : 1e12;
    }

    std::vector<double> lof(n);
    for (std::size_t a = 0; a < n; ++a) {
        double sum = 0.0;
        for (const auto b : nbrs[a]) sum += lrd[b] / lrd[a];
        lof[a] = sum / static_cast<double>(nbrs[a].size());
    }
    return lof;
}

std::pair<double, double> naive_best_f(const std::vector<double>& scores,
                                       const std::vector<std::uint8_t>& labels) {
    std::set<double> thresholds(scores.begin(), scores.end());
    double best_f = -1.0;
    double best_t = 0.0;
    for (const double t : thresholds) {
        std::int64_t tp = 0, fp = 0, fn = 0;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            const bool pred = scores[j] >= t;
            if (pred && labels[j]) ++tp;
            if (pred && !labels[j]) ++fp;
            if (!pred && labels[j]) ++fn;
        }
        const double p = (tp + fp) > 0 ? double(tp) / double(tp + fp) : 0.0;
        const double r = (tp + fn) > 0 ? double(tp) / double(tp + fn) : 0.0;
        const double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        // Iterating thresholds in ascending order, so on ties the lower
        // threshold is kept by strict improvement.
        if (f > best_f) {
            best_f = f;
            best_t = t;
        }
    }
    return {best_t, best_f};
}

}  // namespace pcd::reference
