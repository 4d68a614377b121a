#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "pcd/pcd.hpp"
#include "pcd/rng.hpp"
#include "reference.hpp"

using namespace pcd;

namespace {

Dataset random_dataset(std::size_t n, std::size_t m, std::uint64_t seed, double lo = 0.0,
                       double hi = 10.0) {
    Dataset ds;
    ds.n = n;
    ds.m = m;
    ds.values.resize(n * m);
    Rng rng(seed);
    for (auto& v : ds.values) v = rng.uniform(lo, hi);
    return ds;
}

// Ten points in five dimensions, arranged so that the middle cell of dim 1
// holds five points whose images in dim 4 scatter as {one cell} + {a
// two-cell cluster}: occupancies 1, 3, 1. Cell c is hit by coordinate
// c + 0.5 with every dimension spanning cells 0..4.
Dataset worked_example() {
    const int dim1[10] = {2, 2, 2, 2, 2, 0, 0, 1, 3, 4};
    const int dim4[10] = {1, 3, 3, 3, 4, 0, 0, 1, 2, 3};
    Dataset ds;
    ds.n = 10;
    ds.m = 5;
    ds.values.resize(50);
    for (std::size_t j = 0; j < 10; ++j) {
        ds.at(j, 0) = static_cast<double>(j % 5) + 0.5;
        ds.at(j, 1) = static_cast<double>(dim1[j]) + 0.5;
        ds.at(j, 2) = static_cast<double>((j + 2) % 5) + 0.5;
        ds.at(j, 3) = static_cast<double>((j + 3) % 5) + 0.5;
        ds.at(j, 4) = static_cast<double>(dim4[j]) + 0.5;
    }
    return ds;
}

// Four stacks of three identical points, separated in every dimension:
// every occupied cell has the same occupancy and projections never split
// a stack.
Dataset calibration_dataset(std::size_t m = 3) {
    Dataset ds;
    ds.n = 12;
    ds.m = m;
    ds.values.resize(ds.n * m);
    for (std::size_t j = 0; j < ds.n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            ds.at(j, i) = static_cast<double>(j / 3);
        }
    }
    return ds;
}

}  // namespace

TEST_CASE("full schedule enumerates every ordered pair once") {
    const auto pairs = ProjectionSchedule::full().pairs(4);
    CHECK(pairs.size() == 12);
    std::set<std::pair<int, int>> seen;
    for (const auto& p : pairs) {
        CHECK(p.src != p.dst);
        seen.insert({p.src, p.dst});
    }
    CHECK(seen.size() == 12);
    CHECK(ProjectionSchedule::full().pair_count(1) == 0);
    CHECK(ProjectionSchedule::full().pairs(1).empty());
}

TEST_CASE("sampled schedule walks adjacent pairs of fresh permutations") {
    const auto schedule = ProjectionSchedule::sampled(3, 99);
    const auto pairs = schedule.pairs(5);
    REQUIRE(pairs.size() == 15);
    for (int round = 0; round < 3; ++round) {
        std::set<int> sources, targets;
        for (int t = 0; t < 5; ++t) {
            const auto& p = pairs[static_cast<std::size_t>(round * 5 + t)];
            CHECK(p.src != p.dst);
            sources.insert(p.src);
            targets.insert(p.dst);
        }
        // Each dimension projects exactly once per round (wrap included)
        // and is targeted exactly once.
        CHECK(sources.size() == 5);
        CHECK(targets.size() == 5);
        // Consecutive pairs chain through the permutation.
        for (int t = 0; t + 1 < 5; ++t) {
            CHECK(pairs[static_cast<std::size_t>(round * 5 + t)].dst ==
                  pairs[static_cast<std::size_t>(round * 5 + t + 1)].src);
        }
        CHECK(pairs[static_cast<std::size_t>(round * 5 + 4)].dst ==
              pairs[static_cast<std::size_t>(round * 5)].src);
    }
    CHECK(schedule.pairs(5) == schedule.pairs(5));
    CHECK(ProjectionSchedule::sampled(3, 100).pairs(5) != pairs);
}

TEST_CASE("first projection reproduces the worked density ratio") {
    const Dataset ds = worked_example();
    const GridIndex g = build_grid(ds, 5);
    REQUIRE(g.cell_counts(1)[2] == 5);
    const auto pt_val = first_projection(g);
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(pt_val[1 * ds.n + j] == doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("one point per occupied cell means unit weight") {
    Dataset ds;
    ds.n = 6;
    ds.m = 1;
    ds.values = {0.5, 1.5, 2.5, 3.5, 4.5, 5.5};
    const GridIndex g = build_grid(ds, 6);
    const auto pt_val = first_projection(g);
    for (std::size_t j = 0; j < 6; ++j) CHECK(pt_val[j] == doctest::Approx(1.0));
}

TEST_CASE("first projection matches direct recomputation") {
    const Dataset ds = random_dataset(50, 4, 11);
    const GridIndex g = build_grid(ds, 7);
    const auto pt_val = first_projection(g);
    const auto expected = reference::naive_first_projection(ds, 7);
    for (std::size_t i = 0; i < ds.m; ++i) {
        for (std::size_t j = 0; j < ds.n; ++j) {
            CHECK(pt_val[i * ds.n + j] == doctest::Approx(expected[i][j]).epsilon(1e-12));
        }
    }
    // Mean occupied-cell weight is 1 per dimension by construction.
    for (std::size_t i = 0; i < ds.m; ++i) {
        double sum = 0.0;
        int occupied = 0;
        for (int c = 0; c < 7; ++c) {
            if (g.cell_counts(i)[c] > 0) {
                sum += g.cell_counts(i)[c] / g.avg_density[i];
                ++occupied;
            }
        }
        CHECK(sum / occupied == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("project_cell reproduces the worked cluster ratios") {
    const Dataset ds = worked_example();
    const GridIndex g = build_grid(ds, 5);
    const auto vals = project_cell(g, 1, 2, 4);
    REQUIRE(vals.size() == 5);
    CHECK(vals[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(vals[2] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(vals[3] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(vals[4] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("a cell that stays together projects to all ones") {
    const Dataset ds = calibration_dataset();
    const GridIndex g = build_grid(ds, 4);
    for (std::int32_t cell = 0; cell < 4; ++cell) {
        const auto vals = project_cell(g, 0, cell, 1);
        REQUIRE(vals.size() == 3);
        for (const double v : vals) CHECK(v == 1.0);
    }
}

TEST_CASE("project_cell matches the brute-force cluster scan") {
    for (const std::uint64_t seed : {4ULL, 5ULL, 6ULL}) {
        const Dataset ds = random_dataset(30, 3, seed);
        const GridIndex g = build_grid(ds, 6);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t k = 0; k < 3; ++k) {
                if (i == k) continue;
                for (std::int32_t cell = 0; cell < 6; ++cell) {
                    if (g.cell_counts(i)[cell] == 0) continue;
                    const auto vals = project_cell(g, i, cell, k);
                    const auto expected = reference::naive_project(ds, 6, i, k, cell);
                    REQUIRE(vals.size() == expected.size());
                    for (std::size_t idx = 0; idx < vals.size(); ++idx) {
                        CHECK(vals[idx] == doctest::Approx(expected[idx]).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("projected weights average to one over the occupied target cells") {
    const Dataset ds = random_dataset(60, 4, 21);
    const GridIndex g = build_grid(ds, 8);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::int32_t cell = 0; cell < 8; ++cell) {
            if (g.cell_counts(i)[cell] == 0) continue;
            const std::size_t k = (i + 1) % 4;
            const auto vals = project_cell(g, i, cell, k);
            const auto members = g.members(i, cell);
            std::map<std::int32_t, double> per_cell;
            for (std::size_t idx = 0; idx < members.size(); ++idx) {
                per_cell[g.cells(k)[members[idx]]] = vals[idx];
            }
            double sum = 0.0;
            for (const auto& [c, v] : per_cell) sum += v;
            CHECK(sum / per_cell.size() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("project_cell validates its contract") {
    const Dataset ds = worked_example();
    const GridIndex g = build_grid(ds, 5);
    CHECK_THROWS_AS(project_cell(g, 1, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(project_cell(g, 0, 7, 1), std::invalid_argument);
    // Build an empty cell: dim 1 has none here, so make one.
    Dataset sparse = ds;
    const GridIndex g2 = build_grid(sparse, 10);  // finer grid leaves gaps
    bool found_empty = false;
    for (std::int32_t c = 0; c < 10 && !found_empty; ++c) {
        if (g2.cell_counts(1)[c] == 0) {
            CHECK_THROWS_AS(project_cell(g2, 1, c, 0), std::invalid_argument);
            found_empty = true;
        }
    }
    CHECK(found_empty);
}

TEST_CASE("second projection accumulates exactly the scheduled pair count") {
    const Dataset two = random_dataset(24, 2, 31);
    const GridIndex g2 = build_grid(two, 5);
    std::vector<double> sumsq;
    std::vector<std::int64_t> count;
    second_projection(g2, ProjectionSchedule::full(), sumsq, count);
    for (const auto c : count) CHECK(c == 2);

    const Dataset five = random_dataset(40, 5, 32);
    const GridIndex g5 = build_grid(five, 6);
    second_projection(g5, ProjectionSchedule::sampled(5, 1), sumsq, count);
    for (const auto c : count) CHECK(c == 25);
}

TEST_CASE("second projection equals the per-pair enumeration") {
    const Dataset ds = random_dataset(40, 4, 33);
    const GridIndex g = build_grid(ds, 7);

    std::vector<double> expected(ds.n, 0.0);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            if (i == k) continue;
            for (std::int32_t cell = 0; cell < 7; ++cell) {
                if (g.cell_counts(i)[cell] == 0) continue;
                const auto vals = project_cell(g, i, cell, k);
                const auto members = g.members(i, cell);
                for (std::size_t idx = 0; idx < members.size(); ++idx) {
                    expected[static_cast<std::size_t>(members[idx])] += vals[idx] * vals[idx];
                }
            }
        }
    }

    std::vector<double> sumsq;
    std::vector<std::int64_t> count;
    second_projection(g, ProjectionSchedule::full(), sumsq, count);
    for (std::size_t j = 0; j < ds.n; ++j) {
        CHECK(sumsq[j] == doctest::Approx(expected[j]).epsilon(1e-12));
        CHECK(count[j] == 12);
    }
}

TEST_CASE("unit weights everywhere give a score of exactly one") {
    const std::size_t n = 9;
    for (const std::size_t m : {2ULL, 3ULL, 7ULL}) {
        const auto schedule = ProjectionSchedule::full();
        std::vector<double> pt_val(m * n, 1.0);
        std::vector<double> sumsq(n, static_cast<double>(schedule.pair_count(m)));
        std::vector<std::int64_t> count(n, static_cast<std::int64_t>(schedule.pair_count(m)));
        const auto si = si_scores(pt_val, sumsq, count, n, m, schedule);
        for (const double s : si) CHECK(s == 1.0);
    }
}

TEST_CASE("uniformly small weights blow the score up analytically") {
    const std::size_t n = 4, m = 5;
    const auto schedule = ProjectionSchedule::full();
    std::vector<double> pt_val(m * n, 0.1);
    std::vector<double> sumsq(n, 0.01 * static_cast<double>(schedule.pair_count(m)));
    std::vector<std::int64_t> count(n, static_cast<std::int64_t>(schedule.pair_count(m)));
    const auto si = si_scores(pt_val, sumsq, count, n, m, schedule);
    for (const double s : si) CHECK(s == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("single-dimension datasets score without a second projection") {
    Dataset ds;
    ds.n = 4;
    ds.m = 1;
    ds.values = {0.0, 1.0, 2.0, 3.0};
    const auto table = score(ds, 4, ProjectionSchedule::full());
    for (const auto c : table.ptp_count) CHECK(c == 0);
    for (const double s : table.si) CHECK(s == doctest::Approx(2.0));
}

TEST_CASE("full-mode scores match the naive transcription") {
    for (const std::uint64_t seed : {41ULL, 42ULL, 43ULL}) {
        const Dataset ds = random_dataset(35 + seed, 5, seed);
        const int cn = 6;
        const auto table = score(ds, cn, ProjectionSchedule::full());
        const auto expected = reference::naive_full_si(ds, cn);
        for (std::size_t j = 0; j < ds.n; ++j) {
            CHECK(table.si[j] ==
                  doctest::Approx(expected[j]).epsilon(1e-9));
        }
    }
}

TEST_CASE("full mode charges every point m squared weights") {
    const Dataset ds = random_dataset(30, 6, 51);
    const auto table = score(ds, 6, ProjectionSchedule::full());
    for (std::size_t j = 0; j < ds.n; ++j) {
        CHECK(static_cast<std::size_t>(table.ptp_count[j]) + ds.m == ds.m * ds.m);
    }
}

TEST_CASE("scores are invariant under per-dimension affine maps") {
    const Dataset ds = random_dataset(80, 5, 61);
    const auto base = score(ds, 9, ProjectionSchedule::full());

    Dataset mapped = ds;
    for (std::size_t j = 0; j < ds.n; ++j) {
        for (std::size_t i = 0; i < ds.m; ++i) {
            mapped.at(j, i) = (2.0 + static_cast<double>(i)) * ds.at(j, i) - 7.5;
        }
    }
    const auto moved = score(mapped, 9, ProjectionSchedule::full());
    CHECK(base.si == moved.si);
    CHECK(base.ptp_sumsq == moved.ptp_sumsq);
}

TEST_CASE("permuting points permutes the scores bit-for-bit") {
    const Dataset ds = random_dataset(50, 4, 71);
    const auto base = score(ds, 7, ProjectionSchedule::full());

    std::vector<std::size_t> perm(ds.n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(5);
    rng.shuffle(perm);

    Dataset shuffled;
    shuffled.n = ds.n;
    shuffled.m = ds.m;
    shuffled.values.resize(ds.values.size());
    for (std::size_t j = 0; j < ds.n; ++j) {
        for (std::size_t i = 0; i < ds.m; ++i) {
            shuffled.at(j, i) = ds.at(perm[j], i);
        }
    }
    const auto moved = score(shuffled, 7, ProjectionSchedule::full());
    for (std::size_t j = 0; j < ds.n; ++j) {
        CHECK(moved.si[j] == base.si[perm[j]]);
    }
}

TEST_CASE("permuting dimensions leaves full-mode scores unchanged") {
    const Dataset ds = random_dataset(45, 5, 81);
    const auto base = score(ds, 6, ProjectionSchedule::full());

    const std::size_t perm[5] = {3, 0, 4, 1, 2};
    Dataset swapped;
    swapped.n = ds.n;
    swapped.m = ds.m;
    swapped.values.resize(ds.values.size());
    for (std::size_t j = 0; j < ds.n; ++j) {
        for (std::size_t i = 0; i < ds.m; ++i) {
            swapped.at(j, i) = ds.at(j, perm[i]);
        }
    }
    const auto moved = score(swapped, 6, ProjectionSchedule::full());
    for (std::size_t j = 0; j < ds.n; ++j) {
        CHECK(moved.si[j] == doctest::Approx(base.si[j]).epsilon(1e-12));
    }
}

TEST_CASE("scoring is bit-identical at any thread count") {
    const Dataset ds = random_dataset(120, 8, 91);
    const auto t1 = score(ds, 11, ProjectionSchedule::full(), 1);
    for (const int threads : {2, 3, 8}) {
        const auto tn = score(ds, 11, ProjectionSchedule::full(), threads);
        CHECK(tn.si == t1.si);
        CHECK(tn.ptp_sumsq == t1.ptp_sumsq);
        CHECK(tn.pt_val == t1.pt_val);
    }
    const auto s1 = score(ds, 11, ProjectionSchedule::sampled(4, 17), 1);
    const auto s5 = score(ds, 11, ProjectionSchedule::sampled(4, 17), 5);
    CHECK(s1.si == s5.si);
}

TEST_CASE("detect ranks all points and honors k") {
    const Dataset ds = random_dataset(25, 3, 101);
    const auto result = detect(ds, 5, ProjectionSchedule::full(), 25);
    CHECK(result.ranking.size() == 25);
    std::set<std::int32_t> ids;
    for (const auto& [id, score] : result.ranking) ids.insert(id);
    CHECK(ids.size() == 25);
    for (std::size_t r = 1; r < result.ranking.size(); ++r) {
        CHECK(result.ranking[r - 1].second >= result.ranking[r].second);
    }
    CHECK(result.top_ids().size() == 25);

    CHECK_THROWS_AS(detect(ds, 5, ProjectionSchedule::full(), 0), std::invalid_argument);
    CHECK_THROWS_AS(detect(ds, 5, ProjectionSchedule::full(), 26), std::invalid_argument);
}

TEST_CASE("fully symmetric data ranks by the id tie-break") {
    const Dataset ds = calibration_dataset();
    const auto result = detect(ds, 4, ProjectionSchedule::full(), 3);
    for (std::size_t j = 0; j < ds.n; ++j) {
        CHECK(result.ranking[j].first == static_cast<std::int32_t>(j));
        CHECK(result.ranking[j].second == 1.0);
    }
}

TEST_CASE("the two-cluster plane instance is solved at top-3") {
    int perfect = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dataset ds = generate_2d(seed);
        const auto result = detect(ds, 7, ProjectionSchedule::full(), 3);
        const auto ids = result.top_ids();
        const std::set<std::int32_t> det(ids.begin(), ids.end());
        if (det == std::set<std::int32_t>{40, 41, 42}) ++perfect;
    }
    CHECK(perfect >= 9);
}
