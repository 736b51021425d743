#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "concordia/ranks.hpp"
#include "concordia/rng.hpp"

using namespace concordia;

namespace {

// The min-over-subsets / max characterization of the k-th order statistic,
// evaluated literally over all index subsets.
std::vector<double> order_transform_subset_oracle(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> out(n);
    for (int k = 1; k <= n; ++k) {
        double best = 1e300;
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != k) continue;
            double mx = -1e300;
            for (int j = 0; j < n; ++j)
                if (mask & (1u << j)) mx = std::max(mx, x[j]);
            best = std::min(best, mx);
        }
        out[k - 1] = best;
    }
    return out;
}

// The three-step rank procedure, written verbatim: find the minimal unused
// index attaining the i-th order statistic and give it rank i.
std::vector<int> rank_transform_procedure_oracle(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> t = order_transform(x);
    std::vector<int> rank(n, 0);
    std::vector<bool> used(n, false);
    for (int i = 1; i <= n; ++i) {
        int k = -1;
        for (int j = 0; j < n; ++j) {
            if (!used[j] && x[j] == t[i - 1]) {
                k = j;
                break;
            }
        }
        REQUIRE(k >= 0);
        used[k] = true;
        rank[k] = i;
    }
    return rank;
}

}  // namespace

TEST_CASE("order transform sorts") {
    CHECK(order_transform({3, 1, 2}) == std::vector<double>{1, 2, 3});
    CHECK(order_transform({2, 2, 1}) == std::vector<double>{1, 2, 2});
}

TEST_CASE("order transform equals the subset oracle exhaustively") {
    // all vectors of length <= 6 with entries in {1,2,3}
    for (int n = 1; n <= 6; ++n) {
        int total = 1;
        for (int i = 0; i < n; ++i) total *= 3;
        for (int code = 0; code < total; ++code) {
            std::vector<double> x(n);
            int c = code;
            for (int i = 0; i < n; ++i) {
                x[i] = 1 + c % 3;
                c /= 3;
            }
            CHECK(order_transform(x) == order_transform_subset_oracle(x));
        }
    }
}

TEST_CASE("rank transform basics") {
    CHECK(rank_transform({10, 30, 20}) == std::vector<int>{1, 3, 2});
    // minimal-index tie break: value 1 gets rank 1, the first 5 gets rank 2
    CHECK(rank_transform({5, 5, 1}) == std::vector<int>{2, 3, 1});
}

TEST_CASE("rank transform equals the verbatim procedure, including ties") {
    Rng rng(137);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 2 + static_cast<int>(rng.unif01() * 11);
        std::vector<double> x(n);
        for (double& v : x) v = std::floor(rng.unif01() * 5);  // heavy ties
        CHECK(rank_transform(x) == rank_transform_procedure_oracle(x));
        CHECK(rank_transform(x) == rank_transform(x));  // deterministic under ties
    }
}

TEST_CASE("ranks are invariant under strictly increasing transformations") {
    Rng rng(139);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 2 + static_cast<int>(rng.unif01() * 20);
        std::vector<double> x(n);
        for (double& v : x) v = rng.unif01() * 6 - 3;
        auto base = rank_transform(x);
        std::vector<double> ex(n), cube(n), aff(n);
        for (int i = 0; i < n; ++i) {
            ex[i] = std::exp(x[i]);
            cube[i] = x[i] * x[i] * x[i];
            aff[i] = 2.5 * x[i] + 7;
        }
        CHECK(rank_transform(ex) == base);
        CHECK(rank_transform(cube) == base);
        CHECK(rank_transform(aff) == base);
    }
}

TEST_CASE("rank sums are the exact triangular numbers") {
    Rng rng(149);
    for (int n : {2, 3, 10, 57}) {
        std::vector<double> x(n);
        for (double& v : x) v = std::floor(rng.unif01() * 4);
        auto r = rank_transform(x);
        long long sum = 0;
        for (int v : r) sum += v;
        CHECK(sum == static_cast<long long>(n) * (n + 1) / 2);
    }
}

TEST_CASE("relative ranks of hand-traced samples") {
    Sample s({0.1, 0.9, 0.5}, {2, 1, 3});
    RelativeRankMatrix u = relative_ranks(s);
    CHECK(u.ranks[0] == std::vector<int>{1, 3, 2});
    CHECK(u.ranks[1] == std::vector<int>{2, 1, 3});
    CHECK(u.u(0, 0) == doctest::Approx(0.25));
    CHECK(u.u(0, 1) == doctest::Approx(0.75));
    CHECK(u.u(1, 2) == doctest::Approx(0.75));
}

TEST_CASE("comonotone and countermonotone samples have mirrored ranks") {
    Rng rng(151);
    int n = 9;
    std::vector<double> x(n);
    for (double& v : x) v = rng.unif01();
    std::vector<double> neg(n);
    for (int i = 0; i < n; ++i) neg[i] = -x[i];

    RelativeRankMatrix co = relative_ranks(Sample(x, x));
    for (int k = 0; k < n; ++k) CHECK(co.ranks[0][k] == co.ranks[1][k]);

    RelativeRankMatrix counter = relative_ranks(Sample(x, neg));
    for (int k = 0; k < n; ++k) CHECK(counter.ranks[1][k] == n + 1 - counter.ranks[0][k]);
}

TEST_CASE("relative rank rows sum to n/2 exactly in integers") {
    Rng rng(157);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng.unif01() * 30);
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = rng.unif01();
            b[i] = rng.unif01();
        }
        RelativeRankMatrix u = relative_ranks(Sample(a, b));
        for (int row = 0; row < 2; ++row) {
            long long sum = 0;
            for (int k = 0; k < n; ++k) sum += u.ranks[row][k];
            // sum of U-row is n/2  <=>  sum of ranks is n(n+1)/2
            CHECK(2 * sum == static_cast<long long>(n) * (n + 1));
        }
    }
}

TEST_CASE("sample and rank-matrix validation") {
    CHECK_THROWS_AS(Sample({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Sample({1.0, 2.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS(Sample({1.0, std::nan("")}, {2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(RelativeRankMatrix({1, 1}, {1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(RelativeRankMatrix({1, 3}, {1, 2}), std::invalid_argument);
}
