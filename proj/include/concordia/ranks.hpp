#pragma once

#include <array>
#include <vector>

namespace concordia {

// A bivariate sample of size n: rows[i] holds coordinate i across the
// sample.  Entries must be finite, n >= 2.
struct Sample {
    Sample(std::vector<double> x1, std::vector<double> x2);

    int n() const { return static_cast<int>(rows[0].size()); }

    std::array<std::vector<double>, 2> rows;
};

// Coordinates sorted increasingly (the min-over-subsets/max characterization
// of order statistics collapses to a sort).
std::vector<double> order_transform(std::vector<double> x);

// Ranks 1..n with ties broken by minimal index: the smallest value gets rank
// 1 at its first occurrence, then the procedure repeats on the remaining
// indices.  Always a permutation of 1..n.
std::vector<int> rank_transform(const std::vector<double>& x);

// Relative ranks R/(n+1), kept as exact integers over n+1.  Each row is a
// permutation of {1/(n+1), ..., n/(n+1)}.
struct RelativeRankMatrix {
    RelativeRankMatrix(std::vector<int> r1, std::vector<int> r2);

    int n = 0;
    std::array<std::vector<int>, 2> ranks;

    double u(int row, int k) const {
        return static_cast<double>(ranks[row][k]) / (n + 1);
    }
};

RelativeRankMatrix relative_ranks(const Sample& s);

}  // namespace concordia
