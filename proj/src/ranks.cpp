#include "concordia/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace concordia {

Sample::Sample(std::vector<double> x1, std::vector<double> x2) : rows{std::move(x1), std::move(x2)} {
    if (rows[0].size() != rows[1].size()) throw std::invalid_argument("sample rows differ in length");
    if (rows[0].size() < 2) throw std::invalid_argument("sample size must be >= 2");
    for (const auto& row : rows)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("sample contains a non-finite value");
}

std::vector<double> order_transform(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    return x;
}

std::vector<int> rank_transform(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    // Stable sort of indices by value: equal values keep index order, which
    // is exactly the minimal-index tie rule.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return x[a] < x[b]; });
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[idx[i]] = i + 1;
    return rank;
}

RelativeRankMatrix::RelativeRankMatrix(std::vector<int> r1, std::vector<int> r2)
    : n(static_cast<int>(r1.size())), ranks{std::move(r1), std::move(r2)} {
    if (ranks[0].size() != ranks[1].size())
        throw std::invalid_argument("rank rows differ in length");
    if (n < 1) throw std::invalid_argument("rank matrix must have n >= 1");
    for (const auto& row : ranks) {
        std::vector<bool> seen(n, false);
        for (int r : row) {
            if (r < 1 || r > n || seen[r - 1])
                throw std::invalid_argument("rank row is not a permutation of 1..n");
            seen[r - 1] = true;
        }
    }
}

RelativeRankMatrix relative_ranks(const Sample& s) {
    return RelativeRankMatrix(rank_transform(s.rows[0]), rank_transform(s.rows[1]));
}

}  // namespace concordia
