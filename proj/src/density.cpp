#include "concordia/density.hpp"

#include <algorithm>
#include <cmath>

namespace concordia {

void ipf_normalize(std::vector<double>& mass, int m, double tol, int max_sweeps) {
    if (mass.size() != static_cast<size_t>(m) * m)
        throw std::invalid_argument("ipf_normalize: matrix size mismatch");
    const double want = 1.0 / m;
    auto at = [&](int i, int j) -> double& { return mass[static_cast<size_t>(i) * m + j]; };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (int i = 0; i < m; ++i) {
            double row = 0.0;
            for (int j = 0; j < m; ++j) row += at(i, j);
            if (row <= 0.0) throw DensityError("marginal normalization: empty row " + std::to_string(i));
            double s = want / row;
            for (int j = 0; j < m; ++j) at(i, j) *= s;
        }
        double dev = 0.0;
        for (int j = 0; j < m; ++j) {
            double col = 0.0;
            for (int i = 0; i < m; ++i) col += at(i, j);
            if (col <= 0.0) throw DensityError("marginal normalization: empty column " + std::to_string(j));
            double s = want / col;
            for (int i = 0; i < m; ++i) at(i, j) *= s;
            dev = std::max(dev, std::fabs(col - want));
        }
        // Columns are now exact; `dev` bounds how far the row sums moved.
        if (dev <= tol) {
            double row_dev = 0.0;
            for (int i = 0; i < m; ++i) {
                double row = 0.0;
                for (int j = 0; j < m; ++j) row += at(i, j);
                row_dev = std::max(row_dev, std::fabs(row - want));
            }
            if (row_dev <= tol) return;
        }
    }
    throw DensityError("marginal normalization did not converge within " +
                       std::to_string(max_sweeps) + " sweeps");
}

GridCopula copula_from_density(const DensityFn& f, double xlo, double xhi, double ylo, double yhi,
                               int m, int inner) {
    if (m < 1) throw std::invalid_argument("copula_from_density: resolution must be >= 1");
    if (inner < 1) throw std::invalid_argument("copula_from_density: inner resolution must be >= 1");
    if (!(xhi > xlo && yhi > ylo))
        throw std::invalid_argument("copula_from_density: degenerate rectangle");

    const int fine = m * inner;
    const double wx = (xhi - xlo) / fine;
    const double wy = (yhi - ylo) / fine;

    // Midpoint masses on the fine grid.
    std::vector<double> cell(static_cast<size_t>(fine) * fine);
    double total = 0.0;
    for (int a = 0; a < fine; ++a) {
        const double x = xlo + (a + 0.5) * wx;
        for (int b = 0; b < fine; ++b) {
            const double y = ylo + (b + 0.5) * wy;
            double v = f(x, y);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw DensityError("density is negative or non-finite at (" + std::to_string(x) +
                                   ", " + std::to_string(y) + ")");
            double mass = v * wx * wy;
            cell[static_cast<size_t>(a) * fine + b] = mass;
            total += mass;
        }
    }
    if (!(total > 0.0)) throw DensityError("density integrates to zero over the rectangle");

    // Marginal CDF value at the center of each fine slab.
    std::vector<double> fx(fine, 0.0), fy(fine, 0.0);
    for (int a = 0; a < fine; ++a)
        for (int b = 0; b < fine; ++b) {
            fx[a] += cell[static_cast<size_t>(a) * fine + b];
            fy[b] += cell[static_cast<size_t>(a) * fine + b];
        }
    std::vector<double> u_of(fine), v_of(fine);
    double cum = 0.0;
    for (int a = 0; a < fine; ++a) {
        u_of[a] = (cum + 0.5 * fx[a]) / total;
        cum += fx[a];
    }
    cum = 0.0;
    for (int b = 0; b < fine; ++b) {
        v_of[b] = (cum + 0.5 * fy[b]) / total;
        cum += fy[b];
    }

    // Push mass into rank space.
    std::vector<double> grid(static_cast<size_t>(m) * m, 0.0);
    for (int a = 0; a < fine; ++a) {
        const int i = std::min(static_cast<int>(u_of[a] * m), m - 1);
        for (int b = 0; b < fine; ++b) {
            const int j = std::min(static_cast<int>(v_of[b] * m), m - 1);
            grid[static_cast<size_t>(i) * m + j] += cell[static_cast<size_t>(a) * fine + b] / total;
        }
    }

    ipf_normalize(grid, m, 1e-12, 500);
    return GridCopula(m, std::move(grid), 1e-10);
}

}  // namespace concordia
