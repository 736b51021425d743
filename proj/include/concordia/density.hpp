#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "concordia/copula.hpp"

namespace concordia {

using DensityFn = std::function<double(double, double)>;

struct DensityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative proportional fitting: rescales rows and columns of an m x m
// nonnegative matrix in place until every marginal sum is within tol of
// 1/m.  Throws on non-convergence within max_sweeps.
void ipf_normalize(std::vector<double>& mass, int m, double tol = 1e-10, int max_sweeps = 500);

// Copula of the distribution with density f on the rectangle
// [xlo,xhi] x [ylo,yhi]: f is integrated on a midpoint grid of
// (m*inner)^2 cells, mass is pushed through the marginal CDFs into rank
// space, and the marginals are polished with IPF.  A density with
// f(x,y) = f(|x|,|y|) on a sign-symmetric rectangle yields a reflection-
// invariant copula.
GridCopula copula_from_density(const DensityFn& f, double xlo, double xhi, double ylo, double yhi,
                               int m, int inner = 24);

}  // namespace concordia
