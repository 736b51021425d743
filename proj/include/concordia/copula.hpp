#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "concordia/group.hpp"

namespace concordia {

// Line a*u1 + b*u2 = c in the unit square.  Copulas in this library are
// piecewise bilinear; their kink lines drive the exact integration rules.
struct Line {
    double a, b, c;
};

// One additive piece of the probability measure induced by a copula: either
// mass spread uniformly along a straight segment or uniformly over an
// axis-aligned box.
struct MassComponent {
    enum class Kind { Segment, Box };
    Kind kind;
    double mass;
    double x0, y0;  // segment start / box lower corner
    double x1, y1;  // segment end   / box upper corner
};

// Checkerboard copula: an m x m matrix of nonnegative cell masses with
// uniform marginals (every row and column sums to 1/m).  The CDF is exact at
// cell corners and bilinear inside cells.
class GridCopula {
public:
    // mass is row-major, mass[i*m + j] = mass of cell i (first coordinate)
    // and j (second coordinate).  Throws std::invalid_argument if the matrix
    // is not a checkerboard within `tol`.
    GridCopula(int m, std::vector<double> mass, double tol = 1e-12);

    int resolution() const { return m_; }
    double cell_mass(int i, int j) const { return mass_[static_cast<size_t>(i) * m_ + j]; }
    const std::vector<double>& mass() const { return mass_; }

    // CDF at a grid corner (i, j in 0..m), exact partial sums.
    double corner_cdf(int i, int j) const { return prefix_[static_cast<size_t>(i) * (m_ + 1) + j]; }

    double eval(double u1, double u2) const;
    double rect_mass(double a1, double b1, double a2, double b2) const;

    // Image of the grid under a group element: rows/columns flipped and/or
    // the matrix transposed.  Exact.
    GridCopula transform_by(const GroupElement& g) const;

    // Each cell split into (factor x factor) equal parts.
    GridCopula refine(int factor) const;

    friend bool operator==(const GridCopula& a, const GridCopula& b) {
        return a.m_ == b.m_ && a.mass_ == b.mass_;
    }

private:
    int m_;
    std::vector<double> mass_;    // m*m
    std::vector<double> prefix_;  // (m+1)*(m+1)
};

// Bivariate copula value: one of the analytic builtins (the upper and lower
// Fréchet-Hoeffding bounds M and W, the product Pi, the band-shuffle
// counterexample E), a checkerboard grid, a finite convex mixture, or a
// group-transformed wrapper.  Immutable; copies share structure.
class Copula {
public:
    enum class Kind { M, W, Pi, E, Grid, Mixture, Transformed };

    static Copula M();
    static Copula W();
    static Copula Pi();
    static Copula E();
    static Copula grid(GridCopula g);
    // Weights must be nonnegative and sum to 1 within 1e-12.
    static Copula mixture(std::vector<std::pair<double, Copula>> parts);

    Kind kind() const;

    // Evaluation; throws std::domain_error outside the unit square.
    double operator()(double u1, double u2) const;

    // Measure of the half-open rectangle (a1,b1] x (a2,b2] by
    // inclusion-exclusion.  Values in [-1e-12, 0) clamp to 0; anything more
    // negative signals an invalid copula and throws.
    double rect_mass(double a1, double b1, double a2, double b2) const;

    // Checkerboard approximation at resolution m (exact when this copula is
    // grid-representable at a resolution dividing m).
    GridCopula discretize(int m) const;

    // Exact grid representation, if one exists (grids, Pi, and mixtures or
    // transforms thereof).  Mixtures reduce on the least common refinement.
    std::optional<GridCopula> reduce_to_grid() const;

    // Lines off which the copula is bilinear.
    std::vector<Line> kink_lines() const;

    // Exact decomposition of the induced measure into segment/box pieces.
    // Unavailable (nullopt) when E occurs in measure position: the support
    // of Q^E is not assumed, it is only probed numerically.
    std::optional<std::vector<MassComponent>> measure_components() const;

    // Group action on copulas.  Exact matrix operation for grids; otherwise
    // a Transformed wrapper (compositions are normalized, the identity is a
    // no-op).
    Copula transform_by(const GroupElement& g) const;

    // Accessors for composite kinds (valid only for the matching kind).
    const GridCopula& as_grid() const;
    const std::vector<std::pair<double, Copula>>& parts() const;
    const GroupElement& transform_element() const;
    const Copula& transform_base() const;

    // Short structural description, e.g. "mixture(0.5*M, 0.5*W)".
    std::string describe() const;

private:
    struct Node;
    explicit Copula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Copula make_builtin(Kind k);
    double eval_raw(double u1, double u2) const;
    std::shared_ptr<const Node> node_;
};

// Lattice-based validity diagnostics (boundary conditions and
// 2-increasingness).
struct ValidityReport {
    double max_boundary_defect = 0.0;  // worst |C(u,0)|, |C(u,1)-u|, ...
    double min_rectangle_mass = 0.0;   // most negative rectangle volume seen
    bool ok(double tol = 1e-12) const {
        return max_boundary_defect <= tol && min_rectangle_mass >= -tol;
    }
};

ValidityReport check_validity(const Copula& c, int lattice = 50);

}  // namespace concordia
