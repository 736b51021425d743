#pragma once

#include "concordia/copula.hpp"
#include "concordia/group.hpp"

namespace concordia {

// Action of a group element on a copula.  Exact index permutation for grid
// copulas; otherwise an evaluation wrapper using the partial-reflection
// formulas.  Compositions normalize, so involutions cancel structurally.
inline Copula apply_transform(const GroupElement& g, const Copula& c) { return c.transform_by(g); }

struct InvarianceReport {
    double max_deviation = 0.0;
    GroupElement worst_element;
    double worst_u1 = 0.0, worst_u2 = 0.0;
    bool grid_path = false;  // matrix comparison instead of lattice sampling

    bool invariant(double tol) const { return max_deviation <= tol; }
};

// Deviation of C from S-invariance: for grid-representable copulas the mass
// matrices of all transforms are compared entrywise; otherwise |γ(C) - C| is
// sampled on a lattice x lattice grid of points.
InvarianceReport check_invariance(const Copula& c, const Subgroup& s, int lattice = 101);

bool is_invariant(const Copula& c, const Subgroup& s, int lattice = 101, double tol = 1e-10);

// Equal-weight mean over the orbit {γ(C) : γ in S}.  Grid path sums each
// entry's orbit in sorted order, which makes the result exactly S-invariant
// (bitwise); otherwise returns the mixture of transformed wrappers.
Copula symmetrize(const Copula& c, const Subgroup& s);

}  // namespace concordia
