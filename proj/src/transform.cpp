#include "concordia/transform.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace concordia {

InvarianceReport check_invariance(const Copula& c, const Subgroup& s, int lattice) {
    InvarianceReport rep;
    if (auto g = c.reduce_to_grid()) {
        rep.grid_path = true;
        const int m = g->resolution();
        for (const GroupElement& elem : s.elements) {
            if (elem.is_identity()) continue;
            GridCopula t = g->transform_by(elem);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    double dev = std::fabs(t.cell_mass(i, j) - g->cell_mass(i, j));
                    if (dev > rep.max_deviation) {
                        rep.max_deviation = dev;
                        rep.worst_element = elem;
                        rep.worst_u1 = (i + 0.5) / m;
                        rep.worst_u2 = (j + 0.5) / m;
                    }
                }
            }
        }
        return rep;
    }

    std::vector<double> pts(lattice);
    for (int i = 0; i < lattice; ++i) pts[i] = static_cast<double>(i) / (lattice - 1);
    std::vector<double> base(static_cast<size_t>(lattice) * lattice);
    for (int i = 0; i < lattice; ++i)
        for (int j = 0; j < lattice; ++j)
            base[static_cast<size_t>(i) * lattice + j] = c(pts[i], pts[j]);

    for (const GroupElement& elem : s.elements) {
        if (elem.is_identity()) continue;
        Copula t = c.transform_by(elem);
        for (int i = 0; i < lattice; ++i) {
            for (int j = 0; j < lattice; ++j) {
                double dev = std::fabs(t(pts[i], pts[j]) - base[static_cast<size_t>(i) * lattice + j]);
                if (dev > rep.max_deviation) {
                    rep.max_deviation = dev;
                    rep.worst_element = elem;
                    rep.worst_u1 = pts[i];
                    rep.worst_u2 = pts[j];
                }
            }
        }
    }
    return rep;
}

bool is_invariant(const Copula& c, const Subgroup& s, int lattice, double tol) {
    return check_invariance(c, s, lattice).invariant(tol);
}

Copula symmetrize(const Copula& c, const Subgroup& s) {
    if (auto g = c.reduce_to_grid()) {
        const int m = g->resolution();
        std::vector<GridCopula> orbit;
        orbit.reserve(s.elements.size());
        for (const GroupElement& elem : s.elements) orbit.push_back(g->transform_by(elem));

        const double inv = 1.0 / static_cast<double>(s.elements.size());
        std::vector<double> out(static_cast<size_t>(m) * m);
        std::vector<double> vals(orbit.size());
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                for (size_t k = 0; k < orbit.size(); ++k) vals[k] = orbit[k].cell_mass(i, j);
                // Sorted summation: every cell of an orbit sums the same
                // multiset in the same order, so the mean is exactly
                // S-invariant.
                std::sort(vals.begin(), vals.end());
                double acc = 0.0;
                for (double v : vals) acc += v;
                out[static_cast<size_t>(i) * m + j] = acc * inv;
            }
        }
        return Copula::grid(GridCopula(m, std::move(out), 1e-11));
    }

    const double w = 1.0 / static_cast<double>(s.elements.size());
    std::vector<std::pair<double, Copula>> parts;
    parts.reserve(s.elements.size());
    for (const GroupElement& elem : s.elements) parts.emplace_back(w, c.transform_by(elem));
    return Copula::mixture(std::move(parts));
}

}  // namespace concordia
