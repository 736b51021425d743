#include "concordia/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace concordia {

namespace {

constexpr double kMassClamp = 1e-12;

void require_unit(double u, const char* what) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error(std::string(what) + " outside [0,1]");
}

}  // namespace

// ---------------------------------------------------------------------------
// GridCopula

GridCopula::GridCopula(int m, std::vector<double> mass, double tol) : m_(m), mass_(std::move(mass)) {
    if (m_ < 1) throw std::invalid_argument("grid resolution must be >= 1");
    if (mass_.size() != static_cast<size_t>(m_) * m_)
        throw std::invalid_argument("grid mass matrix has wrong size");
    for (double& v : mass_) {
        if (v < 0.0) {
            if (v < -kMassClamp) throw std::invalid_argument("negative cell mass in grid copula");
            v = 0.0;
        }
    }
    const double want = 1.0 / m_;
    double total = 0.0;
    for (int i = 0; i < m_; ++i) {
        double row = 0.0;
        for (int j = 0; j < m_; ++j) row += cell_mass(i, j);
        if (std::fabs(row - want) > tol)
            throw std::invalid_argument("grid row " + std::to_string(i) + " mass " +
                                        std::to_string(row) + " != 1/m");
        total += row;
    }
    for (int j = 0; j < m_; ++j) {
        double col = 0.0;
        for (int i = 0; i < m_; ++i) col += cell_mass(i, j);
        if (std::fabs(col - want) > tol)
            throw std::invalid_argument("grid column " + std::to_string(j) + " mass " +
                                        std::to_string(col) + " != 1/m");
    }
    if (std::fabs(total - 1.0) > std::max(tol, m_ * tol))
        throw std::invalid_argument("grid total mass != 1");

    // Prefix sums without subtraction: per-row cumulative, then down columns.
    prefix_.assign(static_cast<size_t>(m_ + 1) * (m_ + 1), 0.0);
    for (int i = 0; i < m_; ++i) {
        double row_cum = 0.0;
        for (int j = 0; j < m_; ++j) {
            row_cum += cell_mass(i, j);
            prefix_[static_cast<size_t>(i + 1) * (m_ + 1) + (j + 1)] =
                prefix_[static_cast<size_t>(i) * (m_ + 1) + (j + 1)] + row_cum;
        }
    }
}

double GridCopula::eval(double u1, double u2) const {
    double x = u1 * m_;
    double y = u2 * m_;
    int i = std::min(static_cast<int>(x), m_ - 1);
    int j = std::min(static_cast<int>(y), m_ - 1);
    if (i < 0) i = 0;
    if (j < 0) j = 0;
    double fx = x - i;
    double fy = y - j;
    const double p00 = corner_cdf(i, j);
    const double p10 = corner_cdf(i + 1, j);
    const double p01 = corner_cdf(i, j + 1);
    const double p11 = corner_cdf(i + 1, j + 1);
    return (1.0 - fx) * ((1.0 - fy) * p00 + fy * p01) + fx * ((1.0 - fy) * p10 + fy * p11);
}

double GridCopula::rect_mass(double a1, double b1, double a2, double b2) const {
    return eval(b1, b2) - eval(a1, b2) - eval(b1, a2) + eval(a1, a2);
}

GridCopula GridCopula::transform_by(const GroupElement& g) const {
    std::vector<double> out(mass_.size());
    for (int i = 0; i < m_; ++i) {
        for (int j = 0; j < m_; ++j) {
            int fi = g.flip1 ? m_ - 1 - i : i;
            int fj = g.flip2 ? m_ - 1 - j : j;
            int ti = g.swap ? fj : fi;
            int tj = g.swap ? fi : fj;
            out[static_cast<size_t>(ti) * m_ + tj] = cell_mass(i, j);
        }
    }
    return GridCopula(m_, std::move(out));
}

GridCopula GridCopula::refine(int factor) const {
    if (factor < 1) throw std::invalid_argument("refine factor must be >= 1");
    if (factor == 1) return *this;
    const int r = m_ * factor;
    const double scale = 1.0 / (static_cast<double>(factor) * factor);
    std::vector<double> out(static_cast<size_t>(r) * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            out[static_cast<size_t>(i) * r + j] = cell_mass(i / factor, j / factor) * scale;
    return GridCopula(r, std::move(out));
}

// ---------------------------------------------------------------------------
// Copula

struct Copula::Node {
    Kind kind;
    std::optional<GridCopula> grid;                 // Kind::Grid
    std::vector<std::pair<double, Copula>> parts;   // Kind::Mixture
    GroupElement elem;                              // Kind::Transformed
    std::optional<Copula> base;                     // Kind::Transformed
};

namespace {

Line line_through(double x0, double y0, double x1, double y1) {
    double a = y1 - y0;
    double b = -(x1 - x0);
    double scale = std::max(std::fabs(a), std::fabs(b));
    a /= scale;
    b /= scale;
    return Line{a, b, a * x0 + b * y0};
}

Line transform_line(const GroupElement& g, const Line& l) {
    double x0, y0, x1, y1;
    if (std::fabs(l.b) >= std::fabs(l.a)) {
        x0 = 0.0;
        y0 = l.c / l.b;
        x1 = 1.0;
        y1 = (l.c - l.a) / l.b;
    } else {
        y0 = 0.0;
        x0 = l.c / l.a;
        y1 = 1.0;
        x1 = (l.c - l.b) / l.a;
    }
    auto p = g.apply(x0, y0);
    auto q = g.apply(x1, y1);
    return line_through(p.first, p.second, q.first, q.second);
}

MassComponent transform_component(const GroupElement& g, const MassComponent& mc) {
    auto p = g.apply(mc.x0, mc.y0);
    auto q = g.apply(mc.x1, mc.y1);
    MassComponent out = mc;
    if (mc.kind == MassComponent::Kind::Box) {
        out.x0 = std::min(p.first, q.first);
        out.x1 = std::max(p.first, q.first);
        out.y0 = std::min(p.second, q.second);
        out.y1 = std::max(p.second, q.second);
    } else {
        out.x0 = p.first;
        out.y0 = p.second;
        out.x1 = q.first;
        out.y1 = q.second;
    }
    return out;
}

}  // namespace

Copula Copula::make_builtin(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return Copula(std::move(n));
}

Copula Copula::M() {
    static const Copula c = make_builtin(Kind::M);
    return c;
}
Copula Copula::W() {
    static const Copula c = make_builtin(Kind::W);
    return c;
}
Copula Copula::Pi() {
    static const Copula c = make_builtin(Kind::Pi);
    return c;
}
Copula Copula::E() {
    static const Copula c = make_builtin(Kind::E);
    return c;
}

Copula Copula::grid(GridCopula g) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Grid;
    n->grid = std::move(g);
    return Copula(std::move(n));
}

Copula Copula::mixture(std::vector<std::pair<double, Copula>> parts) {
    if (parts.empty()) throw std::invalid_argument("mixture needs at least one component");
    double total = 0.0;
    for (auto& [w, c] : parts) {
        if (w < 0.0) throw std::invalid_argument("mixture weight is negative");
        total += w;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mixture weights sum to " + std::to_string(total) + ", not 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mixture;
    n->parts = std::move(parts);
    return Copula(std::move(n));
}

Copula::Kind Copula::kind() const { return node_->kind; }

const GridCopula& Copula::as_grid() const { return *node_->grid; }
const std::vector<std::pair<double, Copula>>& Copula::parts() const { return node_->parts; }
const GroupElement& Copula::transform_element() const { return node_->elem; }
const Copula& Copula::transform_base() const { return *node_->base; }

double Copula::eval_raw(double u1, double u2) const {
    switch (node_->kind) {
        case Kind::M:
            return std::min(u1, u2);
        case Kind::W:
            return std::max(u1 + u2 - 1.0, 0.0);
        case Kind::Pi:
            return u1 * u2;
        case Kind::E: {
            // Band shuffle: comonotone past the off-diagonal band,
            // countermonotone past the diagonal band, a linear saddle in the
            // central diamond.  Branch boundaries fall into the middle
            // branch; all three formulas agree there by continuity.
            if (std::fabs(u1 - u2) > 0.5) return std::min(u1, u2);
            if (std::fabs(u1 + u2 - 1.0) > 0.5) return std::max(u1 + u2 - 1.0, 0.0);
            return 0.5 * (u1 + u2) - 0.25;
        }
        case Kind::Grid:
            return node_->grid->eval(u1, u2);
        case Kind::Mixture: {
            double v = 0.0;
            for (const auto& [w, c] : node_->parts) v += w * c.eval_raw(u1, u2);
            return v;
        }
        case Kind::Transformed: {
            const GroupElement& g = node_->elem;
            const Copula& base = *node_->base;
            double w1 = g.swap ? u2 : u1;
            double w2 = g.swap ? u1 : u2;
            if (!g.flip1 && !g.flip2) return base.eval_raw(w1, w2);
            if (g.flip1 && !g.flip2) return w2 - base.eval_raw(1.0 - w1, w2);
            if (!g.flip1 && g.flip2) return w1 - base.eval_raw(w1, 1.0 - w2);
            return w1 + w2 - 1.0 + base.eval_raw(1.0 - w1, 1.0 - w2);
        }
    }
    return 0.0;
}

double Copula::operator()(double u1, double u2) const {
    require_unit(u1, "u1");
    require_unit(u2, "u2");
    return eval_raw(u1, u2);
}

double Copula::rect_mass(double a1, double b1, double a2, double b2) const {
    if (!(a1 <= b1 && a2 <= b2)) throw std::domain_error("rect_mass: unordered bounds");
    require_unit(a1, "a1");
    require_unit(b1, "b1");
    require_unit(a2, "a2");
    require_unit(b2, "b2");
    double v = eval_raw(b1, b2) - eval_raw(a1, b2) - eval_raw(b1, a2) + eval_raw(a1, a2);
    if (v < 0.0) {
        if (v < -kMassClamp)
            throw std::invalid_argument("rectangle mass " + std::to_string(v) +
                                        " below -1e-12: not a copula");
        v = 0.0;
    }
    return v;
}

GridCopula Copula::discretize(int m) const {
    if (m < 1) throw std::invalid_argument("discretize: resolution must be >= 1");
    if (auto g = reduce_to_grid()) {
        if (g->resolution() == m) return *g;
        if (m % g->resolution() == 0) return g->refine(m / g->resolution());
    }
    std::vector<double> mass(static_cast<size_t>(m) * m);
    std::vector<double> edge(m + 1);
    for (int k = 0; k <= m; ++k) edge[k] = static_cast<double>(k) / m;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            mass[static_cast<size_t>(i) * m + j] = rect_mass(edge[i], edge[i + 1], edge[j], edge[j + 1]);
    return GridCopula(m, std::move(mass));
}

std::optional<GridCopula> Copula::reduce_to_grid() const {
    switch (kind()) {
        case Kind::Grid:
            return *node_->grid;
        case Kind::Pi:
            return GridCopula(1, {1.0});
        case Kind::Mixture: {
            std::vector<GridCopula> grids;
            long long res = 1;
            for (const auto& [w, c] : node_->parts) {
                auto g = c.reduce_to_grid();
                if (!g) return std::nullopt;
                res = std::lcm<long long>(res, g->resolution());
                if (res > 4096) return std::nullopt;
                grids.push_back(std::move(*g));
            }
            const int r = static_cast<int>(res);
            std::vector<double> acc(static_cast<size_t>(r) * r, 0.0);
            for (size_t k = 0; k < grids.size(); ++k) {
                GridCopula fine = grids[k].refine(r / grids[k].resolution());
                const double w = node_->parts[k].first;
                for (size_t t = 0; t < acc.size(); ++t) acc[t] += w * fine.mass()[t];
            }
            return GridCopula(r, std::move(acc), 1e-11);
        }
        case Kind::Transformed: {
            auto g = node_->base->reduce_to_grid();
            if (!g) return std::nullopt;
            return g->transform_by(node_->elem);
        }
        default:
            return std::nullopt;
    }
}

std::vector<Line> Copula::kink_lines() const {
    switch (kind()) {
        case Kind::M:
            return {Line{1.0, -1.0, 0.0}};
        case Kind::W:
            return {Line{1.0, 1.0, 1.0}};
        case Kind::Pi:
            return {};
        case Kind::E:
            return {Line{1.0, -1.0, 0.5}, Line{1.0, -1.0, -0.5}, Line{1.0, 1.0, 1.5},
                    Line{1.0, 1.0, 0.5}};
        case Kind::Grid: {
            const int m = node_->grid->resolution();
            std::vector<Line> out;
            out.reserve(2 * (m - 1));
            for (int k = 1; k < m; ++k) {
                out.push_back(Line{1.0, 0.0, static_cast<double>(k) / m});
                out.push_back(Line{0.0, 1.0, static_cast<double>(k) / m});
            }
            return out;
        }
        case Kind::Mixture: {
            std::vector<Line> out;
            for (const auto& [w, c] : node_->parts) {
                auto sub = c.kink_lines();
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        case Kind::Transformed: {
            std::vector<Line> out;
            for (const Line& l : node_->base->kink_lines())
                out.push_back(transform_line(node_->elem, l));
            return out;
        }
    }
    return {};
}

std::optional<std::vector<MassComponent>> Copula::measure_components() const {
    switch (kind()) {
        case Kind::M:
            return std::vector<MassComponent>{
                {MassComponent::Kind::Segment, 1.0, 0.0, 0.0, 1.0, 1.0}};
        case Kind::W:
            return std::vector<MassComponent>{
                {MassComponent::Kind::Segment, 1.0, 0.0, 1.0, 1.0, 0.0}};
        case Kind::Pi:
            return std::vector<MassComponent>{{MassComponent::Kind::Box, 1.0, 0.0, 0.0, 1.0, 1.0}};
        case Kind::E:
            return std::nullopt;
        case Kind::Grid: {
            const GridCopula& g = *node_->grid;
            const int m = g.resolution();
            std::vector<MassComponent> out;
            out.reserve(static_cast<size_t>(m) * m);
            for (int i = 0; i < m; ++i) {
                for (int j = 0; j < m; ++j) {
                    double mass = g.cell_mass(i, j);
                    if (mass <= 0.0) continue;
                    out.push_back({MassComponent::Kind::Box, mass, static_cast<double>(i) / m,
                                   static_cast<double>(j) / m, static_cast<double>(i + 1) / m,
                                   static_cast<double>(j + 1) / m});
                }
            }
            return out;
        }
        case Kind::Mixture: {
            std::vector<MassComponent> out;
            for (const auto& [w, c] : node_->parts) {
                if (w == 0.0) continue;
                auto sub = c.measure_components();
                if (!sub) return std::nullopt;
                for (MassComponent mc : *sub) {
                    mc.mass *= w;
                    out.push_back(mc);
                }
            }
            return out;
        }
        case Kind::Transformed: {
            auto sub = node_->base->measure_components();
            if (!sub) return std::nullopt;
            std::vector<MassComponent> out;
            out.reserve(sub->size());
            for (const MassComponent& mc : *sub)
                out.push_back(transform_component(node_->elem, mc));
            return out;
        }
    }
    return std::nullopt;
}

Copula Copula::transform_by(const GroupElement& g) const {
    if (g.is_identity()) return *this;
    if (kind() == Kind::Transformed)
        return node_->base->transform_by(group::compose(g, node_->elem));
    if (auto gr = reduce_to_grid()) return Copula::grid(gr->transform_by(g));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Transformed;
    n->elem = g;
    n->base = *this;
    return Copula(std::move(n));
}

std::string Copula::describe() const {
    switch (kind()) {
        case Kind::M: return "M";
        case Kind::W: return "W";
        case Kind::Pi: return "Pi";
        case Kind::E: return "E";
        case Kind::Grid: return "grid(" + std::to_string(node_->grid->resolution()) + ")";
        case Kind::Mixture: {
            std::ostringstream os;
            os << "mixture(";
            bool first = true;
            for (const auto& [w, c] : node_->parts) {
                if (!first) os << ", ";
                first = false;
                os << w << "*" << c.describe();
            }
            os << ")";
            return os.str();
        }
        case Kind::Transformed:
            return group::name_of(node_->elem) + "(" + node_->base->describe() + ")";
    }
    return "?";
}

ValidityReport check_validity(const Copula& c, int lattice) {
    ValidityReport rep;
    std::vector<double> pts(lattice);
    for (int i = 0; i < lattice; ++i) pts[i] = static_cast<double>(i) / (lattice - 1);

    for (double u : pts) {
        rep.max_boundary_defect = std::max(rep.max_boundary_defect, std::fabs(c(u, 0.0)));
        rep.max_boundary_defect = std::max(rep.max_boundary_defect, std::fabs(c(0.0, u)));
        rep.max_boundary_defect = std::max(rep.max_boundary_defect, std::fabs(c(u, 1.0) - u));
        rep.max_boundary_defect = std::max(rep.max_boundary_defect, std::fabs(c(1.0, u) - u));
    }

    // Volumes of all lattice cells; any rectangle is a sum of these.
    std::vector<double> row(lattice);
    std::vector<double> prev(lattice);
    for (int j = 0; j < lattice; ++j) prev[j] = c(pts[0], pts[j]);
    rep.min_rectangle_mass = 0.0;
    for (int i = 1; i < lattice; ++i) {
        for (int j = 0; j < lattice; ++j) row[j] = c(pts[i], pts[j]);
        for (int j = 1; j < lattice; ++j) {
            double vol = row[j] - row[j - 1] - prev[j] + prev[j - 1];
            rep.min_rectangle_mass = std::min(rep.min_rectangle_mass, vol);
        }
        std::swap(row, prev);
    }
    return rep;
}

}  // namespace concordia
