#include "concordia/biconvex.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "concordia/rng.hpp"

namespace concordia {

namespace {

constexpr double kBreakTol = 1e-13;

// Gauss-Legendre nodes/weights on [0,1].  The integrands are piecewise
// polynomials of degree <= 2 along lines and <= 3 across strips, so these
// rules are exact with margin.
constexpr double kG3Nodes[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kG3Weights[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
constexpr double kG4Nodes[4] = {0.06943184420297371, 0.3300094782075719, 0.6699905217924281,
                                0.9305681557970263};
constexpr double kG4Weights[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                                  0.1739274225687269};

double pairwise_sum(const double* p, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    size_t h = n / 2;
    return pairwise_sum(p, h) + pairwise_sum(p + h, n - h);
}

double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

void sort_unique(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(),
                        [](double a, double b) { return std::fabs(a - b) <= kBreakTol; }),
            v.end());
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Average of c along the segment (x0,y0)-(x1,y1), split at kink crossings.
double seg_avg(const Copula& c, const std::vector<Line>& lines, double x0, double y0, double x1,
               double y1) {
    const double dx = x1 - x0;
    const double dy = y1 - y0;
    std::vector<double> ts;
    ts.reserve(lines.size() + 2);
    ts.push_back(0.0);
    ts.push_back(1.0);
    for (const Line& l : lines) {
        double den = l.a * dx + l.b * dy;
        if (std::fabs(den) < 1e-13) continue;  // parallel (or along) the segment
        double t = (l.c - l.a * x0 - l.b * y0) / den;
        if (t > kBreakTol && t < 1.0 - kBreakTol) ts.push_back(t);
    }
    sort_unique(ts);

    double acc = 0.0;
    for (size_t p = 0; p + 1 < ts.size(); ++p) {
        const double ta = ts[p], tb = ts[p + 1];
        const double len = tb - ta;
        double piece = 0.0;
        for (int g = 0; g < 3; ++g) {
            double t = ta + len * kG3Nodes[g];
            piece += kG3Weights[g] * c(clamp01(x0 + t * dx), clamp01(y0 + t * dy));
        }
        acc += len * piece;
    }
    return acc;
}

// Integral of c(x, .) over [ylo, yhi] for fixed x, split at kink crossings.
double section_integral(const Copula& c, const std::vector<Line>& lines, double x, double ylo,
                        double yhi) {
    std::vector<double> ys;
    ys.reserve(lines.size() + 2);
    ys.push_back(ylo);
    ys.push_back(yhi);
    for (const Line& l : lines) {
        if (std::fabs(l.b) < 1e-13) continue;
        double y = (l.c - l.a * x) / l.b;
        if (y > ylo + kBreakTol && y < yhi - kBreakTol) ys.push_back(y);
    }
    sort_unique(ys);

    const double cx = clamp01(x);
    double acc = 0.0;
    for (size_t p = 0; p + 1 < ys.size(); ++p) {
        const double ya = ys[p], yb = ys[p + 1];
        const double len = yb - ya;
        double piece = 0.0;
        for (int g = 0; g < 3; ++g) piece += kG3Weights[g] * c(cx, clamp01(ya + len * kG3Nodes[g]));
        acc += len * piece;
    }
    return acc;
}

// Integral of c over the box, decomposed into x-strips on which the
// y-section integral is a single polynomial in x.
double box_integral(const Copula& c, const std::vector<Line>& lines, double x0, double y0,
                    double x1, double y1) {
    std::vector<double> xs;
    xs.push_back(x0);
    xs.push_back(x1);
    auto push_x = [&](double x) {
        if (x > x0 + kBreakTol && x < x1 - kBreakTol) xs.push_back(x);
    };
    for (const Line& l : lines) {
        if (std::fabs(l.b) < 1e-13) {
            push_x(l.c / l.a);  // vertical line
            continue;
        }
        if (std::fabs(l.a) < 1e-13) continue;  // horizontal: no x-event
        // crossings of the horizontal box edges
        push_x((l.c - l.b * y0) / l.a);
        push_x((l.c - l.b * y1) / l.a);
    }
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = i + 1; j < lines.size(); ++j) {
            const Line &p = lines[i], &q = lines[j];
            double det = p.a * q.b - q.a * p.b;
            if (std::fabs(det) < 1e-12) continue;
            double x = (p.c * q.b - q.c * p.b) / det;
            double y = (p.a * q.c - q.a * p.c) / det;
            if (y >= y0 - kBreakTol && y <= y1 + kBreakTol) push_x(x);
        }
    }
    sort_unique(xs);

    double acc = 0.0;
    for (size_t s = 0; s + 1 < xs.size(); ++s) {
        const double xa = xs[s], xb = xs[s + 1];
        const double w = xb - xa;
        double strip = 0.0;
        for (int g = 0; g < 4; ++g)
            strip += kG4Weights[g] * section_integral(c, lines, xa + w * kG4Nodes[g], y0, y1);
        acc += w * strip;
    }
    return acc;
}

double exact_against_components(const Copula& c, const std::vector<MassComponent>& comps) {
    const std::vector<Line> lines = c.kink_lines();
    std::vector<double> terms;
    terms.reserve(comps.size());
    for (const MassComponent& mc : comps) {
        if (mc.mass <= 0.0) continue;
        double avg;
        if (mc.kind == MassComponent::Kind::Segment) {
            avg = seg_avg(c, lines, mc.x0, mc.y0, mc.x1, mc.y1);
        } else {
            double area = (mc.x1 - mc.x0) * (mc.y1 - mc.y0);
            avg = box_integral(c, lines, mc.x0, mc.y0, mc.x1, mc.y1) / area;
        }
        terms.push_back(mc.mass * avg);
    }
    return pairwise_sum(terms);
}

double grid_overlay_value(const GridCopula& gc, const GridCopula& gd) {
    const int mc = gc.resolution();
    const int md = gd.resolution();
    std::vector<double> breaks;
    breaks.reserve(mc + md + 2);
    for (int i = 0; i <= mc; ++i) breaks.push_back(static_cast<double>(i) / mc);
    for (int k = 0; k <= md; ++k) breaks.push_back(static_cast<double>(k) / md);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const size_t nb = breaks.size();
    const double dens_scale = static_cast<double>(md) * md;
    std::vector<double> row_terms(nb - 1);
    std::vector<double> row_sums(nb - 1);
    for (size_t p = 0; p + 1 < nb; ++p) {
        const double xa = breaks[p], xb = breaks[p + 1];
        const double xc = 0.5 * (xa + xb);
        const int id = std::min(static_cast<int>(xc * md), md - 1);
        for (size_t q = 0; q + 1 < nb; ++q) {
            const double ya = breaks[q], yb = breaks[q + 1];
            const double yc = 0.5 * (ya + yb);
            const int jd = std::min(static_cast<int>(yc * md), md - 1);
            const double mass = gd.cell_mass(id, jd) * (xb - xa) * (yb - ya) * dens_scale;
            row_terms[q] = mass * gc.eval(xc, yc);
        }
        row_sums[p] = pairwise_sum(row_terms);
    }
    return pairwise_sum(row_sums);
}

// One checkerboard level of the fallback: exact cell masses of Q^D, the
// integrand evaluated at each cell's conditional centroid (computed from the
// CDF of D by parts, which needs only 1-d integrals along grid lines).
double discretized_level(const Copula& c, const Copula& d, int m,
                         const std::vector<Line>& d_lines) {
    std::vector<double> edge(m + 1);
    for (int k = 0; k <= m; ++k) edge[k] = static_cast<double>(k) / m;

    std::vector<double> corner(static_cast<size_t>(m + 1) * (m + 1));
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j)
            corner[static_cast<size_t>(i) * (m + 1) + j] = d(edge[i], edge[j]);
    auto cn = [&](int i, int j) { return corner[static_cast<size_t>(i) * (m + 1) + j]; };

    // ih[i][j] = integral of D(t, y_j) over the i-th x-interval, j = 0..m
    std::vector<double> ih(static_cast<size_t>(m) * (m + 1));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= m; ++j)
            ih[static_cast<size_t>(i) * (m + 1) + j] =
                (edge[i + 1] - edge[i]) * seg_avg(d, d_lines, edge[i], edge[j], edge[i + 1], edge[j]);
    // iv[i][j] = integral of D(x_i, s) over the j-th y-interval, i = 0..m
    std::vector<double> iv(static_cast<size_t>(m + 1) * m);
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j < m; ++j)
            iv[static_cast<size_t>(i) * m + j] =
                (edge[j + 1] - edge[j]) * seg_avg(d, d_lines, edge[i], edge[j], edge[i], edge[j + 1]);

    std::vector<double> row_terms(m);
    std::vector<double> row_sums(m);
    for (int i = 0; i < m; ++i) {
        const double a = edge[i], b = edge[i + 1];
        for (int j = 0; j < m; ++j) {
            const double ylo = edge[j], yhi = edge[j + 1];
            double mass = cn(i + 1, j + 1) - cn(i, j + 1) - cn(i + 1, j) + cn(i, j);
            if (mass < 1e-15) {
                row_terms[j] = 0.0;
                continue;
            }
            const double gb = cn(i + 1, j + 1) - cn(i + 1, j);
            const double ga = cn(i, j + 1) - cn(i, j);
            const double int_u1 = b * gb - a * ga - (ih[static_cast<size_t>(i) * (m + 1) + j + 1] -
                                                     ih[static_cast<size_t>(i) * (m + 1) + j]);
            const double hd = cn(i + 1, j + 1) - cn(i, j + 1);
            const double hc = cn(i + 1, j) - cn(i, j);
            const double int_u2 = yhi * hd - ylo * hc - (iv[static_cast<size_t>(i + 1) * m + j] -
                                                         iv[static_cast<size_t>(i) * m + j]);
            const double cx = std::clamp(int_u1 / mass, a, b);
            const double cy = std::clamp(int_u2 / mass, ylo, yhi);
            row_terms[j] = mass * c(cx, cy);
        }
        row_sums[i] = pairwise_sum(row_terms);
    }
    return pairwise_sum(row_sums);
}

}  // namespace

const char* BiconvexResult::method_name(Method m) {
    switch (m) {
        case Method::ExactGrid: return "exact-grid";
        case Method::Exact: return "exact";
        case Method::Discretized: return "discretized";
    }
    return "?";
}

BiconvexNonConvergence::BiconvexNonConvergence(double best_value_, double error_, int resolution_)
    : std::runtime_error("biconvex form did not converge at resolution cap " +
                         std::to_string(resolution_) + " (best " + std::to_string(best_value_) +
                         ", last step " + std::to_string(error_) + ")"),
      best_value(best_value_),
      error(error_),
      resolution(resolution_) {}

double segment_average(const Copula& c, double x0, double y0, double x1, double y1) {
    return seg_avg(c, c.kink_lines(), x0, y0, x1, y1);
}

double box_average(const Copula& c, double x0, double y0, double x1, double y1) {
    return box_integral(c, c.kink_lines(), x0, y0, x1, y1) / ((x1 - x0) * (y1 - y0));
}

BiconvexResult biconvex_form(const Copula& c, const Copula& d, int initial_resolution) {
    if (initial_resolution < 1) throw std::invalid_argument("biconvex_form: resolution must be >= 1");

    auto gc = c.reduce_to_grid();
    auto gd = d.reduce_to_grid();
    if (gc && gd) {
        BiconvexResult r;
        r.value = grid_overlay_value(*gc, *gd);
        r.method = BiconvexResult::Method::ExactGrid;
        r.resolution_used = std::max(gc->resolution(), gd->resolution());
        return r;
    }

    if (auto comps = d.measure_components()) {
        BiconvexResult r;
        r.value = exact_against_components(c, *comps);
        r.method = BiconvexResult::Method::Exact;
        return r;
    }

    // Bivariate symmetry [C,D] = [D,C]: integrate D against Q^C instead.
    if (auto comps = c.measure_components()) {
        BiconvexResult r;
        r.value = exact_against_components(d, *comps);
        r.method = BiconvexResult::Method::Exact;
        return r;
    }

    const std::vector<Line> d_lines = d.kink_lines();
    constexpr int kCap = 4096;
    constexpr double kTol = 1e-8;
    double prev_raw = 0.0, prev_extrap = 0.0, best = 0.0;
    int level = 0;
    for (int m = initial_resolution; m <= kCap; m *= 2, ++level) {
        double raw = discretized_level(c, d, m, d_lines);
        best = raw;
        if (level >= 1) {
            // Leading error is O(1/m^2); one Richardson step removes it.
            double extrap = raw + (raw - prev_raw) / 3.0;
            best = extrap;
            if (level >= 2) {
                double step = std::fabs(extrap - prev_extrap);
                if (step < kTol) {
                    BiconvexResult r;
                    r.value = extrap;
                    r.method = BiconvexResult::Method::Discretized;
                    r.resolution_used = m;
                    r.est_error = step;
                    return r;
                }
            }
            prev_extrap = extrap;
        }
        prev_raw = raw;
    }
    throw BiconvexNonConvergence(best, std::fabs(best - prev_raw), kCap);
}

std::pair<double, double> biconvex_oracle(const Copula& c, const GridCopula& d, long n_samples,
                                          std::uint64_t seed) {
    const int m = d.resolution();
    std::vector<double> cum;
    cum.reserve(static_cast<size_t>(m) * m);
    double run = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            run += d.cell_mass(i, j);
            cum.push_back(run);
        }

    Rng rng(seed);
    double sum = 0.0, sumsq = 0.0;
    for (long k = 0; k < n_samples; ++k) {
        double r = rng.unif01() * run;
        size_t idx = std::lower_bound(cum.begin(), cum.end(), r) - cum.begin();
        if (idx >= cum.size()) idx = cum.size() - 1;
        int i = static_cast<int>(idx) / m;
        int j = static_cast<int>(idx) % m;
        double u = (i + rng.unif01()) / m;
        double v = (j + rng.unif01()) / m;
        double val = c(u, v);
        sum += val;
        sumsq += val * val;
    }
    double mean = sum / n_samples;
    double var = std::max(0.0, (sumsq - n_samples * mean * mean) / (n_samples - 1.0));
    return {mean, std::sqrt(var / n_samples)};
}

}  // namespace concordia
