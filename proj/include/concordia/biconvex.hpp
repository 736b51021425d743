#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "concordia/copula.hpp"

namespace concordia {

struct BiconvexResult {
    enum class Method {
        ExactGrid,    // both sides grid-representable: overlay cell sum
        Exact,        // measure decomposed into segments/boxes, piecewise Gauss
        Discretized,  // doubling checkerboard fallback with extrapolation
    };

    double value = 0.0;
    Method method = Method::Exact;
    int resolution_used = 0;  // 0 on exact paths
    double est_error = 0.0;   // 0 on exact paths, last extrapolated step otherwise

    static const char* method_name(Method m);
};

// Raised when the discretization fallback has not met its tolerance at the
// resolution cap.  Carries the best available estimate.
struct BiconvexNonConvergence : std::runtime_error {
    BiconvexNonConvergence(double best_value, double error, int resolution);
    double best_value;
    double error;
    int resolution;
};

// The biconvex form [C,D] = integral of C against the probability measure of
// D.  Strategy, in order:
//   1. both sides grid-representable: exact sum over the grid overlay
//      (D is piecewise uniform and C bilinear on every overlay cell);
//   2. Q^D decomposes into uniform segment/box components: exact
//      kink-splitting Gauss integration of C over each component;
//   3. Q^C decomposes: same computation on [D,C], which equals [C,D] in the
//      bivariate case;
//   4. fallback for measures with unknown support (E): checkerboard masses
//      are exact by inclusion-exclusion, C is evaluated at the conditional
//      centroid of each cell, the resolution doubles from
//      `initial_resolution` and the sequence is Richardson-extrapolated
//      until successive values differ by < 1e-8, capped at 4096.
BiconvexResult biconvex_form(const Copula& c, const Copula& d, int initial_resolution = 64);

// Monte Carlo cross-check: mean of C over samples drawn from the grid D.
// Returns (estimate, standard error).  Test oracle; independent of the
// integration paths above.
std::pair<double, double> biconvex_oracle(const Copula& c, const GridCopula& d,
                                          long n_samples = 1000000,
                                          std::uint64_t seed = 0x2545f4914f6cdd1dULL);

// Exact averages of a piecewise-bilinear copula along a segment / over a
// box (uniform weight).  Exposed for tests.
double segment_average(const Copula& c, double x0, double y0, double x1, double y1);
double box_average(const Copula& c, double x0, double y0, double x1, double y1);

}  // namespace concordia
