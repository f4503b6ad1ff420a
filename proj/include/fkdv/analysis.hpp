#ifndef FKDV_ANALYSIS_HPP
#define FKDV_ANALYSIS_HPP

#include <utility>
#include <vector>

#include "fkdv/extrapolation.hpp"
#include "fkdv/field.hpp"

namespace fkdv {

struct PeakEstimate {
    double amplitude = 0.0;
    double location = 0.0;
};

/// Continuous peak of the trigonometric interpolant: the grid maximum is
/// refined by Newton iteration on the interpolant's derivative, with a
/// fallback to the grid maximum if Newton leaves the bracketing cell.
/// Throws on a non-unique grid maximum.
PeakEstimate peak_amplitude(const Field& profile);

struct SweepSpec {
    int p = 1;
    std::vector<double> alphas;
    std::vector<double> speeds;
    GridPtr grid;
    double tol = 1e-10;
    int max_iter = 1000;
    ExtrapolationConfig accel;
    int jobs = 1;
};

struct SweepRow {
    double alpha = 0.0;
    int p = 1;
    double c = 0.0;
    double amplitude = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// For each alpha, solves along the speed list with continuation (each solve
/// warm-started from the previous speed's profile). Failed rows are recorded
/// with converged = false; the sweep never aborts.
std::vector<SweepRow> speed_amplitude_sweep(const SweepSpec& sweep);

struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double sse = 0.0;
    double r_squared = 0.0;
    double rmse = 0.0;
    int n_points = 0;
};

/// Fits f(x) = a*x^b: linear least squares on (ln x, ln y) refined by
/// Gauss-Newton on the untransformed SSE. Requires n >= 3 positive points.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points);

/// (phi_j, phi'_j) pairs with the derivative by pseudospectral differentiation.
std::vector<std::pair<double, double>> phase_portrait(const Field& profile);

/// Least-squares slope of ln(phi) vs. ln(x) over x in (x_lo, x_hi);
/// approximately -(1 + alpha) for an algebraically decaying tail.
double decay_exponent(const Field& profile, double x_lo, double x_hi);

} // namespace fkdv

#endif
