#include "fkdv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "fkdv/spectral.hpp"

namespace fkdv {

namespace {

// Trigonometric interpolant through the samples and its first two
// derivatives, evaluated by direct Fourier summation.
class TrigInterpolant {
  public:
    explicit TrigInterpolant(const Field& f)
        : coeffs_(forward_transform(f)), grid_(f.grid()) {}

    double value(double x) const { return sum(x, 0); }
    double deriv(double x) const { return sum(x, 1); }
    double deriv2(double x) const { return sum(x, 2); }

  private:
    double sum(double x, int order) const {
        const auto& xi = grid_->wavenumbers();
        const std::size_t n = coeffs_.size();
        const double shift = x + grid_->half_length();
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == n / 2) {
                // real cosine term for the Nyquist mode; dropped in the
                // derivatives like the pseudospectral convention
                if (order == 0)
                    acc += coeffs_[k].real() * std::cos(xi[k] * shift);
                continue;
            }
            std::complex<double> w = coeffs_[k] *
                std::complex<double>(std::cos(xi[k] * shift), std::sin(xi[k] * shift));
            for (int q = 0; q < order; ++q) w *= std::complex<double>(0.0, xi[k]);
            acc += w;
        }
        return acc.real();
    }

    Spectrum coeffs_;
    GridPtr grid_;
};

} // namespace

PeakEstimate peak_amplitude(const Field& profile) {
    const auto& v = profile.values();
    std::size_t j_max = 0;
    for (std::size_t j = 1; j < v.size(); ++j)
        if (v[j] > v[j_max]) j_max = j;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (j != j_max && v[j] == v[j_max])
            throw std::invalid_argument("peak_amplitude: non-unique maximum");

    const double grid_max = v[j_max];
    const double x0 = profile.grid()->node(j_max);
    const double h = profile.grid()->spacing();

    const TrigInterpolant interp(profile);
    double x = x0;
    bool ok = false;
    for (int it = 0; it < 50; ++it) {
        const double d1 = interp.deriv(x);
        const double d2 = interp.deriv2(x);
        if (d2 == 0.0) break;
        const double step = d1 / d2;
        x -= step;
        if (std::fabs(x - x0) > h) break; // left the bracketing cell
        if (std::fabs(step) <= 1e-12 * std::max(h, std::fabs(x))) {
            ok = true;
            break;
        }
    }
    if (!ok || std::fabs(x - x0) > h) return {grid_max, x0};

    double amp = interp.value(x);
    if (amp < grid_max) return {grid_max, x0};
    return {amp, x};
}

std::vector<SweepRow> speed_amplitude_sweep(const SweepSpec& sweep) {
    if (!sweep.grid) throw std::invalid_argument("speed_amplitude_sweep: null grid");
    std::vector<std::vector<SweepRow>> per_alpha(sweep.alphas.size());

    const int jobs = std::max(1, sweep.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
    for (std::size_t a = 0; a < sweep.alphas.size(); ++a) {
        const double alpha = sweep.alphas[a];
        std::vector<SweepRow>& rows = per_alpha[a];
        std::optional<Field> warm_start;
        for (double c : sweep.speeds) {
            SweepRow row{alpha, sweep.p, c, 0.0, 0, false};
            try {
                ProblemSpec spec(sweep.p, c, DispersionSymbol::fractional(alpha),
                                 sweep.grid, ProblemSpec::optimal_exponent(sweep.p),
                                 sweep.tol, sweep.max_iter);
                ProfileSolution sol = accelerated_solve(spec, sweep.accel, warm_start);
                row.iterations = sol.report.iterations;
                row.converged = sol.report.converged();
                row.amplitude = peak_amplitude(sol.profile).amplitude;
                if (row.converged) warm_start = sol.profile; // continuation in c
            } catch (const std::exception&) {
                warm_start.reset();
            }
            rows.push_back(row);
        }
    }

    std::vector<SweepRow> out;
    for (const auto& rows : per_alpha) out.insert(out.end(), rows.begin(), rows.end());
    return out;
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points) {
    const std::size_t n = points.size();
    if (n < 3)
        throw std::invalid_argument("fit_power_law: need at least 3 points");
    for (const auto& [x, y] : points)
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("fit_power_law: data must be positive");

    // initial (a, b) from the log-log linear least squares
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sxx - sx * sx;
    if (det == 0.0)
        throw std::runtime_error("fit_power_law: singular normal equations");
    double b = (nn * sxy - sx * sy) / det;
    double a = std::exp((sy - b * sx) / nn);

    auto sse_of = [&](double aa, double bb) {
        double s = 0.0;
        for (const auto& [x, y] : points) {
            const double r = y - aa * std::pow(x, bb);
            s += r * r;
        }
        return s;
    };

    // Gauss-Newton on the untransformed SSE, with step halving
    double sse = sse_of(a, b);
    for (int it = 0; it < 100; ++it) {
        double jaa = 0.0, jab = 0.0, jbb = 0.0, ga = 0.0, gb = 0.0;
        for (const auto& [x, y] : points) {
            const double f = a * std::pow(x, b);
            const double r = y - f;
            const double da = f / a;           // d f / d a = x^b
            const double db = f * std::log(x); // d f / d b
            jaa += da * da;
            jab += da * db;
            jbb += db * db;
            ga += r * da;
            gb += r * db;
        }
        const double jdet = jaa * jbb - jab * jab;
        if (jdet == 0.0) break;
        double step_a = (jbb * ga - jab * gb) / jdet;
        double step_b = (jaa * gb - jab * ga) / jdet;

        double next_sse = sse;
        double aa = a, bb = b;
        for (int half = 0; half < 30; ++half) {
            aa = a + step_a;
            bb = b + step_b;
            next_sse = sse_of(aa, bb);
            if (next_sse <= sse) break;
            step_a *= 0.5;
            step_b *= 0.5;
        }
        if (next_sse > sse) break;
        const double change = sse - next_sse;
        a = aa;
        b = bb;
        sse = next_sse;
        if (change <= 1e-12 * std::max(sse, 1e-300)) break;
    }

    double y_mean = 0.0;
    for (const auto& [x, y] : points) y_mean += y;
    y_mean /= nn;
    double ss_tot = 0.0;
    for (const auto& [x, y] : points) ss_tot += (y - y_mean) * (y - y_mean);

    FitResult fit;
    fit.a = a;
    fit.b = b;
    fit.sse = sse;
    fit.rmse = std::sqrt(sse / (nn - 2.0));
    fit.r_squared = ss_tot > 0.0 ? 1.0 - sse / ss_tot : 1.0;
    fit.n_points = static_cast<int>(n);
    return fit;
}

std::vector<std::pair<double, double>> phase_portrait(const Field& profile) {
    const Field deriv = spectral_derivative(profile);
    std::vector<std::pair<double, double>> out;
    out.reserve(profile.size());
    for (std::size_t j = 0; j < profile.size(); ++j)
        out.emplace_back(profile[j], deriv[j]);
    return out;
}

double decay_exponent(const Field& profile, double x_lo, double x_hi) {
    const double l = profile.grid()->half_length();
    if (!(0.0 < x_lo && x_lo < x_hi && x_hi < l))
        throw std::invalid_argument("decay_exponent: window must lie inside (0, l)");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j < profile.size(); ++j) {
        const double x = profile.grid()->node(j);
        if (x < x_lo || x > x_hi) continue;
        if (!(profile[j] > 0.0))
            throw std::domain_error("decay_exponent: nonpositive profile value in window");
        const double lx = std::log(x), ly = std::log(profile[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count < 2)
        throw std::invalid_argument("decay_exponent: window contains fewer than 2 nodes");
    const double nn = static_cast<double>(count);
    const double det = nn * sxx - sx * sx;
    if (det == 0.0)
        throw std::runtime_error("decay_exponent: degenerate window");
    return (nn * sxy - sx * sy) / det;
}

} // namespace fkdv
