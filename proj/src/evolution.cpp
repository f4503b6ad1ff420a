#include "fkdv/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "fkdv/analysis.hpp"
#include "fkdv/petviashvili.hpp"
#include "fkdv/spectral.hpp"

namespace fkdv {

void EvolutionSpec::validate() const {
    if (!grid) throw std::invalid_argument("EvolutionSpec: null grid");
    if (p < 1) throw std::invalid_argument("EvolutionSpec: p must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("EvolutionSpec: dt must be positive");
    if (!(t_final >= dt))
        throw std::invalid_argument("EvolutionSpec: t_final must be >= dt");
    if (!(inner_tol > 0.0))
        throw std::invalid_argument("EvolutionSpec: inner_tol must be positive");
    if (snapshot_stride < 1)
        throw std::invalid_argument("EvolutionSpec: snapshot_stride must be >= 1");
}

namespace {

// 2/3-rule truncation of a spectrum, in place.
void dealias_spectrum(Spectrum& s, const Grid& grid) {
    const std::size_t n = s.size();
    const long long half = static_cast<long long>(n) / 2;
    const long long cut = static_cast<long long>(n) / 3;
    for (std::size_t k = 0; k < n; ++k) {
        const auto kk = static_cast<long long>(k);
        const long long k_tilde = (kk <= half) ? kk : kk - static_cast<long long>(n);
        if (std::llabs(k_tilde) > cut) s[k] = 0.0;
    }
    (void)grid;
}

Spectrum nonlinear_spectrum(const Field& u, const EvolutionSpec& spec) {
    Spectrum nl_hat = forward_transform(nonlinearity(u, spec.p));
    if (spec.dealias) dealias_spectrum(nl_hat, *spec.grid);
    return nl_hat;
}

} // namespace

Field rhs(const Field& u, const EvolutionSpec& spec) {
    const auto& xi = spec.grid->wavenumbers();
    const std::size_t n = spec.grid->size();
    Spectrum u_hat = forward_transform(u);
    Spectrum nl_hat;
    if (spec.include_nonlinearity) nl_hat = nonlinear_spectrum(u, spec);

    Spectrum out(n);
#pragma omp parallel for if (n > 16384)
    for (std::size_t k = 0; k < n; ++k) {
        if (k == n / 2) {
            out[k] = 0.0; // Nyquist zeroed in the odd derivative
            continue;
        }
        const std::complex<double> ddx(0.0, xi[k]);
        std::complex<double> v = ddx * spec.symbol(xi[k]) * u_hat[k];
        if (spec.include_nonlinearity) v -= ddx * nl_hat[k];
        out[k] = v;
    }
    return inverse_transform(out, spec.grid);
}

ConservedDiagnostics diagnostics(const Field& u, const EvolutionSpec& spec) {
    const double h = spec.grid->spacing();
    const Field half_disp = apply_operator(u, spec.symbol, 0.5);
    const double denom = (spec.p + 1.0) * (spec.p + 2.0);
    double c_sum = 0.0, m_sum = 0.0, e_sum = 0.0;
    const std::size_t n = u.size();
#pragma omp parallel for reduction(+ : c_sum, m_sum, e_sum) if (n > 16384)
    for (std::size_t j = 0; j < n; ++j) {
        const double v = u[j];
        c_sum += v;
        m_sum += v * v;
        double w = v;
        for (int q = 0; q < spec.p + 1; ++q) w *= v; // v^{p+2}
        e_sum += 0.5 * half_disp[j] * half_disp[j] - w / denom;
    }
    return {h * c_sum, h * m_sum, h * e_sum};
}

Field step_implicit_midpoint(const Field& u, double tau, const EvolutionSpec& spec) {
    if (tau == 0.0)
        throw std::invalid_argument("step_implicit_midpoint: tau must be nonzero");
    const std::size_t n = spec.grid->size();
    const auto& xi = spec.grid->wavenumbers();

    const Spectrum u_hat = forward_transform(u);

    // Midpoint value v solves v = u + (tau/2) rhs(v). The linear dispersive
    // part is inverted exactly mode by mode; only the nonlinear flux is
    // iterated on.
    std::vector<std::complex<double>> lin_inv(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x = (k == n / 2) ? 0.0 : xi[k];
        const std::complex<double> ddx(0.0, x);
        lin_inv[k] = 1.0 / (1.0 - 0.5 * tau * ddx * spec.symbol(xi[k]));
    }

    Field v = u;
    Spectrum v_hat = u_hat;
    const double scale = std::sqrt(static_cast<double>(n)); // Parseval factor
    for (int it = 0; it < 100; ++it) {
        Spectrum next(n);
        if (spec.include_nonlinearity) {
            const Spectrum nl_hat = nonlinear_spectrum(v, spec);
            for (std::size_t k = 0; k < n; ++k) {
                const double x = (k == n / 2) ? 0.0 : xi[k];
                const std::complex<double> ddx(0.0, x);
                next[k] = lin_inv[k] * (u_hat[k] - 0.5 * tau * ddx * nl_hat[k]);
            }
        } else {
            for (std::size_t k = 0; k < n; ++k) next[k] = lin_inv[k] * u_hat[k];
        }
        double delta_sq = 0.0;
        for (std::size_t k = 0; k < n; ++k) delta_sq += std::norm(next[k] - v_hat[k]);
        v_hat = std::move(next);
        v = inverse_transform(v_hat, spec.grid);
        if (scale * std::sqrt(delta_sq) <= spec.inner_tol || !spec.include_nonlinearity) {
            // u+ = 2v - u
            Field out(spec.grid);
            for (std::size_t j = 0; j < n; ++j) out[j] = 2.0 * v[j] - u[j];
            out.check_finite("step_implicit_midpoint");
            return out;
        }
    }
    throw std::runtime_error(
        "step_implicit_midpoint: inner fixed-point iteration did not converge "
        "in 100 iterations; reduce dt");
}

Field step_composed(const Field& u, const EvolutionSpec& spec) {
    // Yoshida triple jump: g1 = g3 = 1/(2 - 2^{1/3}), g2 = 1 - 2 g1
    const double g1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double g2 = 1.0 - 2.0 * g1;
    Field v = step_implicit_midpoint(u, g1 * spec.dt, spec);
    v = step_implicit_midpoint(v, g2 * spec.dt, spec);
    return step_implicit_midpoint(v, g1 * spec.dt, spec);
}

namespace {

// Peak tracking that tolerates flat states: a (near-)constant field reports
// its value as amplitude and position 0.
void track_peak(const Field& u, double& amp, double& pos) {
    double lo = u[0], hi = u[0];
    for (double v : u.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo <= 1e-13 * std::max(std::fabs(hi), 1.0)) {
        amp = hi;
        pos = 0.0;
        return;
    }
    const PeakEstimate peak = peak_amplitude(u);
    amp = peak.amplitude;
    pos = peak.location;
}

} // namespace

Trajectory evolve(const Field& initial, const EvolutionSpec& spec) {
    spec.validate();
    if (initial.grid()->size() != spec.grid->size())
        throw std::invalid_argument("evolve: initial field grid mismatch");

    Trajectory traj;
    auto record = [&](double t, const Field& u) {
        double amp, pos;
        track_peak(u, amp, pos);
        traj.times.push_back(t);
        traj.snapshots.push_back(u);
        traj.diagnostics.push_back(diagnostics(u, spec));
        traj.amplitude_series.push_back(amp);
        traj.peak_position_series.push_back(pos);
    };

    Field u = initial;
    record(0.0, u);
    const auto steps = static_cast<long long>(std::llround(spec.t_final / spec.dt));
    for (long long s = 1; s <= steps; ++s) {
        u = step_composed(u, spec);
        if (s % spec.snapshot_stride == 0 || s == steps)
            record(static_cast<double>(s) * spec.dt, u);
    }
    return traj;
}

double measure_speed(const Trajectory& trajectory) {
    const std::size_t n = trajectory.times.size();
    if (n < 2)
        throw std::invalid_argument("measure_speed: need at least 2 snapshots");
    const double l = trajectory.snapshots.front().grid()->half_length();
    const double period = 2.0 * l;

    // unwrap across the periodic boundary; per-snapshot displacement < l
    std::vector<double> pos(n);
    pos[0] = trajectory.peak_position_series[0];
    for (std::size_t i = 1; i < n; ++i) {
        double d = trajectory.peak_position_series[i] - trajectory.peak_position_series[i - 1];
        d -= period * std::round(d / period);
        pos[i] = pos[i - 1] + d;
    }

    double t_mean = 0.0, p_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t_mean += trajectory.times[i];
        p_mean += pos[i];
    }
    t_mean /= static_cast<double>(n);
    p_mean /= static_cast<double>(n);
    double cov = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = trajectory.times[i] - t_mean;
        cov += dt * (pos[i] - p_mean);
        var += dt * dt;
    }
    if (var == 0.0) throw std::invalid_argument("measure_speed: degenerate time grid");
    return cov / var;
}

} // namespace fkdv
