#include "fkdv/petviashvili.hpp"

#include <cmath>
#include <stdexcept>

namespace fkdv {

ProblemSpec::ProblemSpec(int p_, double c_, DispersionSymbol symbol_, GridPtr grid_)
    : p(p_), c(c_), symbol(symbol_), eps(optimal_exponent(p_)),
      grid(std::move(grid_)) {
    validate();
}

ProblemSpec::ProblemSpec(int p_, double c_, DispersionSymbol symbol_, GridPtr grid_,
                         double eps_, double tol_, int max_iter_)
    : p(p_), c(c_), symbol(symbol_), eps(eps_), tol(tol_), max_iter(max_iter_),
      grid(std::move(grid_)) {
    validate();
}

void ProblemSpec::validate() const {
    if (p < 1) throw std::invalid_argument("ProblemSpec: p must be a positive integer");
    if (!(c > 0.0)) throw std::invalid_argument("ProblemSpec: c must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("ProblemSpec: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("ProblemSpec: max_iter must be positive");
    if (!grid) throw std::invalid_argument("ProblemSpec: null grid");
    if (!std::isfinite(eps))
        throw std::invalid_argument("ProblemSpec: eps must be finite");
}

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::StabilizingFactor: return "stabilizing_factor";
        case StopReason::ConsecutiveDiff: return "consecutive_diff";
        case StopReason::Residual: return "residual";
        case StopReason::MaxIter: return "max_iter";
    }
    return "unknown";
}

Field nonlinearity(const Field& field, int p) {
    if (p < 1) throw std::invalid_argument("nonlinearity: p must be >= 1");
    Field out(field.grid());
    const auto& v = field.values();
    const double inv = 1.0 / (p + 1.0);
#pragma omp parallel for if (v.size() > 16384)
    for (std::size_t j = 0; j < v.size(); ++j) {
        double w = v[j];
        for (int q = 0; q < p; ++q) w *= v[j];
        out[j] = w * inv;
    }
    out.check_finite("nonlinearity");
    return out;
}

namespace {

// Numerator and denominator of the stabilizing factor from precomputed
// spectra of phi and N(phi).
void factor_parts(const Spectrum& phi_hat, const Spectrum& nl_hat,
                  const ProblemSpec& spec, double& num, double& den,
                  double& den_imag) {
    const auto& xi = spec.grid->wavenumbers();
    num = den = den_imag = 0.0;
    for (std::size_t k = 0; k < phi_hat.size(); ++k) {
        const double weight = spec.c + spec.symbol(xi[k]);
        num += weight * std::norm(phi_hat[k]);
        const std::complex<double> z = nl_hat[k] * std::conj(phi_hat[k]);
        den += z.real();
        den_imag += z.imag();
    }
}

double factor_from_parts(double num, double den, double den_imag) {
    if (std::fabs(den) < 1e-14 * num)
        throw std::runtime_error(
            "stabilizing_factor: degenerate iterate (near-zero denominator)");
    if (std::fabs(den_imag) > 1e-10 * std::fabs(den))
        throw std::runtime_error(
            "stabilizing_factor: denominator has a large imaginary part");
    return num / den;
}

} // namespace

double stabilizing_factor(const Field& field, const ProblemSpec& spec) {
    if (norm(field) == 0.0)
        throw std::invalid_argument("stabilizing_factor: zero field");
    const Spectrum phi_hat = forward_transform(field);
    const Spectrum nl_hat = forward_transform(nonlinearity(field, spec.p));
    double num, den, den_imag;
    factor_parts(phi_hat, nl_hat, spec, num, den, den_imag);
    return factor_from_parts(num, den, den_imag);
}

Field petviashvili_step(const Field& field, const ProblemSpec& spec) {
    const Spectrum phi_hat = forward_transform(field);
    Spectrum nl_hat = forward_transform(nonlinearity(field, spec.p));
    double num, den, den_imag;
    factor_parts(phi_hat, nl_hat, spec, num, den, den_imag);
    const double m = factor_from_parts(num, den, den_imag);
    if (!(m > 0.0))
        throw std::runtime_error("petviashvili_step: nonpositive stabilizing factor");
    const double m_eps = std::pow(m, spec.eps);
    const auto& xi = spec.grid->wavenumbers();
    for (std::size_t k = 0; k < nl_hat.size(); ++k)
        nl_hat[k] *= m_eps / (spec.c + spec.symbol(xi[k]));
    return inverse_transform(nl_hat, spec.grid);
}

double residual(const Field& field, const ProblemSpec& spec) {
    const Field lhs = apply_operator(field, spec.symbol, 1.0);
    const Field nl = nonlinearity(field, spec.p);
    double s = 0.0;
    const auto& v = field.values();
#pragma omp parallel for reduction(+ : s) if (v.size() > 16384)
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double r = lhs[j] + spec.c * v[j] - nl[j];
        s += r * r;
    }
    return std::sqrt(s);
}

Field initial_guess(const ProblemSpec& spec) {
    const double amp =
        std::pow(0.5 * spec.c * (spec.p + 1.0) * (spec.p + 2.0), 1.0 / spec.p);
    const double kappa = 0.5 * std::sqrt(spec.c);
    Field out(spec.grid);
    const auto& x = spec.grid->nodes();
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double s = 1.0 / std::cosh(kappa * x[j]);
        out[j] = amp * s * s;
    }
    return out;
}

ProfileSolution solve(const ProblemSpec& spec, const std::optional<Field>& guess) {
    spec.validate();
    Field phi = guess ? *guess : initial_guess(spec);
    if (phi.grid()->size() != spec.grid->size())
        throw std::invalid_argument("solve: guess grid does not match spec grid");
    if (norm(phi) == 0.0)
        throw std::invalid_argument("solve: zero initial guess");

    IterationReport report;
    for (int n = 1; n <= spec.max_iter; ++n) {
        const double m = stabilizing_factor(phi, spec);
        Field next = petviashvili_step(phi, spec);
        const double diff = norm_diff(next, phi);
        const double res = residual(next, spec);
        report.m_history.push_back(m);
        report.diff_history.push_back(diff);
        report.residual_history.push_back(res);
        report.iterations = n;
        phi = std::move(next);

        if (std::fabs(1.0 - m) <= spec.tol) {
            report.converged_by = StopReason::StabilizingFactor;
            break;
        }
        if (diff <= spec.tol) {
            report.converged_by = StopReason::ConsecutiveDiff;
            break;
        }
        if (res <= spec.tol) {
            report.converged_by = StopReason::Residual;
            break;
        }
    }

    double amp = phi[0], mn = phi[0];
    for (double v : phi.values()) {
        amp = std::max(amp, v);
        mn = std::min(mn, v);
    }
    return ProfileSolution{std::move(phi), spec, std::move(report), amp, mn};
}

} // namespace fkdv
