#include "fkdv/symbol.hpp"

#include <cmath>
#include <stdexcept>

namespace fkdv {

DispersionSymbol DispersionSymbol::fractional(double alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw std::invalid_argument("DispersionSymbol: alpha must be positive");
    return DispersionSymbol(Kind::Fractional, alpha);
}

DispersionSymbol DispersionSymbol::whitham_extended(double gamma) {
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw std::invalid_argument("DispersionSymbol: gamma must be nonnegative");
    return DispersionSymbol(Kind::WhithamExtended, gamma);
}

double DispersionSymbol::operator()(double xi) const {
    if (!std::isfinite(xi))
        throw std::domain_error("DispersionSymbol: non-finite wavenumber");
    const double a = std::fabs(xi);
    if (kind_ == Kind::Fractional) {
        return a == 0.0 ? 0.0 : std::pow(a, param_);
    }
    // tanh(a)/a has a removable singularity at 0; switch to the Taylor
    // series 1 - a^2/3 + 2a^4/15 below a small threshold.
    double t;
    if (a < 1e-4) {
        const double a2 = a * a;
        t = 1.0 - a2 / 3.0 + 2.0 * a2 * a2 / 15.0;
    } else {
        t = std::tanh(a) / a;
    }
    return std::sqrt((1.0 + param_ * xi * xi) * t);
}

} // namespace fkdv
