#ifndef FKDV_SPECTRAL_HPP
#define FKDV_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "fkdv/field.hpp"
#include "fkdv/symbol.hpp"

namespace fkdv {

using Spectrum = std::vector<std::complex<double>>;

/// Discrete Fourier coefficients, normalized by 1/N so that the mode-0
/// coefficient equals the mean of the samples. Ordering follows the signed
/// wavenumbers of the grid (k = 0..N-1 with k > N/2 aliased to negative).
Spectrum forward_transform(const Field& field);

/// Inverse of forward_transform. The imaginary residue of the synthesis is
/// truncated; it is checked to stay below 1e-12 * ||coefficients||.
Field inverse_transform(const Spectrum& coefficients, const GridPtr& grid);

/// Applies the Fourier multiplier beta(xi_k)^power on the signed wavenumbers.
Field apply_operator(const Field& field, const DispersionSymbol& symbol,
                     double power = 1.0);

/// d/dx via the multiplier i*xi_k, with the Nyquist mode zeroed.
Field spectral_derivative(const Field& field);

namespace ref {

// Serial reference kernels (naive O(N^2) DFT); used by the tests and the
// benchmark to cross-check the FFT/OpenMP production path.
Spectrum forward_transform(const Field& field);
Field inverse_transform(const Spectrum& coefficients, const GridPtr& grid);
Field apply_operator(const Field& field, const DispersionSymbol& symbol,
                     double power = 1.0);
Field spectral_derivative(const Field& field);

} // namespace ref

} // namespace fkdv

#endif
