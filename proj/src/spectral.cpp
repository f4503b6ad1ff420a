#include "fkdv/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fkdv {

namespace {

// Cached FFTW plans per transform size. Planning is not thread-safe, so it is
// guarded by a mutex; execution through the new-array interface is.
class PlanCache {
  public:
    struct Plans {
        fftw_plan forward;
        fftw_plan backward;
    };

    static const Plans& get(std::size_t n) {
        static PlanCache cache;
        std::lock_guard<std::mutex> lock(cache.mutex_);
        auto it = cache.plans_.find(n);
        if (it != cache.plans_.end()) return it->second;

        fftw_complex* buf = fftw_alloc_complex(n);
        Plans p;
        p.forward = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
        p.backward = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_free(buf);
        return cache.plans_.emplace(n, p).first->second;
    }

  private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::size_t, Plans> plans_;
};

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

double spectrum_norm(const Spectrum& s) {
    double acc = 0.0;
    for (const auto& z : s) acc += std::norm(z);
    return std::sqrt(acc);
}

} // namespace

Spectrum forward_transform(const Field& field) {
    field.check_finite("forward_transform");
    const std::size_t n = field.size();
    const auto& plans = PlanCache::get(n);

    FftwBuffer buf(n);
    const auto& v = field.values();
#pragma omp parallel for if (n > 16384)
    for (std::size_t j = 0; j < n; ++j) {
        buf.data[j][0] = v[j];
        buf.data[j][1] = 0.0;
    }
    fftw_execute_dft(plans.forward, buf.data, buf.data);

    Spectrum out(n);
    const double scale = 1.0 / static_cast<double>(n);
#pragma omp parallel for if (n > 16384)
    for (std::size_t k = 0; k < n; ++k)
        out[k] = {buf.data[k][0] * scale, buf.data[k][1] * scale};
    return out;
}

Field inverse_transform(const Spectrum& coefficients, const GridPtr& grid) {
    if (!grid) throw std::invalid_argument("inverse_transform: null grid");
    const std::size_t n = grid->size();
    if (coefficients.size() != n)
        throw std::invalid_argument("inverse_transform: coefficient length mismatch");
    const auto& plans = PlanCache::get(n);

    FftwBuffer buf(n);
#pragma omp parallel for if (n > 16384)
    for (std::size_t k = 0; k < n; ++k) {
        buf.data[k][0] = coefficients[k].real();
        buf.data[k][1] = coefficients[k].imag();
    }
    fftw_execute_dft(plans.backward, buf.data, buf.data);

    Field out(grid);
    double imag_sq = 0.0;
#pragma omp parallel for reduction(+ : imag_sq) if (n > 16384)
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = buf.data[j][0];
        imag_sq += buf.data[j][1] * buf.data[j][1];
    }
    const double ref = spectrum_norm(coefficients) * static_cast<double>(n);
    if (std::sqrt(imag_sq) > 1e-12 * std::max(ref, 1e-300))
        throw std::runtime_error(
            "inverse_transform: imaginary residue exceeds tolerance "
            "(coefficients are not conjugate-symmetric)");
    out.check_finite("inverse_transform");
    return out;
}

Field apply_operator(const Field& field, const DispersionSymbol& symbol,
                     double power) {
    Spectrum coeffs = forward_transform(field);
    const auto& xi = field.grid()->wavenumbers();
    const std::size_t n = coeffs.size();
#pragma omp parallel for if (n > 16384)
    for (std::size_t k = 0; k < n; ++k) {
        const double beta = symbol(xi[k]);
        const double mult = (power == 1.0) ? beta
                            : (beta == 0.0 && power > 0.0) ? 0.0
                                                           : std::pow(beta, power);
        coeffs[k] *= mult;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!std::isfinite(coeffs[k].real()) || !std::isfinite(coeffs[k].imag()))
            throw std::runtime_error("apply_operator: non-finite multiplier result at mode " +
                                     std::to_string(k));
    }
    return inverse_transform(coeffs, field.grid());
}

Field spectral_derivative(const Field& field) {
    Spectrum coeffs = forward_transform(field);
    const auto& xi = field.grid()->wavenumbers();
    const std::size_t n = coeffs.size();
#pragma omp parallel for if (n > 16384)
    for (std::size_t k = 0; k < n; ++k) {
        if (k == n / 2) {
            coeffs[k] = 0.0; // Nyquist zeroed for the odd-order derivative
        } else {
            coeffs[k] *= std::complex<double>(0.0, xi[k]);
        }
    }
    return inverse_transform(coeffs, field.grid());
}

namespace ref {

Spectrum forward_transform(const Field& field) {
    const std::size_t n = field.size();
    Spectrum out(n);
    const double w = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double phase = w * static_cast<double>(k) * static_cast<double>(j);
            acc += field[j] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out[k] = acc / static_cast<double>(n);
    }
    return out;
}

Field inverse_transform(const Spectrum& coefficients, const GridPtr& grid) {
    const std::size_t n = grid->size();
    if (coefficients.size() != n)
        throw std::invalid_argument("ref::inverse_transform: length mismatch");
    Field out(grid);
    const double w = 2.0 * M_PI / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double phase = w * static_cast<double>(k) * static_cast<double>(j);
            acc += coefficients[k] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out[j] = acc.real();
    }
    return out;
}

Field apply_operator(const Field& field, const DispersionSymbol& symbol,
                     double power) {
    Spectrum coeffs = ref::forward_transform(field);
    const auto& xi = field.grid()->wavenumbers();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const double beta = symbol(xi[k]);
        coeffs[k] *= (beta == 0.0 && power > 0.0) ? 0.0 : std::pow(beta, power);
    }
    return ref::inverse_transform(coeffs, field.grid());
}

Field spectral_derivative(const Field& field) {
    Spectrum coeffs = ref::forward_transform(field);
    const auto& xi = field.grid()->wavenumbers();
    const std::size_t n = coeffs.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (k == n / 2)
            coeffs[k] = 0.0;
        else
            coeffs[k] *= std::complex<double>(0.0, xi[k]);
    }
    return ref::inverse_transform(coeffs, field.grid());
}

} // namespace ref

} // namespace fkdv
