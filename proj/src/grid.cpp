#include "fkdv/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fkdv {

Grid::Grid(double half_length, std::size_t size)
    : half_length_(half_length), size_(size) {
    if (!(half_length > 0.0))
        throw std::invalid_argument("Grid: half_length must be positive");
    if (size == 0 || size % 2 != 0)
        throw std::invalid_argument("Grid: size must be a positive even integer");

    spacing_ = 2.0 * half_length / static_cast<double>(size);
    nodes_.resize(size);
    wavenumbers_.resize(size);

    const double dxi = M_PI / half_length;
    for (std::size_t j = 0; j < size; ++j) {
        nodes_[j] = -half_length + static_cast<double>(j) * spacing_;
        // signed (aliased) wavenumbers, k_tilde in [-N/2, N/2)
        const auto k = static_cast<long long>(j);
        const long long half = static_cast<long long>(size) / 2;
        const long long k_tilde = (k <= half) ? k : k - static_cast<long long>(size);
        wavenumbers_[j] = dxi * static_cast<double>(k_tilde);
    }
}

GridPtr make_grid(double half_length, std::size_t size) {
    return std::make_shared<Grid>(half_length, size);
}

} // namespace fkdv
