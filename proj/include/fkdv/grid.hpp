#ifndef FKDV_GRID_HPP
#define FKDV_GRID_HPP

#include <cstddef>
#include <memory>
#include <vector>

namespace fkdv {

/// Uniform periodic collocation grid on (-l, l) with N nodes
/// x_j = -l + j*h, h = 2l/N, and signed wavenumbers
/// xi_k = (pi/l)*k_tilde, k_tilde in [-N/2, N/2).
class Grid {
  public:
    Grid(double half_length, std::size_t size);

    double half_length() const { return half_length_; }
    std::size_t size() const { return size_; }
    double spacing() const { return spacing_; }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& wavenumbers() const { return wavenumbers_; }

    double node(std::size_t j) const { return nodes_[j]; }
    double wavenumber(std::size_t k) const { return wavenumbers_[k]; }

  private:
    double half_length_;
    std::size_t size_;
    double spacing_;
    std::vector<double> nodes_;
    std::vector<double> wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double half_length, std::size_t size);

} // namespace fkdv

#endif
