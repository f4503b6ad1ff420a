#ifndef FKDV_FIELD_HPP
#define FKDV_FIELD_HPP

#include <cstddef>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

/// Real samples at the nodes of a Grid.
class Field {
  public:
    explicit Field(GridPtr grid);
    Field(GridPtr grid, std::vector<double> values);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double operator[](std::size_t j) const { return values_[j]; }
    double& operator[](std::size_t j) { return values_[j]; }

    /// Throws if any entry is non-finite.
    void check_finite(const char* context) const;

  private:
    GridPtr grid_;
    std::vector<double> values_;
};

double norm(const Field& f);                       // Euclidean
double norm_diff(const Field& a, const Field& b);  // ||a - b||
double max_abs(const Field& f);

} // namespace fkdv

#endif
