#include "fkdv/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fkdv {

Field::Field(GridPtr grid)
    : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("Field: null grid");
    values_.assign(grid_->size(), 0.0);
}

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("Field: null grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("Field: values length does not match grid size");
}

void Field::check_finite(const char* context) const {
    for (std::size_t j = 0; j < values_.size(); ++j) {
        if (!std::isfinite(values_[j]))
            throw std::runtime_error(std::string(context) +
                                     ": non-finite value at node " + std::to_string(j));
    }
}

double norm(const Field& f) {
    double s = 0.0;
    const auto& v = f.values();
#pragma omp parallel for reduction(+ : s) if (v.size() > 16384)
    for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * v[j];
    return std::sqrt(s);
}

double norm_diff(const Field& a, const Field& b) {
    double s = 0.0;
    const auto& va = a.values();
    const auto& vb = b.values();
#pragma omp parallel for reduction(+ : s) if (va.size() > 16384)
    for (std::size_t j = 0; j < va.size(); ++j) {
        const double d = va[j] - vb[j];
        s += d * d;
    }
    return std::sqrt(s);
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::fabs(v));
    return m;
}

} // namespace fkdv
