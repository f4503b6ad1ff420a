#ifndef FKDV_EXTRAPOLATION_HPP
#define FKDV_EXTRAPOLATION_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "fkdv/petviashvili.hpp"

namespace fkdv {

struct ExtrapolationConfig {
    int mw = 6;             // width of extrapolation; mw+2 iterates per cycle
    bool safeguard = true;  // reject extrapolants that increase the residual
};

/// Thrown when the MPE coefficients cannot be normalized (sum c_i = 0).
struct DegenerateCycleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Minimal polynomial extrapolation on a sequence of mw+2 vectors
/// psi_0..psi_{mw+1}: s = sum gamma_j psi_j with gamma from the
/// least-squares problem on the first differences (c_mw = 1 normalization,
/// rank-revealing orthogonal factorization).
std::vector<double>
mpe_extrapolate(const std::vector<std::vector<double>>& iterates);

/// Field overload; all iterates must share a grid.
Field mpe_extrapolate(const std::vector<Field>& iterates);

/// Restarted MPE cycling around the Petviashvili iteration. The report counts
/// base Petviashvili steps (mw+1 per cycle); histories carry one entry per
/// cycle, evaluated on the accepted iterate.
ProfileSolution accelerated_solve(const ProblemSpec& spec,
                                  const ExtrapolationConfig& config,
                                  const std::optional<Field>& guess = std::nullopt);

namespace detail {

struct CycleResult {
    Field accepted;
    double accepted_residual;
    double plain_residual; // residual of psi_{mw+1}
    bool extrapolant_used;
};

/// One MPE cycle starting from `start`; exposed for the safeguard tests.
CycleResult run_mpe_cycle(const Field& start, const ProblemSpec& spec,
                          const ExtrapolationConfig& config);

} // namespace detail

} // namespace fkdv

#endif
