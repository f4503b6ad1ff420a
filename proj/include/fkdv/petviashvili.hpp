#ifndef FKDV_PETVIASHVILI_HPP
#define FKDV_PETVIASHVILI_HPP

#include <optional>
#include <string>
#include <vector>

#include "fkdv/field.hpp"
#include "fkdv/spectral.hpp"
#include "fkdv/symbol.hpp"

namespace fkdv {

/// One instance of the profile equation D^alpha(phi) + c*phi = phi^{p+1}/(p+1)
/// together with the iteration controls.
struct ProblemSpec {
    int p = 1;                 // nonlinearity power
    double c = 1.0;            // wave speed, must be > 0
    DispersionSymbol symbol = DispersionSymbol::fractional(2.0);
    double eps;                // stabilizing exponent, default (p+1)/p
    double tol = 1e-10;
    int max_iter = 1000;
    GridPtr grid;

    ProblemSpec(int p_, double c_, DispersionSymbol symbol_, GridPtr grid_);
    ProblemSpec(int p_, double c_, DispersionSymbol symbol_, GridPtr grid_,
                double eps_, double tol_, int max_iter_);

    static double optimal_exponent(int p) { return (p + 1.0) / p; }

    /// Throws std::invalid_argument on violated invariants.
    void validate() const;
};

enum class StopReason { StabilizingFactor, ConsecutiveDiff, Residual, MaxIter };

const char* to_string(StopReason r);

struct IterationReport {
    int iterations = 0;
    std::vector<double> m_history;        // stabilizing factors m_n
    std::vector<double> diff_history;     // ||phi_n - phi_{n-1}||
    std::vector<double> residual_history; // ||L_h phi_n - N_h(phi_n)||
    StopReason converged_by = StopReason::MaxIter;

    bool converged() const { return converged_by != StopReason::MaxIter; }
};

struct ProfileSolution {
    Field profile;
    ProblemSpec spec;
    IterationReport report;
    double amplitude = 0.0; // maximum node value
    double min_value = 0.0; // minimum node value
};

/// phi^{p+1}/(p+1), pointwise.
Field nonlinearity(const Field& field, int p);

/// Rayleigh-type ratio sum (c + beta)|phi_hat|^2 / Re sum N(phi)_hat conj(phi_hat).
double stabilizing_factor(const Field& field, const ProblemSpec& spec);

/// phi_hat -> m^eps * N(phi)_hat / (c + beta(xi_k)).
Field petviashvili_step(const Field& field, const ProblemSpec& spec);

/// Euclidean norm of L_h(phi) - N_h(phi) at the nodes.
double residual(const Field& field, const ProblemSpec& spec);

/// A*sech^2(sqrt(c)/2 * x) with the gKdV amplitude A = (c(p+1)(p+2)/2)^{1/p}.
Field initial_guess(const ProblemSpec& spec);

/// Plain Petviashvili iteration with the three-way stopping control.
ProfileSolution solve(const ProblemSpec& spec,
                      const std::optional<Field>& guess = std::nullopt);

} // namespace fkdv

#endif
