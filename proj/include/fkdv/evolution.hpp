#ifndef FKDV_EVOLUTION_HPP
#define FKDV_EVOLUTION_HPP

#include <vector>

#include "fkdv/field.hpp"
#include "fkdv/symbol.hpp"

namespace fkdv {

struct EvolutionSpec {
    GridPtr grid;
    int p = 1;
    DispersionSymbol symbol = DispersionSymbol::fractional(2.0);
    double dt = 1e-2;
    double t_final = 1.0;
    double inner_tol = 1e-12;  // implicit-stage fixed-point tolerance
    int snapshot_stride = 1;
    bool include_nonlinearity = true; // off: pure dispersive (linear) problem
    bool dealias = false;             // 2/3-rule truncation of the nonlinear term

    void validate() const;
};

/// C = integral of u, M = integral of u^2, E = Hamiltonian
/// integral of (1/2 |D^{alpha/2} u|^2 - u^{p+2}/((p+1)(p+2))),
/// all by the trapezoidal rule on the periodic grid.
struct ConservedDiagnostics {
    double mass = 0.0;      // C
    double momentum = 0.0;  // M
    double energy = 0.0;    // E
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<ConservedDiagnostics> diagnostics;
    std::vector<double> amplitude_series;
    std::vector<double> peak_position_series;
};

/// -d/dx(u^{p+1}/(p+1)) + d/dx(D^alpha u), pseudospectral.
Field rhs(const Field& u, const EvolutionSpec& spec);

ConservedDiagnostics diagnostics(const Field& u, const EvolutionSpec& spec);

/// Implicit midpoint step of size tau; the implicit stage is solved by a
/// fixed-point iteration with the linear dispersive part handled exactly in
/// transform space. Throws after 100 inner iterations without convergence.
Field step_implicit_midpoint(const Field& u, double tau, const EvolutionSpec& spec);

/// Yoshida triple-jump composition of implicit midpoint, classical order 4.
Field step_composed(const Field& u, const EvolutionSpec& spec);

Trajectory evolve(const Field& initial, const EvolutionSpec& spec);

/// Least-squares slope of the unwrapped peak positions vs. time.
double measure_speed(const Trajectory& trajectory);

} // namespace fkdv

#endif
