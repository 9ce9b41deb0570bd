#pragma once

#include "dsc/mesh.hpp"
#include "dsc/reflection.hpp"
#include "dsc/state.hpp"

#include <span>
#include <vector>

namespace dsc {

/// Successive over-relaxation settings of the divergence cleaning loop.
struct SorParams {
    double omega = 1.5;
    /// Inner tolerance on max_cell |I - (tau/rho) sum_face S(p)|, m^3/s.
    /// Zero selects eps_global / (2 * cells).
    double eps_cell = 0.0;
    /// Outer tolerance on sum_cell |I|, m^3/s.
    double eps_global = 1e-8;
    int max_inner = 200;
    int max_outer = 50;
    /// Throw NotConverged instead of returning converged = false.
    bool abort_on_not_converged = false;

    /// Throws Error unless 0 < omega < 2 and tolerances/caps are positive.
    void validate() const;
};

struct SorStats {
    int sweeps = 0;
    /// Final inner residual, m^3/s.
    double residual = 0.0;
};

struct ProjectionStats {
    int outer_iterations = 0;
    int total_sweeps = 0;
    double initial_sum = 0.0;
    /// sum_cell |I| after the loop.
    double final_sum = 0.0;
    double final_max = 0.0;
    bool converged = true;
};

/// I = sum_face u_port . f_outward.
double divergence_integral(const Mesh& mesh, int cell, const FieldState& s);
std::vector<double> divergence_integrals(const Mesh& mesh, const FieldState& s);

/// Solves (tau/rho) sum_face S(p) = I - mean(I) for the pressure increment
/// `p` (node and port values), gauge fixed by p[0] = 0. `p` must be sized
/// for the mesh; its contents are the initial guess. Throws SorDiverged.
SorStats solve_pressure(const Mesh& mesh, std::span<const double> divergence, double tau, double rho_inf,
                        const SorParams& params, ScalarField& p);

/// Face velocities -= (tau/rho) face gradient of p, node velocities -=
/// (tau/rho) nodal gradient of p, wall rules re-imposed, and p added to the
/// pressure field of the state.
void correct_velocity(const Mesh& mesh, FieldState& s, const ScalarField& p, double tau, double rho_inf);

/// Repeats {divergence, solve, correct} until sum |I| < eps_global or
/// max_outer. A state whose divergence is already below the inner
/// tolerance takes zero iterations.
ProjectionStats projection_loop(const Mesh& mesh, FieldState& s, const FluidProperties& props, double tau,
                                const SorParams& params);

} // namespace dsc
