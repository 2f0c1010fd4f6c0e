#pragma once

#include <optional>
#include <span>
#include <vector>

#include "llesim/fft.hpp"
#include "llesim/plan.hpp"

namespace llesim {

/// Steady-state modal field at a fixed detuning.
struct SteadySolution {
    std::vector<cplx> modal;   ///< ascending mu
    double residual_norm = 0.0;
    int iterations = 0;
    double detuning_rads = 0.0;
    bool converged = false;
};

/// Right-hand side of the evolution equation at fixed detuning, evaluated on
/// modal amplitudes (ascending mu):
///   F_mu = (-alpha'/2 + i*(delta*t_R - t_R*D_int(mu))) * A_mu
///          + i*gamma*L*T[|E|^2 E]_mu + sqrt(theta)*sqrt(Pin)*delta_{mu,0}
/// with T the modal image of the pointwise Kerr product under the grid's
/// transform convention. Zero exactly at a steady state.
std::vector<cplx> steady_residual(std::span<const cplx> modal, const SimulationPlan& plan,
                                  double delta_omega_rads);

/// Positive real roots of the homogeneous (flat-dispersion, single-mode)
/// steady-state condition
///   [alpha'^2/4 + (delta*t_R + gamma*L*P)^2] * P = theta * Pin,
/// ascending. Used for the default Newton starting point.
std::vector<double> cw_intensity_roots(const SimulationPlan& plan, double delta_omega_rads);

/// The homogeneous steady field with intracavity power P on the mu = 0 line.
cplx cw_amplitude(const SimulationPlan& plan, double delta_omega_rads, double intensity_w);

/// Damped Newton-Raphson on the 2N-real system with an analytically
/// assembled Jacobian and Armijo backtracking on the residual norm.
/// Without an initial guess, starts from the lowest-power CW root.
/// Convergence: residual_norm <= 1e-10 * max(1, sqrt(theta*Pin)). After 50
/// iterations the best iterate is returned with converged = false. Throws
/// SingularJacobian when the linear solve breaks down.
SteadySolution solve_steady_state(const SimulationPlan& plan, double delta_omega_rads,
                                  const std::optional<std::vector<cplx>>& initial_guess = std::nullopt);

} // namespace llesim
