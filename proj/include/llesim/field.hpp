#pragma once

#include <cstdint>
#include <vector>

#include "llesim/fft.hpp"
#include "llesim/plan.hpp"

namespace llesim {

/// Intracavity field: complex envelope on the fast-time grid together with
/// its modal mirror (ascending mu). The two arrays stay transform-consistent
/// at every observation point.
struct FieldState {
    std::vector<double> tau_grid;  ///< N samples in seconds over [-t_R/2, t_R/2)
    std::vector<cplx> envelope;    ///< E(tau_j), sqrt(W)
    std::vector<cplx> modal;       ///< A_mu, ascending mu, sqrt(W) per mode
    double t_slow = 0.0;           ///< elapsed slow time in round trips

    /// sum_mu |A_mu|^2, the total intracavity power in W.
    double modal_energy() const;
};

/// Fast-time grid for a plan: tau_j = (j/N - 1/2) * t_R.
std::vector<double> make_tau_grid(const SimulationPlan& plan);

/// Field with the given modal content (ascending mu); envelope synthesized.
FieldState field_from_modal(const SimulationPlan& plan, std::vector<cplx> modal);

/// Seedable vacuum-noise start: each mode drawn from a circular complex
/// Gaussian whose mean power is one photon per mode, hbar*omega0*D1/(2*pi),
/// expressed in W. Deterministic for a fixed seed.
FieldState initial_field(const SimulationPlan& plan, std::uint64_t seed);

} // namespace llesim
