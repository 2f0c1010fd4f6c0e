#pragma once

// Builders for synthetic dispersion data and plans shared by the unit and
// acceptance suites.

#include <array>
#include <string>

#include "llesim/config.hpp"
#include "llesim/dispersion.hpp"
#include "llesim/plan.hpp"

namespace llesim::testing {

/// Table with omega(m) = omega0 + d1*(m - m0) + d2/2*(m - m0)^2 + d3/6*(m - m0)^3
/// over relative orders [mu_lo, mu_hi].
ModeTable polynomial_table(long m0, double omega0, double d1, double d2, double d3, int mu_lo,
                           int mu_hi);

/// Same table serialized into dispersion-file text.
std::string polynomial_table_csv(long m0, double omega0, double d1, double d2, double d3,
                                 int mu_lo, int mu_hi);

/// Profile with D_int(mu) = d2/2 * mu^2 assembled directly (no fitting).
DispersionProfile analytic_profile(std::array<int, 2> mu_window, double omega0, double d1,
                                   double d2);

/// The worked-example resonator: R = 23 um, Qi = Qc = 1e6, gamma = 1.55.
ResonatorSpec reference_resonator();

/// Minimal simulation spec for direct plan construction in tests.
SimulationSpec basic_sim(std::array<int, 2> mu_window, double pump_power_w, double tscan,
                         double detuning_rads);

/// Plan assembled from explicit per-round-trip coefficients, sidestepping the
/// Q-factor conversion; detuning held constant at detuning_rads.
SimulationPlan direct_plan(const DispersionProfile& profile, double alpha_prime, double theta,
                           double kerr_per_trip, double pump_power_w, double detuning_rads,
                           double tscan, int num_probe = 2, std::uint64_t seed = 1);

} // namespace llesim::testing
