#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "llesim/dispersion.hpp"

namespace llesim {

/// Physical resonator parameters.
struct ResonatorSpec {
    double ring_radius_m = 0.0;      ///< R
    double intrinsic_q = 0.0;        ///< Qi
    double coupling_q = 0.0;         ///< Qc
    double nonlinear_coeff = 0.0;    ///< gamma, W^-1 m^-1 (0 allowed for linear runs)
    std::string dispersion_file;     ///< path to the mode table

    bool operator==(const ResonatorSpec&) const = default;
};

/// Scan parameters. Detunings are angular (rad/s), the scan length is in
/// round trips.
struct SimulationSpec {
    double pump_power_w = 0.0;               ///< Pin
    double scan_round_trips = 0.0;           ///< Tscan
    double pump_freq_hz = 0.0;               ///< f_pmp
    double detuning_init_rads = 0.0;
    double detuning_end_rads = 0.0;
    std::optional<double> detuning_stop_rads;  ///< optional ramp clamp
    std::optional<double> fixed_detuning_rads; ///< steady-state detuning, if set
    std::array<int, 2> mu_sim{0, 0};
    std::array<int, 2> mu_fit{0, 0};
    int num_probe = 1000;
    std::uint64_t seed = 0;

    bool operator==(const SimulationSpec&) const = default;
};

/// Adaptive sub-stepping knobs for the temporal solver.
struct StepControls {
    double tol = 1e-3;        ///< local relative error bound per sub-step
    int maxiter = 6;          ///< maximum halvings of a sub-step
    double step_factor = 0.1; ///< initial and maximum sub-step, round trips

    bool operator==(const StepControls&) const = default;
};

/// Linear detuning ramp over the outer steps, with an optional clamp value
/// the ramp freezes at once it has been crossed.
struct DetuningRamp {
    double start_rads = 0.0;
    double end_rads = 0.0;
    std::optional<double> stop_rads;
    std::int64_t total_steps = 0;

    bool operator==(const DetuningRamp&) const = default;
};

/// Fully resolved numerical setup: everything the stepper needs, in
/// per-round-trip units.
struct SimulationPlan {
    DispersionProfile profile;
    int n_modes = 0;
    double round_trip_time_s = 0.0;  ///< t_R = 2*pi/D1
    double round_trip_loss = 0.0;    ///< alpha' = alpha*L + theta, dimensionless
    double coupling = 0.0;           ///< theta, dimensionless
    double kerr_per_trip = 0.0;      ///< gamma * 2*pi*R, rad/W per round trip
    double pump_amp = 0.0;           ///< sqrt(Pin), sqrt(W)
    std::vector<double> linear_phase;///< t_R * D_int(mu) in rad per round trip, mu ascending
    DetuningRamp ramp;
    StepControls controls;
    int num_probe = 1000;
    std::uint64_t seed = 0;

    double pump_power_w() const { return pump_amp * pump_amp; }

    bool operator==(const SimulationPlan&) const = default;
};

/// Resolve all derived coefficients. The profile must already cover exactly
/// the sim.mu_sim grid; otherwise InconsistentWindows is thrown.
SimulationPlan build_plan(const ResonatorSpec& res, const SimulationSpec& sim,
                          const DispersionProfile& profile,
                          const StepControls& controls = {});

/// Detuning at an outer step of the ramp: linear interpolation between the
/// endpoints, frozen at stop_rads once the ramp has crossed it.
double detuning_at(const SimulationPlan& plan, std::int64_t step);

} // namespace llesim
