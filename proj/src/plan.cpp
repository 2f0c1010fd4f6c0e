#include "llesim/plan.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "llesim/errors.hpp"

namespace llesim {

SimulationPlan build_plan(const ResonatorSpec& res, const SimulationSpec& sim,
                          const DispersionProfile& profile, const StepControls& controls) {
    if (!(res.ring_radius_m > 0.0)) throw InvalidValue("ring radius must be positive");
    if (!(res.intrinsic_q > 0.0) || !(res.coupling_q > 0.0))
        throw InvalidValue("quality factors must be positive");
    if (sim.pump_power_w < 0.0) throw InvalidValue("pump power must be non-negative");
    if (!(sim.scan_round_trips >= 1.0)) throw InvalidValue("Tscan must be at least one round trip");
    if (sim.num_probe < 2) throw InvalidValue("num_probe must be at least 2");
    if (sim.mu_sim[0] > 0 || sim.mu_sim[1] < 0 || sim.mu_fit[0] > 0 || sim.mu_fit[1] < 0)
        throw InvalidValue("mode windows must contain the pump mode (mu = 0)");

    if (profile.mu_grid.empty() || profile.mu_min() != sim.mu_sim[0] || profile.mu_max() != sim.mu_sim[1])
        throw InconsistentWindows("dispersion profile grid [" +
                                  std::to_string(profile.mu_grid.empty() ? 0 : profile.mu_min()) + ", " +
                                  std::to_string(profile.mu_grid.empty() ? 0 : profile.mu_max()) +
                                  "] does not match mu_sim [" + std::to_string(sim.mu_sim[0]) + ", " +
                                  std::to_string(sim.mu_sim[1]) + "]");

    SimulationPlan plan;
    plan.profile = profile;
    plan.n_modes = profile.n_modes();
    plan.round_trip_time_s = 2.0 * std::numbers::pi / profile.d1;

    const double ring_length = 2.0 * std::numbers::pi * res.ring_radius_m;
    const double omega0_tr = profile.omega0 * plan.round_trip_time_s;
    const double intrinsic_loss = omega0_tr / res.intrinsic_q; // alpha * L
    plan.coupling = omega0_tr / res.coupling_q;                // theta
    plan.round_trip_loss = intrinsic_loss + plan.coupling;     // alpha'
    plan.kerr_per_trip = res.nonlinear_coeff * ring_length;
    plan.pump_amp = std::sqrt(sim.pump_power_w);

    plan.linear_phase.resize(plan.n_modes);
    for (int k = 0; k < plan.n_modes; ++k)
        plan.linear_phase[k] = plan.round_trip_time_s * profile.dint[k];

    plan.ramp.start_rads = sim.detuning_init_rads;
    plan.ramp.end_rads = sim.detuning_end_rads;
    plan.ramp.stop_rads = sim.detuning_stop_rads;
    plan.ramp.total_steps = static_cast<std::int64_t>(std::llround(sim.scan_round_trips));

    plan.controls = controls;
    plan.num_probe = sim.num_probe;
    plan.seed = sim.seed;
    return plan;
}

double detuning_at(const SimulationPlan& plan, std::int64_t step) {
    const DetuningRamp& ramp = plan.ramp;
    const double fraction =
        ramp.total_steps > 0 ? static_cast<double>(step) / static_cast<double>(ramp.total_steps) : 0.0;
    const double linear = ramp.start_rads + (ramp.end_rads - ramp.start_rads) * fraction;
    if (ramp.stop_rads) {
        const double stop = *ramp.stop_rads;
        const bool passed = ramp.end_rads >= ramp.start_rads ? linear >= stop : linear <= stop;
        if (passed) return stop;
    }
    return linear;
}

} // namespace llesim
