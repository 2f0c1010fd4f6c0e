#include "support/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace llesim::testing {

ModeTable polynomial_table(long m0, double omega0, double d1, double d2, double d3, int mu_lo,
                           int mu_hi) {
    ModeTable table;
    for (int mu = mu_lo; mu <= mu_hi; ++mu) {
        const double omega = omega0 + d1 * mu + 0.5 * d2 * mu * mu +
                             d3 / 6.0 * mu * mu * mu;
        table.rows.push_back({m0 + mu, omega / (2.0 * std::numbers::pi)});
    }
    return table;
}

std::string polynomial_table_csv(long m0, double omega0, double d1, double d2, double d3,
                                 int mu_lo, int mu_hi) {
    const ModeTable table = polynomial_table(m0, omega0, d1, d2, d3, mu_lo, mu_hi);
    std::string text;
    char line[64];
    for (const ModeRow& row : table.rows) {
        std::snprintf(line, sizeof(line), "%ld,%.17g\n", row.order, row.freq_hz);
        text += line;
    }
    return text;
}

DispersionProfile analytic_profile(std::array<int, 2> mu_window, double omega0, double d1,
                                   double d2) {
    DispersionProfile profile;
    profile.d1 = d1;
    profile.omega0 = omega0;
    profile.m0 = 1000;
    profile.neff_pmp = 1.0;
    profile.ng_pmp = 1.0;
    profile.fit_window = mu_window;
    for (int mu = mu_window[0]; mu <= mu_window[1]; ++mu) {
        profile.mu_grid.push_back(mu);
        profile.dint.push_back(0.5 * d2 * mu * mu);
        profile.extrapolated_mask.push_back(0);
    }
    return profile;
}

ResonatorSpec reference_resonator() {
    ResonatorSpec res;
    res.ring_radius_m = 23e-6;
    res.intrinsic_q = 1e6;
    res.coupling_q = 1e6;
    res.nonlinear_coeff = 1.55;
    res.dispersion_file = "";
    return res;
}

SimulationPlan direct_plan(const DispersionProfile& profile, double alpha_prime, double theta,
                           double kerr_per_trip, double pump_power_w, double detuning_rads,
                           double tscan, int num_probe, std::uint64_t seed) {
    SimulationPlan plan;
    plan.profile = profile;
    plan.n_modes = profile.n_modes();
    plan.round_trip_time_s = 2.0 * std::numbers::pi / profile.d1;
    plan.round_trip_loss = alpha_prime;
    plan.coupling = theta;
    plan.kerr_per_trip = kerr_per_trip;
    plan.pump_amp = std::sqrt(pump_power_w);
    plan.linear_phase.resize(profile.dint.size());
    for (std::size_t k = 0; k < profile.dint.size(); ++k)
        plan.linear_phase[k] = plan.round_trip_time_s * profile.dint[k];
    plan.ramp.start_rads = detuning_rads;
    plan.ramp.end_rads = detuning_rads;
    plan.ramp.total_steps = static_cast<std::int64_t>(std::llround(tscan));
    plan.num_probe = num_probe;
    plan.seed = seed;
    return plan;
}

SimulationSpec basic_sim(std::array<int, 2> mu_window, double pump_power_w, double tscan,
                         double detuning_rads) {
    SimulationSpec sim;
    sim.pump_power_w = pump_power_w;
    sim.scan_round_trips = tscan;
    sim.pump_freq_hz = 191e12;
    sim.detuning_init_rads = detuning_rads;
    sim.detuning_end_rads = detuning_rads;
    sim.mu_sim = mu_window;
    sim.mu_fit = mu_window;
    return sim;
}

} // namespace llesim::testing
