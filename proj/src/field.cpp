#include "llesim/field.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace llesim {

namespace {
constexpr double kHbar = 1.054571817e-34; // J*s

// Unit double in [0, 1) from the top 53 bits of a 64-bit draw. Used instead
// of the standard distributions, whose bit streams are implementation
// defined, so that a seed pins the noise field exactly.
double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
} // namespace

double FieldState::modal_energy() const {
    double sum = 0.0;
    for (const cplx& a : modal) sum += std::norm(a);
    return sum;
}

std::vector<double> make_tau_grid(const SimulationPlan& plan) {
    const int n = plan.n_modes;
    std::vector<double> tau(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        tau[static_cast<std::size_t>(j)] =
            (static_cast<double>(j) / static_cast<double>(n) - 0.5) * plan.round_trip_time_s;
    return tau;
}

FieldState field_from_modal(const SimulationPlan& plan, std::vector<cplx> modal) {
    FieldState state;
    state.tau_grid = make_tau_grid(plan);
    state.modal = std::move(modal);
    FftEngine engine(plan.n_modes, plan.profile.mu_min());
    state.envelope = engine.synthesize(state.modal);
    return state;
}

FieldState initial_field(const SimulationPlan& plan, std::uint64_t seed) {
    const double photon_power = kHbar * plan.profile.omega0 * plan.profile.d1 / (2.0 * std::numbers::pi);
    const double amp = std::sqrt(photon_power / 2.0);

    std::mt19937_64 rng(seed);
    std::vector<cplx> modal(static_cast<std::size_t>(plan.n_modes));
    for (cplx& a : modal) {
        // Box-Muller; u1 shifted into (0, 1] to keep the log finite.
        const double u1 = 1.0 - unit_double(rng);
        const double u2 = unit_double(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = cplx(amp * r * std::cos(2.0 * std::numbers::pi * u2),
                 amp * r * std::sin(2.0 * std::numbers::pi * u2));
    }
    return field_from_modal(plan, std::move(modal));
}

} // namespace llesim
