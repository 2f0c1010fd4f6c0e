#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "llesim/field.hpp"
#include "llesim/steady.hpp"
#include "llesim/stepper.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace llesim;
using namespace llesim::testing;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kOmega0 = 2.0 * kPi * 191e12;
constexpr double kD1 = 2.0 * kPi * 1e12;

double l2(const std::vector<cplx>& v) {
    double sum = 0.0;
    for (const cplx& a : v) sum += std::norm(a);
    return std::sqrt(sum);
}

double l2_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
    return std::sqrt(sum);
}

// Flat-dispersion plan with explicit per-trip coefficients.
SimulationPlan flat_plan(int mu_lo, int mu_hi, double alpha_prime, double theta, double kerr,
                         double pin) {
    const DispersionProfile profile = analytic_profile({mu_lo, mu_hi}, kOmega0, kD1, 0.0);
    return direct_plan(profile, alpha_prime, theta, kerr, pin, 0.0, 10);
}
} // namespace

TEST_CASE("residual vanishes for the unpumped empty cavity") {
    const SimulationPlan plan = flat_plan(-8, 8, 2.4e-3, 1.2e-3, 2.24e-4, 0.0);
    const std::vector<cplx> zero(static_cast<std::size_t>(plan.n_modes), cplx(0.0, 0.0));
    const std::vector<cplx> residual = steady_residual(zero, plan, -1e9);
    CHECK(l2(residual) == 0.0);
}

TEST_CASE("residual of the empty pumped cavity is the single drive entry") {
    const SimulationPlan plan = flat_plan(-8, 8, 2.4e-3, 1.2e-3, 2.24e-4, 0.15);
    const std::vector<cplx> zero(static_cast<std::size_t>(plan.n_modes), cplx(0.0, 0.0));
    const std::vector<cplx> residual = steady_residual(zero, plan, -1e9);

    const std::size_t pump = static_cast<std::size_t>(-plan.profile.mu_min());
    const double drive = std::sqrt(plan.coupling) * plan.pump_amp;
    for (std::size_t k = 0; k < residual.size(); ++k) {
        if (k == pump)
            CHECK(std::abs(residual[k] - cplx(drive, 0.0)) <= 1e-15);
        else
            CHECK(std::abs(residual[k]) <= 1e-18);
    }
}

TEST_CASE("residual is machine-zero at the CW cubic root") {
    const SimulationPlan plan = flat_plan(-8, 8, 2.4e-3, 1.2e-3, 2.24e-4, 0.02);
    const double detuning = -2.0 * kPi * 0.4e9;
    const double delta_phase = detuning * plan.round_trip_time_s;

    const std::vector<double> roots = cw_cubic_roots_oracle(
        plan.round_trip_loss, delta_phase, plan.kerr_per_trip, plan.coupling * plan.pump_power_w());
    REQUIRE_FALSE(roots.empty());

    std::vector<cplx> modal(static_cast<std::size_t>(plan.n_modes), cplx(0.0, 0.0));
    modal[static_cast<std::size_t>(-plan.profile.mu_min())] =
        cw_amplitude(plan, detuning, roots.front());
    const std::vector<cplx> residual = steady_residual(modal, plan, detuning);
    CHECK(l2(residual) <= 1e-10 * std::sqrt(plan.coupling * plan.pump_power_w()));
}

TEST_CASE("library cubic roots agree with the oracle bracketing") {
    const SimulationPlan plan = flat_plan(-4, 4, 2.4e-3, 1.2e-3, 2.24e-4, 0.025);
    for (const double ghz : {0.5, 0.1, -0.2, -0.5, -1.0, -2.0}) {
        const double detuning = 2.0 * kPi * ghz * 1e9;
        const double delta_phase = detuning * plan.round_trip_time_s;
        const std::vector<double> lib = cw_intensity_roots(plan, detuning);
        const std::vector<double> oracle =
            cw_cubic_roots_oracle(plan.round_trip_loss, delta_phase, plan.kerr_per_trip,
                                  plan.coupling * plan.pump_power_w());
        REQUIRE(lib.size() == oracle.size());
        for (std::size_t i = 0; i < lib.size(); ++i)
            CHECK(lib[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
    }
}

TEST_CASE("Pin=0 with a zero guess converges immediately to zero") {
    const SimulationPlan plan = flat_plan(-8, 8, 2.4e-3, 1.2e-3, 2.24e-4, 0.0);
    const SteadySolution solution = solve_steady_state(plan, -1e9);
    CHECK(solution.converged);
    CHECK(solution.iterations <= 1);
    CHECK(l2(solution.modal) == 0.0);
    CHECK(solution.residual_norm == 0.0);
}

TEST_CASE("flat dispersion solves to the CW branch at the cubic root") {
    const SimulationPlan plan = flat_plan(-8, 8, 2.4e-3, 1.2e-3, 2.24e-4, 0.02);
    for (const double ghz : {0.4, 0.0, -0.3, -0.8}) {
        const double detuning = 2.0 * kPi * ghz * 1e9;
        const SteadySolution solution = solve_steady_state(plan, detuning);
        REQUIRE(solution.converged);

        const double delta_phase = detuning * plan.round_trip_time_s;
        const std::vector<double> roots =
            cw_cubic_roots_oracle(plan.round_trip_loss, delta_phase, plan.kerr_per_trip,
                                  plan.coupling * plan.pump_power_w());

        const std::size_t pump = static_cast<std::size_t>(-plan.profile.mu_min());
        const double power = std::norm(solution.modal[pump]);
        // Only the pump line is occupied.
        for (std::size_t k = 0; k < solution.modal.size(); ++k)
            if (k != pump) CHECK(std::abs(solution.modal[k]) <= 1e-14);

        bool matches_a_root = false;
        for (const double root : roots)
            if (root > 0.0 && std::abs(power - root) <= 1e-8 * root) matches_a_root = true;
        CHECK(matches_a_root);
    }
}

TEST_CASE("converged solutions are fixed points of the temporal stepper") {
    const SimulationPlan plan = flat_plan(-8, 8, 2.4e-3, 1.2e-3, 2.24e-4, 0.02);
    const double detuning = -2.0 * kPi * 0.6e9;
    const SteadySolution solution = solve_steady_state(plan, detuning);
    REQUIRE(solution.converged);

    FieldState state = field_from_modal(plan, solution.modal);
    // One full round trip at the solver's finest default granularity.
    for (int s = 0; s < 10; ++s) state = step_once(state, plan, detuning, 0.1);
    const double change = l2_diff(state.modal, solution.modal);
    CHECK(change <= 1e-8 * std::max(l2(solution.modal), 1e-30));
}

TEST_CASE("unpumped steady states keep the phase gauge") {
    // Any solution of the Pin=0 system stays a solution under a global phase.
    const SimulationPlan plan = flat_plan(-6, 6, 2.4e-3, 1.2e-3, 2.24e-4, 0.0);
    std::vector<cplx> modal(static_cast<std::size_t>(plan.n_modes), cplx(0.0, 0.0));
    const std::vector<cplx> base = steady_residual(modal, plan, -1e9);
    CHECK(l2(base) == 0.0);

    for (const double phase : {0.3, 1.2, 2.9}) {
        std::vector<cplx> rotated = modal;
        for (cplx& a : rotated) a *= std::polar(1.0, phase);
        CHECK(l2(steady_residual(rotated, plan, -1e9)) == 0.0);
    }
}

TEST_CASE("a multi-mode residual decays under Newton from a perturbed start") {
    const SimulationPlan plan = flat_plan(-6, 6, 2.4e-3, 1.2e-3, 2.24e-4, 0.02);
    const double detuning = -2.0 * kPi * 0.5e9;

    std::vector<cplx> guess(static_cast<std::size_t>(plan.n_modes), cplx(0.0, 0.0));
    const std::vector<double> roots = cw_intensity_roots(plan, detuning);
    guess[static_cast<std::size_t>(-plan.profile.mu_min())] =
        cw_amplitude(plan, detuning, roots.front()) * 1.05;
    for (std::size_t k = 0; k < guess.size(); ++k) guess[k] += cplx(1e-4 * (k % 3), -1e-4);

    const SteadySolution solution = solve_steady_state(plan, detuning, guess);
    CHECK(solution.converged);
    CHECK(solution.residual_norm <= 1e-10 * std::max(1.0, std::sqrt(plan.coupling * plan.pump_power_w())));
}
