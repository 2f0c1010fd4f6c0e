#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "llesim/analysis.hpp"
#include "llesim/errors.hpp"
#include "llesim/field.hpp"
#include "llesim/steady.hpp"
#include "support/synthetic.hpp"

using namespace llesim;
using namespace llesim::testing;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kOmega0 = 2.0 * kPi * 191e12;
constexpr double kD1 = 2.0 * kPi * 1e12;

SimulationPlan small_plan(double theta, double pin, double alpha_prime = 2.4e-3,
                          double kerr = 0.0) {
    const DispersionProfile profile = analytic_profile({-4, 4}, kOmega0, kD1, 2.0 * kPi * 10e6);
    return direct_plan(profile, alpha_prime, theta, kerr, pin, 0.0, 10);
}

EvolutionRecord single_snapshot(const SimulationPlan& plan, std::vector<cplx> modal,
                                double comb_power_w) {
    EvolutionRecord record;
    record.plan_echo = plan;
    record.snapshots.push_back(std::move(modal));
    record.detuning_trace.push_back(0.0);
    record.comb_power_trace.push_back(comb_power_w);
    return record;
}
} // namespace

TEST_CASE("decoupled ring transmits only the pump") {
    const SimulationPlan plan = small_plan(0.0, 0.04);
    std::vector<cplx> modal(9, cplx(0.3, -0.1));
    const std::vector<cplx> wg = out_couple(modal, plan);
    for (std::size_t k = 0; k < wg.size(); ++k) {
        if (k == 4)
            CHECK(std::abs(wg[k] + cplx(std::sqrt(0.04), 0.0)) <= 1e-15);
        else
            CHECK(std::abs(wg[k]) == 0.0);
    }
}

TEST_CASE("empty ring transmission equals the input power") {
    const SimulationPlan plan = small_plan(1.2e-3, 0.15);
    const std::vector<cplx> wg =
        out_couple(std::vector<cplx>(9, cplx(0.0, 0.0)), plan);
    CHECK(std::norm(wg[4]) == doctest::Approx(0.15).epsilon(1e-15));
}

TEST_CASE("critical coupling extinguishes the cold-cavity pump line") {
    // Linear cold cavity, zero detuning: A = 2*sqrt(theta*Pin)/alpha', and
    // Qi == Qc means alpha' = 2*theta.
    const double theta = 1.2e-3;
    const double pin = 0.1;
    const SimulationPlan plan = small_plan(theta, pin, 2.0 * theta, 0.0);

    const SteadySolution solution = solve_steady_state(plan, 0.0);
    REQUIRE(solution.converged);
    const std::vector<cplx> wg = out_couple(solution.modal, plan);
    CHECK(std::norm(wg[4]) <= 1e-6 * pin);
}

TEST_CASE("comb power excludes the pump line and normalizes to the peak") {
    const SimulationPlan plan = small_plan(1.2e-3, 0.0);

    SUBCASE("pump-only snapshots give zero everywhere") {
        std::vector<cplx> dc(9, cplx(0.0, 0.0));
        dc[4] = cplx(1.0, 0.0);
        EvolutionRecord record = single_snapshot(plan, dc, 0.0);
        record.snapshots.push_back(record.snapshots.front());
        record.detuning_trace.push_back(0.0);
        record.comb_power_trace.push_back(0.0);
        const std::vector<double> trace = comb_power(record);
        for (const double v : trace) CHECK(v == 0.0);
    }

    SUBCASE("two snapshots with comb energies 1 and 2 normalize to 0.5 and 1") {
        EvolutionRecord record = single_snapshot(plan, std::vector<cplx>(9), 1.0);
        record.snapshots.push_back(std::vector<cplx>(9));
        record.detuning_trace.push_back(0.0);
        record.comb_power_trace.push_back(2.0);
        const std::vector<double> trace = comb_power(record);
        CHECK(trace[0] == doctest::Approx(0.5));
        CHECK(trace[1] == doctest::Approx(1.0));
    }

    SUBCASE("global phase rotation leaves the trace unchanged") {
        std::vector<cplx> modal(9);
        for (int k = 0; k < 9; ++k) modal[static_cast<std::size_t>(k)] = cplx(0.1 * k, -0.05 * k);
        double comb = 0.0;
        for (std::size_t k = 0; k < modal.size(); ++k)
            if (k != 4) comb += std::norm(modal[k]);

        EvolutionRecord record = single_snapshot(plan, modal, comb);
        const std::vector<double> base = comb_power(record);

        std::vector<cplx> rotated = modal;
        for (cplx& a : rotated) a *= std::polar(1.0, 1.1);
        double comb_rot = 0.0;
        for (std::size_t k = 0; k < rotated.size(); ++k)
            if (k != 4) comb_rot += std::norm(rotated[k]);
        EvolutionRecord rotated_record = single_snapshot(plan, rotated, comb_rot);
        const std::vector<double> after = comb_power(rotated_record);
        CHECK(after[0] == doctest::Approx(base[0]).epsilon(1e-12));
    }
}

TEST_CASE("spectrum converts powers to dBm with the presentation floor") {
    const SimulationPlan plan = small_plan(1.2e-3, 0.0);
    std::vector<cplx> modal(9, cplx(0.0, 0.0));
    modal[4] = cplx(std::sqrt(1e-3), 0.0); // exactly 1 mW
    modal[5] = cplx(1.0, 0.0);             // 1 W
    const EvolutionRecord record = single_snapshot(plan, modal, 1.0);

    const Spectrum spectrum = spectrum_at(record, 0, plan);
    CHECK(spectrum.s_ring_dbm[4] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(spectrum.s_ring_dbm[5] == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(spectrum.s_ring_dbm[0] == -170.0);

    // Frequencies follow the dispersion-shifted resonance grid, increasing.
    for (std::size_t k = 1; k < spectrum.freq_hz.size(); ++k)
        CHECK(spectrum.freq_hz[k] > spectrum.freq_hz[k - 1]);
    CHECK(spectrum.freq_hz[4] == doctest::Approx(191e12).epsilon(1e-12));

    CHECK_THROWS_AS(spectrum_at(record, 1, plan), IndexOutOfRange);
    CHECK_THROWS_AS(spectrum_at(record, -1, plan), IndexOutOfRange);
}

TEST_CASE("spectrum powers invert back to the stored snapshot above the floor") {
    const SimulationPlan plan = small_plan(1.2e-3, 0.0);
    std::vector<cplx> modal(9);
    for (int k = 0; k < 9; ++k)
        modal[static_cast<std::size_t>(k)] = cplx(0.02 * (k + 1), 0.01 * (9 - k));
    const EvolutionRecord record = single_snapshot(plan, modal, 1.0);
    const Spectrum spectrum = spectrum_at(record, 0, plan);
    for (std::size_t k = 0; k < modal.size(); ++k) {
        const double recovered = 1e-3 * std::pow(10.0, spectrum.s_ring_dbm[k] / 10.0);
        CHECK(recovered == doctest::Approx(std::norm(modal[k])).epsilon(1e-12));
    }
}

TEST_CASE("fast-time profile of special fields") {
    const SimulationPlan plan = small_plan(1.2e-3, 0.0);

    SUBCASE("DC-only snapshot is flat at the line power") {
        std::vector<cplx> modal(9, cplx(0.0, 0.0));
        modal[4] = cplx(0.0, std::sqrt(0.25));
        const EvolutionRecord record = single_snapshot(plan, modal, 0.0);
        const TimeProfile profile = soliton_time(record, 0, plan);
        REQUIRE(profile.tau_s.size() == 9);
        CHECK(profile.tau_s.front() == doctest::Approx(-0.5e-12));
        CHECK(profile.tau_s.back() < 0.5e-12);
        for (const double p : profile.intensity_w) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
    }

    SUBCASE("two equal side lines beat as a raised cosine") {
        std::vector<cplx> modal(9, cplx(0.0, 0.0));
        const double amp = 0.2;
        modal[3] = cplx(amp, 0.0); // mu = -1
        modal[5] = cplx(amp, 0.0); // mu = +1
        const EvolutionRecord record = single_snapshot(plan, modal, 2 * amp * amp);
        const TimeProfile profile = soliton_time(record, 0, plan);

        const double t_r = plan.round_trip_time_s;
        for (std::size_t j = 0; j < profile.tau_s.size(); ++j) {
            const double phase = 2.0 * kPi * static_cast<double>(j) / 9.0;
            const double expected = 4.0 * amp * amp * std::cos(phase) * std::cos(phase);
            CHECK(profile.intensity_w[j] == doctest::Approx(expected).epsilon(1e-9).scale(amp * amp));
        }
        // Period is one round trip: the pattern closes at tau + t_R.
        CHECK(profile.tau_s.back() - profile.tau_s.front() < t_r);
    }

    SUBCASE("mean intensity equals the total modal power") {
        std::vector<cplx> modal(9);
        for (int k = 0; k < 9; ++k) modal[static_cast<std::size_t>(k)] = cplx(0.03 * k, 0.02);
        double total = 0.0;
        for (const cplx& a : modal) total += std::norm(a);
        const EvolutionRecord record = single_snapshot(plan, modal, 1.0);
        const TimeProfile profile = soliton_time(record, 0, plan);
        double mean = 0.0;
        for (const double p : profile.intensity_w) mean += p;
        mean /= static_cast<double>(profile.intensity_w.size());
        CHECK(mean == doctest::Approx(total).epsilon(1e-12));
    }
}

TEST_CASE("out_couple is linear on the non-pump lines") {
    const SimulationPlan plan = small_plan(1.2e-3, 0.08);
    std::vector<cplx> modal(9);
    for (int k = 0; k < 9; ++k) modal[static_cast<std::size_t>(k)] = cplx(0.1 + 0.02 * k, -0.03 * k);
    const cplx scale(1.7, -0.4);
    std::vector<cplx> scaled = modal;
    for (cplx& a : scaled) a *= scale;

    const std::vector<cplx> wg = out_couple(modal, plan);
    const std::vector<cplx> wg_scaled = out_couple(scaled, plan);
    for (std::size_t k = 0; k < wg.size(); ++k) {
        if (k == 4) continue;
        CHECK(std::abs(wg_scaled[k] - scale * wg[k]) <= 1e-15);
    }
}
