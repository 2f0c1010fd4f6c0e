#include "llesim/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llesim/errors.hpp"

namespace llesim {

namespace {

double l2_norm(std::span<const cplx> v) {
    double sum = 0.0;
    for (const cplx& a : v) sum += std::norm(a);
    return std::sqrt(sum);
}

double l2_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
    return std::sqrt(sum);
}

} // namespace

SplitStepper::SplitStepper(const SimulationPlan& plan)
    : plan_(plan), engine_(plan.n_modes, plan.profile.mu_min()),
      phase_bins_(static_cast<std::size_t>(plan.n_modes)),
      env_(static_cast<std::size_t>(plan.n_modes)) {
    for (int k = 0; k < plan_.n_modes; ++k) {
        const int bin = engine_.bin_of_mu(plan_.profile.mu_grid[static_cast<std::size_t>(k)]);
        phase_bins_[static_cast<std::size_t>(bin)] = plan_.linear_phase[static_cast<std::size_t>(k)];
    }
}

void SplitStepper::linear_bins(std::span<cplx> bins, double delta_omega_rads, double dt_trips) const {
    const double decay = std::exp(-0.5 * plan_.round_trip_loss * dt_trips);
    const double detuning_phase = delta_omega_rads * plan_.round_trip_time_s;
    for (std::size_t b = 0; b < bins.size(); ++b)
        bins[b] *= std::polar(decay, (detuning_phase - phase_bins_[b]) * dt_trips);
}

void SplitStepper::kerr_then_pump_bins(std::span<cplx> bins, double dt_trips) {
    engine_.synthesize_bins(bins, env_);
    const double kerr = plan_.kerr_per_trip;
    const cplx drive = std::sqrt(plan_.coupling) * plan_.pump_amp * dt_trips;
    for (cplx& e : env_) {
        e *= std::polar(1.0, kerr * std::norm(e) * dt_trips);
        e += drive;
    }
    engine_.analyze_bins(env_, bins);
}

void SplitStepper::step_bins(std::span<cplx> bins, double delta_omega_rads, double dt_trips) {
    linear_bins(bins, delta_omega_rads, 0.5 * dt_trips);

    engine_.synthesize_bins(bins, env_);
    const double kerr = plan_.kerr_per_trip;
    const cplx half_drive = std::sqrt(plan_.coupling) * plan_.pump_amp * (0.5 * dt_trips);
    for (cplx& e : env_) {
        e += half_drive;
        e *= std::polar(1.0, kerr * std::norm(e) * dt_trips);
        e += half_drive;
    }
    engine_.analyze_bins(env_, bins);

    linear_bins(bins, delta_omega_rads, 0.5 * dt_trips);
}

namespace {

// Shared bin-order scaffolding for the FieldState-level operations.
struct BinView {
    SplitStepper stepper;
    std::vector<cplx> bins;

    BinView(const SimulationPlan& plan, const FieldState& state)
        : stepper(plan), bins(static_cast<std::size_t>(plan.n_modes)) {
        stepper.engine().mu_to_bins(state.modal, bins);
    }

    FieldState finish(const FieldState& original, double dt_advance) {
        FieldState out;
        out.tau_grid = original.tau_grid;
        out.t_slow = original.t_slow + dt_advance;
        out.modal.resize(bins.size());
        out.envelope.resize(bins.size());
        stepper.engine().bins_to_mu(bins, out.modal);
        stepper.engine().synthesize_bins(bins, out.envelope);
        return out;
    }
};

} // namespace

FieldState apply_linear_half_step(const FieldState& state, const SimulationPlan& plan,
                                  double delta_omega_rads, double dt_trips) {
    BinView view(plan, state);
    view.stepper.linear_bins(view.bins, delta_omega_rads, dt_trips);
    return view.finish(state, 0.0);
}

FieldState apply_nonlinear_step(const FieldState& state, const SimulationPlan& plan, double dt_trips) {
    BinView view(plan, state);
    view.stepper.kerr_then_pump_bins(view.bins, dt_trips);
    return view.finish(state, 0.0);
}

FieldState step_once(const FieldState& state, const SimulationPlan& plan,
                     double delta_omega_rads, double dt_trips) {
    BinView view(plan, state);
    view.stepper.step_bins(view.bins, delta_omega_rads, dt_trips);
    return view.finish(state, dt_trips);
}

TemporalResult solve_temporal(const SimulationPlan& plan, const ProgressSink& progress) {
    const std::int64_t total = plan.ramp.total_steps;
    const int num_probe = plan.num_probe;

    SplitStepper stepper(plan);
    FftEngine& engine = stepper.engine();

    const FieldState start = initial_field(plan, plan.seed);
    std::vector<cplx> bins(start.modal.size());
    engine.mu_to_bins(start.modal, bins);

    std::vector<std::int64_t> positions(static_cast<std::size_t>(num_probe));
    for (int i = 0; i < num_probe; ++i)
        positions[static_cast<std::size_t>(i)] =
            std::llround(static_cast<double>(i) * static_cast<double>(total) /
                         static_cast<double>(num_probe - 1));

    TemporalResult result;
    result.record.plan_echo = plan;
    result.record.snapshots.reserve(static_cast<std::size_t>(num_probe));

    double last_reported = -1.0;
    std::size_t next_probe = 0;
    auto capture = [&](std::int64_t step) {
        while (next_probe < positions.size() && positions[next_probe] == step) {
            std::vector<cplx> modal(bins.size());
            engine.bins_to_mu(bins, modal);
            double comb = 0.0;
            for (std::size_t b = 1; b < bins.size(); ++b) comb += std::norm(bins[b]);
            result.record.snapshots.push_back(std::move(modal));
            result.record.detuning_trace.push_back(detuning_at(plan, step));
            result.record.comb_power_trace.push_back(comb);
            ++next_probe;

            if (progress) {
                const double fraction =
                    total > 0 ? static_cast<double>(step) / static_cast<double>(total) : 1.0;
                if ((fraction >= 1.0 && fraction > last_reported) || fraction >= last_reported + 1e-3) {
                    progress(fraction);
                    last_reported = fraction;
                }
            }
        }
    };

    std::vector<cplx> coarse(bins.size());
    std::vector<cplx> fine(bins.size());

    capture(0);
    for (std::int64_t step = 0; step < total; ++step) {
        const double delta_omega = detuning_at(plan, step);

        double dt = plan.controls.step_factor;
        double remaining = 1.0;
        while (remaining > 0.0) {
            double h = std::min(dt, remaining);
            int halvings = 0;
            double err = 0.0;
            while (true) {
                coarse = bins;
                stepper.step_bins(coarse, delta_omega, h);
                fine = bins;
                stepper.step_bins(fine, delta_omega, 0.5 * h);
                stepper.step_bins(fine, delta_omega, 0.5 * h);
                err = l2_diff(coarse, fine) / std::max(l2_norm(fine), 1e-300);
                if (err <= plan.controls.tol) break;
                if (halvings >= plan.controls.maxiter) {
                    std::ostringstream msg;
                    msg << "sub-step collapse at round trip " << step << ": local error " << err
                        << " still exceeds tol " << plan.controls.tol << " after "
                        << plan.controls.maxiter << " halvings (dt = " << h << ")";
                    result.step_collapse = true;
                    result.diagnostic = msg.str();
                    return result;
                }
                h *= 0.5;
                ++halvings;
            }
            bins = fine;
            remaining -= h;
            dt = std::min(2.0 * h, plan.controls.step_factor);
        }
        capture(step + 1);
    }
    return result;
}

} // namespace llesim
