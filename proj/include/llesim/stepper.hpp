#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "llesim/field.hpp"
#include "llesim/fft.hpp"
#include "llesim/plan.hpp"

namespace llesim {

/// Split-step integrator for one simulation grid. Owns the FFT plans and
/// scratch buffers, so a stepper must not be shared between threads;
/// independent simulations each construct their own.
///
/// One step advances the field by dt round trips with the symmetric
/// composition
///   linear(dt/2) . pump(dt/2) . kerr(dt) . pump(dt/2) . linear(dt/2)
/// where linear multiplies each mode by
/// exp[(-alpha'/2 + i*(delta_omega*t_R - t_R*D_int(mu))) * dt], kerr rotates
/// each fast-time sample by exp(i*gamma*L*|E|^2*dt), and pump adds
/// sqrt(theta)*sqrt(Pin)*dt uniformly in fast time. Splitting the pump
/// around the Kerr rotation keeps the composition palindromic, hence
/// second-order accurate.
class SplitStepper {
public:
    explicit SplitStepper(const SimulationPlan& plan);

    const SimulationPlan& plan() const { return plan_; }
    FftEngine& engine() { return engine_; }

    /// Advance modal amplitudes (bin order) in place by dt round trips.
    void step_bins(std::span<cplx> bins, double delta_omega_rads, double dt_trips);

    /// Stage operations on bin-ordered modal amplitudes.
    void linear_bins(std::span<cplx> bins, double delta_omega_rads, double dt_trips) const;
    void kerr_then_pump_bins(std::span<cplx> bins, double dt_trips);

private:
    SimulationPlan plan_;
    FftEngine engine_;
    std::vector<double> phase_bins_; // t_R * D_int per bin
    std::vector<cplx> env_;          // fast-time scratch
};

/// Per-mode multiplication by the linear propagator over dt round trips.
/// The caller decides the step length; the symmetric stepper passes dt/2.
FieldState apply_linear_half_step(const FieldState& state, const SimulationPlan& plan,
                                  double delta_omega_rads, double dt_trips);

/// Pointwise Kerr rotation over dt followed by the pump addition
/// E += sqrt(theta)*sqrt(Pin)*dt, both in fast time.
FieldState apply_nonlinear_step(const FieldState& state, const SimulationPlan& plan,
                                double dt_trips);

/// One symmetric split step of dt round trips (see SplitStepper).
FieldState step_once(const FieldState& state, const SimulationPlan& plan,
                     double delta_omega_rads, double dt_trips);

/// Sub-sampled history of a detuning scan.
struct EvolutionRecord {
    std::vector<std::vector<cplx>> snapshots; ///< num_probe modal arrays, ascending mu
    std::vector<double> detuning_trace;       ///< rad/s at each snapshot
    std::vector<double> comb_power_trace;     ///< sum_{mu != 0} |A_mu|^2, W
    SimulationPlan plan_echo;

    bool operator==(const EvolutionRecord&) const = default;
};

/// Outcome of solve_temporal. On a sub-step collapse the record holds the
/// snapshots taken up to the failure point and diagnostic explains where the
/// error control gave up.
struct TemporalResult {
    EvolutionRecord record;
    bool step_collapse = false;
    std::string diagnostic;
};

/// Monotone completion callback in [0, 1]; called at most ~1000 times.
using ProgressSink = std::function<void(double)>;

/// Integrate the detuning ramp over round(Tscan) round trips from the seeded
/// noise field. Within each round trip, step-doubling keeps the local
/// relative error of every sub-step at or below plan.controls.tol: a
/// sub-step is accepted when one dt step and two dt/2 steps agree, retried
/// with halved dt otherwise (up to controls.maxiter halvings), and dt grows
/// again by 2x after success, capped at controls.step_factor.
TemporalResult solve_temporal(const SimulationPlan& plan, const ProgressSink& progress = {});

} // namespace llesim
