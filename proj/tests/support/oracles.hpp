#pragma once

// Independent oracles for the solver checks. Everything here is written
// against the round-trip-averaged modal equations directly, without the
// split-step or FFT machinery it is used to validate.

#include <complex>
#include <vector>

#include "llesim/plan.hpp"

namespace llesim::testing {

using cplx = std::complex<double>;

/// All positive real roots (< 3) of the homogeneous steady-state balance
///   [alpha'^2/4 + (delta_phase + kerr*P)^2] * P = drive
/// (delta_phase = detuning * t_R per round trip, drive = theta * Pin),
/// ascending. Brackets each monotone interval of the cubic via its critical
/// points and bisects; never evaluates the production solver.
std::vector<double> cw_cubic_roots_oracle(double alpha_prime, double delta_phase, double kerr,
                                          double drive);

/// Reference integrator for the modal equations on a small grid:
///   dA_k/dt = (-alpha'/2 + i*(delta_phase - linear_phase_k)) A_k
///             + i*kerr*T_k[A] + drive*delta_{k,pump}
/// with T the cyclic triple sum T_k = sum A_a conj(A_b) A_c over
/// (a - b + c - k) == 0 (mod N): the modal image of |E|^2 E on an N-point
/// grid. Classical RK4 at fixed dt.
class ModalOdeOracle {
public:
    ModalOdeOracle(const SimulationPlan& plan, double detuning_rads);

    /// Advance a copy of `modal` (ascending mu) by `trips` round trips using
    /// `steps` RK4 steps.
    std::vector<cplx> integrate(std::vector<cplx> modal, double trips, long steps) const;

    void rhs(const std::vector<cplx>& modal, std::vector<cplx>& out) const;

private:
    int n_;
    std::size_t pump_index_;
    double alpha_prime_;
    double delta_phase_;
    double kerr_;
    double drive_amp_;
    std::vector<double> linear_phase_;
};

} // namespace llesim::testing
