#include "llesim/steady.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "llesim/errors.hpp"

namespace llesim {

namespace {

double l2_norm(std::span<const cplx> v) {
    double sum = 0.0;
    for (const cplx& a : v) sum += std::norm(a);
    return std::sqrt(sum);
}

// Per-mode linear coefficients lambda_mu = -alpha'/2 + i*(delta*tR - phase).
std::vector<cplx> linear_coeffs(const SimulationPlan& plan, double delta_omega_rads) {
    const double detuning_phase = delta_omega_rads * plan.round_trip_time_s;
    std::vector<cplx> lambda(static_cast<std::size_t>(plan.n_modes));
    for (int k = 0; k < plan.n_modes; ++k)
        lambda[static_cast<std::size_t>(k)] =
            cplx(-0.5 * plan.round_trip_loss,
                 detuning_phase - plan.linear_phase[static_cast<std::size_t>(k)]);
    return lambda;
}

std::size_t pump_index(const SimulationPlan& plan) {
    return static_cast<std::size_t>(-plan.profile.mu_min());
}

} // namespace

namespace {

std::vector<cplx> residual_with(FftEngine& engine, std::span<const cplx> modal,
                                const SimulationPlan& plan, std::span<const cplx> lambda) {
    const std::size_t n = modal.size();
    std::vector<cplx> env(n);
    std::vector<cplx> bins(n);
    engine.mu_to_bins(modal, bins);
    engine.synthesize_bins(bins, env);
    for (cplx& e : env) e *= std::norm(e); // |E|^2 E
    engine.analyze_bins(env, bins);
    std::vector<cplx> kerr_modal(n);
    engine.bins_to_mu(bins, kerr_modal);

    const cplx i_unit(0.0, 1.0);
    std::vector<cplx> residual(n);
    for (std::size_t k = 0; k < n; ++k)
        residual[k] = lambda[k] * modal[k] + i_unit * plan.kerr_per_trip * kerr_modal[k];
    residual[pump_index(plan)] += std::sqrt(plan.coupling) * plan.pump_amp;
    return residual;
}

} // namespace

std::vector<cplx> steady_residual(std::span<const cplx> modal, const SimulationPlan& plan,
                                  double delta_omega_rads) {
    if (static_cast<int>(modal.size()) != plan.n_modes)
        throw InvalidValue("modal array length does not match the plan grid");
    FftEngine engine(plan.n_modes, plan.profile.mu_min());
    const std::vector<cplx> lambda = linear_coeffs(plan, delta_omega_rads);
    return residual_with(engine, modal, plan, lambda);
}

std::vector<double> cw_intensity_roots(const SimulationPlan& plan, double delta_omega_rads) {
    const double half_loss_sq = 0.25 * plan.round_trip_loss * plan.round_trip_loss;
    const double delta = delta_omega_rads * plan.round_trip_time_s;
    const double kerr = plan.kerr_per_trip;
    const double drive = plan.coupling * plan.pump_power_w();

    if (drive == 0.0) return {0.0};

    const auto g = [&](double p) {
        const double shifted = delta + kerr * p;
        return (half_loss_sq + shifted * shifted) * p - drive;
    };

    // g(p) <= (that bracket) only reaches drive for p <= drive / half_loss_sq.
    const double p_max = drive / half_loss_sq;
    const int grid = 4096;
    std::vector<double> roots;
    double prev_p = 0.0;
    double prev_g = g(0.0);
    for (int i = 1; i <= grid; ++i) {
        const double p = p_max * static_cast<double>(i) / grid;
        const double gp = g(p);
        if (prev_g == 0.0) roots.push_back(prev_p);
        if (prev_g < 0.0 != gp < 0.0) {
            double lo = prev_p, hi = p;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (g(lo) < 0.0 != g(mid) < 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_p = p;
        prev_g = gp;
    }
    if (roots.empty()) roots.push_back(p_max); // numerical corner: fall back to the bound
    return roots;
}

cplx cw_amplitude(const SimulationPlan& plan, double delta_omega_rads, double intensity_w) {
    // A * (alpha'/2 - i*(delta + kerr*P)) = sqrt(theta*Pin)
    const double delta = delta_omega_rads * plan.round_trip_time_s;
    const cplx denom(0.5 * plan.round_trip_loss, -(delta + plan.kerr_per_trip * intensity_w));
    if (denom == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
    return std::sqrt(plan.coupling) * plan.pump_amp / denom;
}

SteadySolution solve_steady_state(const SimulationPlan& plan, double delta_omega_rads,
                                  const std::optional<std::vector<cplx>>& initial_guess) {
    const int n = plan.n_modes;
    const std::size_t un = static_cast<std::size_t>(n);

    std::vector<cplx> modal(un, cplx(0.0, 0.0));
    if (initial_guess) {
        if (static_cast<int>(initial_guess->size()) != n)
            throw InvalidValue("initial guess length does not match the plan grid");
        modal = *initial_guess;
    } else if (plan.pump_power_w() > 0.0) {
        const std::vector<double> roots = cw_intensity_roots(plan, delta_omega_rads);
        modal[pump_index(plan)] = cw_amplitude(plan, delta_omega_rads, roots.front());
    }

    const double tol = 1e-10 * std::max(1.0, std::sqrt(plan.coupling * plan.pump_power_w()));
    const std::vector<cplx> lambda = linear_coeffs(plan, delta_omega_rads);
    FftEngine engine(n, plan.profile.mu_min());

    SteadySolution best;
    best.detuning_rads = delta_omega_rads;
    best.modal = modal;

    std::vector<cplx> residual = residual_with(engine, modal, plan, lambda);
    double res_norm = l2_norm(residual);
    best.residual_norm = res_norm;

    constexpr int kMaxIterations = 50;
    int iter = 0;
    while (res_norm > tol && iter < kMaxIterations) {
        ++iter;

        // Envelope of the current iterate, for the fast-time-diagonal Kerr
        // derivative d(|E|^2 E) = 2|E|^2 dE + E^2 conj(dE).
        std::vector<cplx> bins(un), env(un);
        engine.mu_to_bins(modal, bins);
        engine.synthesize_bins(bins, env);

        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        std::vector<cplx> col_env(un), col_bins(un), col_modal(un);
        for (int m = 0; m < n; ++m) {
            const int mu = plan.profile.mu_grid[static_cast<std::size_t>(m)];
            for (int part = 0; part < 2; ++part) {
                const cplx unit = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
                // dE for a unit perturbation of mode mu is the DFT column
                // exp(+2*pi*i*mu*j/N); apply the pointwise derivative, then
                // transform back.
                for (int j = 0; j < n; ++j) {
                    const double ang = 2.0 * std::numbers::pi * static_cast<double>(mu) *
                                       static_cast<double>(j) / static_cast<double>(n);
                    const cplx basis = std::polar(1.0, ang) * unit;
                    const cplx& e = env[static_cast<std::size_t>(j)];
                    col_env[static_cast<std::size_t>(j)] =
                        2.0 * std::norm(e) * basis + e * e * std::conj(basis);
                }
                engine.analyze_bins(col_env, col_bins);
                engine.bins_to_mu(col_bins, col_modal);

                const int col = 2 * m + part;
                for (int r = 0; r < n; ++r) {
                    // i * kerr * (column), plus the diagonal linear part.
                    cplx entry = cplx(0.0, 1.0) * plan.kerr_per_trip * col_modal[static_cast<std::size_t>(r)];
                    if (r == m) entry += lambda[static_cast<std::size_t>(r)] * unit;
                    jac(2 * r, col) = entry.real();
                    jac(2 * r + 1, col) = entry.imag();
                }
            }
        }

        Eigen::VectorXd rhs(2 * n);
        for (int r = 0; r < n; ++r) {
            rhs(2 * r) = -residual[static_cast<std::size_t>(r)].real();
            rhs(2 * r + 1) = -residual[static_cast<std::size_t>(r)].imag();
        }

        const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
        const Eigen::VectorXd delta = lu.solve(rhs);
        if (!delta.allFinite() || (jac * delta - rhs).norm() > 1e-6 * std::max(1.0, rhs.norm()))
            throw SingularJacobian("Newton linear solve failed at iteration " + std::to_string(iter));

        // Armijo backtracking on the residual norm.
        double step = 1.0;
        std::vector<cplx> candidate(un);
        std::vector<cplx> cand_residual;
        double cand_norm = res_norm;
        bool accepted = false;
        while (step >= 0x1.0p-30) {
            for (int m = 0; m < n; ++m)
                candidate[static_cast<std::size_t>(m)] =
                    modal[static_cast<std::size_t>(m)] +
                    step * cplx(delta(2 * m), delta(2 * m + 1));
            cand_residual = residual_with(engine, candidate, plan, lambda);
            cand_norm = l2_norm(cand_residual);
            if (cand_norm <= (1.0 - 1e-4 * step) * res_norm) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break; // stagnation; report the best iterate below

        modal = candidate;
        residual = std::move(cand_residual);
        res_norm = cand_norm;
        if (res_norm < best.residual_norm) {
            best.modal = modal;
            best.residual_norm = res_norm;
        }
    }

    best.iterations = iter;
    best.converged = best.residual_norm <= tol;
    return best;
}

} // namespace llesim
