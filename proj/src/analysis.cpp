#include "llesim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "llesim/errors.hpp"
#include "llesim/field.hpp"

namespace llesim {

namespace {

constexpr double kPowerFloorW = 1e-20;
constexpr double kFloorDbm = -170.0;

double to_dbm(double power_w) {
    if (power_w < kPowerFloorW) return kFloorDbm;
    return 10.0 * std::log10(power_w / 1e-3);
}

const std::vector<cplx>& snapshot_at(const EvolutionRecord& record, int ind) {
    if (ind < 0 || static_cast<std::size_t>(ind) >= record.snapshots.size())
        throw IndexOutOfRange("snapshot index " + std::to_string(ind) + " outside [0, " +
                              std::to_string(record.snapshots.size()) + ")");
    return record.snapshots[static_cast<std::size_t>(ind)];
}

} // namespace

std::vector<cplx> out_couple(std::span<const cplx> modal, const SimulationPlan& plan) {
    if (static_cast<int>(modal.size()) != plan.n_modes)
        throw InvalidValue("modal array length does not match the plan grid");
    const double root_theta = std::sqrt(plan.coupling);
    std::vector<cplx> wg(modal.begin(), modal.end());
    for (cplx& a : wg) a *= root_theta;
    wg[static_cast<std::size_t>(-plan.profile.mu_min())] -= plan.pump_amp;
    return wg;
}

std::vector<double> comb_power(const EvolutionRecord& record) {
    if (record.snapshots.empty()) throw InvalidValue("record holds no snapshots");
    const double peak = *std::max_element(record.comb_power_trace.begin(),
                                          record.comb_power_trace.end());
    std::vector<double> trace(record.comb_power_trace.size(), 0.0);
    if (peak > 0.0)
        for (std::size_t i = 0; i < trace.size(); ++i)
            trace[i] = record.comb_power_trace[i] / peak;
    return trace;
}

Spectrum spectrum_at(const EvolutionRecord& record, int ind, const SimulationPlan& plan) {
    const std::vector<cplx>& modal = snapshot_at(record, ind);
    const std::vector<cplx> wg = out_couple(modal, plan);

    Spectrum spectrum;
    const std::size_t n = modal.size();
    spectrum.freq_hz.resize(n);
    spectrum.s_ring_dbm.resize(n);
    spectrum.s_wg_dbm.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double mu = plan.profile.mu_grid[k];
        spectrum.freq_hz[k] = (plan.profile.omega0 + plan.profile.d1 * mu + plan.profile.dint[k]) /
                              (2.0 * std::numbers::pi);
        spectrum.s_ring_dbm[k] = to_dbm(std::norm(modal[k]));
        spectrum.s_wg_dbm[k] = to_dbm(std::norm(wg[k]));
    }
    for (std::size_t k = 1; k < n; ++k)
        if (!(spectrum.freq_hz[k] > spectrum.freq_hz[k - 1]))
            throw InvalidValue("spectrum frequencies are not strictly increasing");
    return spectrum;
}

TimeProfile soliton_time(const EvolutionRecord& record, int ind, const SimulationPlan& plan) {
    const std::vector<cplx>& modal = snapshot_at(record, ind);

    FftEngine engine(plan.n_modes, plan.profile.mu_min());
    const std::vector<cplx> envelope = engine.synthesize(modal);

    TimeProfile profile;
    profile.tau_s = make_tau_grid(plan);
    profile.intensity_w.resize(envelope.size());
    for (std::size_t j = 0; j < envelope.size(); ++j)
        profile.intensity_w[j] = std::norm(envelope[j]);
    return profile;
}

} // namespace llesim
