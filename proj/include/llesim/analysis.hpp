#pragma once

#include <span>
#include <vector>

#include "llesim/plan.hpp"
#include "llesim/stepper.hpp"

namespace llesim {

/// Comb spectrum at one snapshot, in dBm, over absolute optical frequency.
struct Spectrum {
    std::vector<double> freq_hz;  ///< (omega0 + D1*mu + D_int(mu)) / (2*pi), ascending
    std::vector<double> s_ring_dbm;
    std::vector<double> s_wg_dbm;
};

/// Field coupled out into the access waveguide:
/// A_wg = sqrt(theta)*A for mu != 0, and sqrt(theta)*A - sqrt(Pin) on the
/// pump line, where the transmitted input interferes.
std::vector<cplx> out_couple(std::span<const cplx> modal, const SimulationPlan& plan);

/// Per-snapshot comb power (pump line excluded), normalized to the maximum
/// over the record. All zeros when the record never carries comb light.
std::vector<double> comb_power(const EvolutionRecord& record);

/// Spectrum of snapshot `ind`. Mode powers below 1e-20 W render as -170 dBm.
Spectrum spectrum_at(const EvolutionRecord& record, int ind, const SimulationPlan& plan);

/// Fast-time intensity |E(tau)|^2 of snapshot `ind` over [-t_R/2, t_R/2).
struct TimeProfile {
    std::vector<double> tau_s;
    std::vector<double> intensity_w;
};
TimeProfile soliton_time(const EvolutionRecord& record, int ind, const SimulationPlan& plan);

} // namespace llesim
