#pragma once

#include <string>

#include "llesim/plan.hpp"

namespace llesim {

/// One simulation session: resonator, scan, and solver knobs.
/// Greek parameter keys and their Latin spellings are interchangeable in the
/// on-disk form; loading normalizes to the Latin names.
struct SessionConfig {
    ResonatorSpec res;
    SimulationSpec sim;
    StepControls solver;

    bool operator==(const SessionConfig&) const = default;
};

/// Load a JSON config document.
///
/// Layout: {"res": {R, Qi, Qc, gamma, dispfile},
///          "sim": {Pin, Tscan, f_pmp, domega_init, domega_end,
///                  [domega_stop], [domega], mu_sim, mu_fit,
///                  [num_probe], [seed]},
///          ["solver": {tol, maxiter, step_factor}]}
/// Accepted aliases: gamma/γ, domega_init/δω_init, domega_end/δω_end,
/// domega_stop/δω_stop, domega/δω, mu_sim/μ_sim, mu_fit/μ_fit. Units follow
/// the field names (W, Hz, rad/s, meters, round trips).
/// Throws UnknownKey, ConflictingAlias, MissingRequired, InvalidValue.
SessionConfig load_config(const std::string& path);

/// Same loader over an in-memory JSON string.
SessionConfig parse_config(const std::string& json_text);

/// Canonical (Latin-keyed) JSON form; parse_config(dump_config(c)) == c.
std::string dump_config(const SessionConfig& config);

/// Resolve the dispersion file path: absolute stays as-is, relative is
/// taken against the directory containing the config file.
std::string resolve_dispersion_path(const SessionConfig& config, const std::string& config_path);

} // namespace llesim
