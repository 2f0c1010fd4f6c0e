#pragma once

#include <optional>
#include <string>

#include "llesim/config.hpp"
#include "llesim/steady.hpp"
#include "llesim/stepper.hpp"

namespace llesim {

/// Contents of a results bundle: a zip container with "manifest.json" at the
/// root (format version, config echo, plan scalars, dataset index) and the
/// arrays as raw little-endian IEEE-754 under "data/<name>.bin"; complex
/// arrays are interleaved (re, im) pairs with a trailing 2 in their shape.
struct LoadedBundle {
    int format_version = 0;
    std::string kind; ///< "temporal" or "steady"
    SessionConfig config;
    SimulationPlan plan;
    std::optional<TemporalResult> temporal;
    std::optional<SteadySolution> steady;
};

inline constexpr int kBundleFormatVersion = 1;

/// Write a temporal run (atomically: temp file + rename).
void save_results(const TemporalResult& result, const SessionConfig& config,
                  const std::string& path);

/// Write a steady-state solution.
void save_results(const SteadySolution& solution, const SessionConfig& config,
                  const SimulationPlan& plan, const std::string& path);

/// Inverse of save_results. Throws CorruptBundle (naming the offending
/// dataset) or VersionMismatch.
LoadedBundle load_results(const std::string& path);

} // namespace llesim
