#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace llesim {

/// One resonance: azimuthal mode order and cold-cavity frequency in Hz.
struct ModeRow {
    long order;
    double freq_hz;
};

/// Raw (mode order, resonance frequency) pairs read from a dispersion file.
/// Rows are sorted by mode order; orders are unique and the frequencies
/// strictly increase with order.
struct ModeTable {
    std::vector<ModeRow> rows;

    long min_order() const { return rows.front().order; }
    long max_order() const { return rows.back().order; }
};

/// Integrated dispersion resampled onto the simulation mode grid, plus the
/// pump-referenced quantities derived during the fit.
struct DispersionProfile {
    std::vector<int> mu_grid;       ///< relative mode indices, ascending, inclusive
    std::vector<double> dint;       ///< D_int(mu) in rad/s; dint == 0 at mu == 0
    double d1 = 0.0;                ///< angular FSR at the pump, rad/s
    double omega0 = 0.0;            ///< pump-resonance angular frequency, rad/s
    long m0 = 0;                    ///< absolute azimuthal order of the pump mode
    double neff_pmp = 0.0;          ///< effective index at the pump
    double ng_pmp = 0.0;            ///< group index at the pump
    std::array<int, 2> fit_window{};///< mu_fit bounds used for the fit
    std::vector<std::uint8_t> extrapolated_mask; ///< 1 where mu lies outside mu_fit

    int n_modes() const { return static_cast<int>(mu_grid.size()); }
    int mu_min() const { return mu_grid.front(); }
    int mu_max() const { return mu_grid.back(); }

    bool operator==(const DispersionProfile&) const = default;
};

/// Parse a dispersion table: plain text, no header, one "order,frequency_hz"
/// record per line. LF and CRLF line endings and surrounding whitespace are
/// accepted. Throws MalformedInput or TooFewRows.
ModeTable parse_dispersion_file(const std::string& path);

/// Same parser over an in-memory string (the file variant delegates here).
ModeTable parse_dispersion_text(const std::string& text);

/// Fit the resonance frequencies with a natural cubic spline of omega versus
/// mu over the mu_fit window and resample the integrated dispersion
/// D_int(mu) = omega_mu - (omega0 + D1*mu) over the mu_sim grid, extrapolating
/// the terminal spline cubics where mu_sim extends beyond mu_fit.
///
/// The pump mode is the table row whose frequency is nearest f_pmp_hz (ties
/// toward the lower order). ring_radius_m enters only the effective/group
/// index outputs. Throws WindowOutsideData or PumpNotBracketed.
DispersionProfile fit_integrated_dispersion(const ModeTable& table, double f_pmp_hz,
                                            std::array<int, 2> mu_fit,
                                            std::array<int, 2> mu_sim,
                                            double ring_radius_m);

} // namespace llesim
