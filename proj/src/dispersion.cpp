#include "llesim/dispersion.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "llesim/errors.hpp"
#include "llesim/spline.hpp"

namespace llesim {

namespace {

constexpr double kSpeedOfLight = 299792458.0; // m/s

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\f\v");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\f\v");
    return s.substr(begin, end - begin + 1);
}

long parse_order(const std::string& token, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    const long value = std::strtol(token.c_str(), &end, 10);
    if (errno != 0 || end == token.c_str() || *end != '\0')
        throw MalformedInput("line " + std::to_string(line_no) +
                             ": mode order is not an integer: '" + token + "'");
    return value;
}

double parse_freq(const std::string& token, std::size_t line_no) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (errno != 0 || end == token.c_str() || *end != '\0' || !std::isfinite(value))
        throw MalformedInput("line " + std::to_string(line_no) +
                             ": frequency is not a finite number: '" + token + "'");
    return value;
}

} // namespace

ModeTable parse_dispersion_text(const std::string& text) {
    ModeTable table;
    std::istringstream stream(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string record = trim(line);
        if (record.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = record.find(',', start);
            fields.push_back(trim(record.substr(start, comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 2)
            throw MalformedInput("line " + std::to_string(line_no) + ": expected 2 comma-separated fields, got " +
                                 std::to_string(fields.size()));

        ModeRow row;
        row.order = parse_order(fields[0], line_no);
        row.freq_hz = parse_freq(fields[1], line_no);
        if (row.freq_hz <= 0.0)
            throw MalformedInput("line " + std::to_string(line_no) + ": frequency must be positive");
        table.rows.push_back(row);
    }

    if (table.rows.size() < 4)
        throw TooFewRows("dispersion table has " + std::to_string(table.rows.size()) +
                         " rows; at least 4 are required");

    std::sort(table.rows.begin(), table.rows.end(),
              [](const ModeRow& a, const ModeRow& b) { return a.order < b.order; });
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        if (table.rows[i].order == table.rows[i - 1].order)
            throw MalformedInput("duplicate mode order " + std::to_string(table.rows[i].order));
        if (table.rows[i].freq_hz <= table.rows[i - 1].freq_hz)
            throw MalformedInput("resonance frequencies must increase strictly with mode order (order " +
                                 std::to_string(table.rows[i].order) + ")");
    }
    return table;
}

ModeTable parse_dispersion_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoFailure("cannot open dispersion file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_dispersion_text(buffer.str());
}

DispersionProfile fit_integrated_dispersion(const ModeTable& table, double f_pmp_hz,
                                            std::array<int, 2> mu_fit,
                                            std::array<int, 2> mu_sim,
                                            double ring_radius_m) {
    if (mu_fit[0] > mu_fit[1] || mu_sim[0] > mu_sim[1])
        throw InvalidValue("mode windows must be ordered as [min, max]");
    if (mu_fit[0] > 0 || mu_fit[1] < 0 || mu_sim[0] > 0 || mu_sim[1] < 0)
        throw InvalidValue("mode windows must contain the pump mode (mu = 0)");
    if (!(ring_radius_m > 0.0)) throw InvalidValue("ring radius must be positive");

    const auto& rows = table.rows;
    if (f_pmp_hz < rows.front().freq_hz || f_pmp_hz > rows.back().freq_hz)
        throw PumpNotBracketed("pump frequency " + std::to_string(f_pmp_hz) +
                               " Hz lies outside the table span");

    // Nearest row to the pump frequency; ties break toward the lower order.
    std::size_t pump_idx = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double dist = std::abs(rows[i].freq_hz - f_pmp_hz);
        if (dist < best) {
            best = dist;
            pump_idx = i;
        }
    }
    const long m0 = rows[pump_idx].order;

    const long mu_table_min = rows.front().order - m0;
    const long mu_table_max = rows.back().order - m0;
    if (mu_fit[0] < mu_table_min || mu_fit[1] > mu_table_max)
        throw WindowOutsideData("mu_fit [" + std::to_string(mu_fit[0]) + ", " + std::to_string(mu_fit[1]) +
                                "] exceeds the table range [" + std::to_string(mu_table_min) + ", " +
                                std::to_string(mu_table_max) + "]");

    std::vector<double> mu_knots, omega_knots;
    for (const ModeRow& row : rows) {
        const long mu = row.order - m0;
        if (mu < mu_fit[0] || mu > mu_fit[1]) continue;
        mu_knots.push_back(static_cast<double>(mu));
        omega_knots.push_back(2.0 * std::numbers::pi * row.freq_hz);
    }
    if (mu_knots.size() < 4)
        throw TooFewRows("fit window contains only " + std::to_string(mu_knots.size()) +
                         " table rows; at least 4 are required");

    const NaturalCubicSpline spline(std::move(mu_knots), std::move(omega_knots));

    DispersionProfile profile;
    profile.m0 = m0;
    profile.omega0 = spline.eval(0.0);
    profile.d1 = spline.deriv(0.0);
    profile.fit_window = mu_fit;
    profile.neff_pmp = kSpeedOfLight * static_cast<double>(m0) / (profile.omega0 * ring_radius_m);
    profile.ng_pmp = kSpeedOfLight / (profile.d1 * ring_radius_m);

    const int n = mu_sim[1] - mu_sim[0] + 1;
    profile.mu_grid.resize(n);
    profile.dint.resize(n);
    profile.extrapolated_mask.resize(n);
    for (int k = 0; k < n; ++k) {
        const int mu = mu_sim[0] + k;
        profile.mu_grid[k] = mu;
        profile.dint[k] = spline.eval(mu) - (profile.omega0 + profile.d1 * mu);
        profile.extrapolated_mask[k] = (mu < mu_fit[0] || mu > mu_fit[1]) ? 1 : 0;
    }
    return profile;
}

} // namespace llesim
