#include "llesim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "llesim/analysis.hpp"
#include "llesim/bundle.hpp"
#include "llesim/config.hpp"
#include "llesim/dispersion.hpp"
#include "llesim/errors.hpp"
#include "llesim/plan.hpp"
#include "llesim/steady.hpp"
#include "llesim/stepper.hpp"

namespace llesim::cli {

namespace {

std::string fmt(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoFailure("cannot open output file: " + path);
    file << text;
    if (!file) throw IoFailure("short write: " + path);
}

/// Detuning flag value in rad/s; a trailing "hz" marks an ordinary
/// frequency which gets multiplied by 2*pi.
double parse_detuning(std::string text) {
    bool in_hz = false;
    if (text.size() > 2) {
        std::string tail = text.substr(text.size() - 2);
        for (char& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (tail == "hz") {
            in_hz = true;
            text = text.substr(0, text.size() - 2);
        }
    }
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        throw InvalidValue("cannot parse detuning value: '" + text + "'");
    }
    if (consumed != text.size()) throw InvalidValue("cannot parse detuning value: '" + text + "'");
    return in_hz ? value * 2.0 * std::numbers::pi : value;
}

struct Session {
    SessionConfig config;
    ModeTable table;
    DispersionProfile profile;
    SimulationPlan plan;
};

Session open_session(const std::string& config_path) {
    Session session;
    session.config = load_config(config_path);
    session.table = parse_dispersion_file(resolve_dispersion_path(session.config, config_path));
    session.profile = fit_integrated_dispersion(session.table, session.config.sim.pump_freq_hz,
                                                session.config.sim.mu_fit, session.config.sim.mu_sim,
                                                session.config.res.ring_radius_m);
    session.plan = build_plan(session.config.res, session.config.sim, session.profile,
                              session.config.solver);
    return session;
}

void render_progress(double fraction) {
    constexpr int kWidth = 40;
    const int filled = static_cast<int>(fraction * kWidth);
    std::string bar(static_cast<std::size_t>(kWidth), ' ');
    for (int i = 0; i < filled; ++i) bar[static_cast<std::size_t>(i)] = '=';
    if (filled < kWidth && filled > 0) bar[static_cast<std::size_t>(filled - 1)] = '>';
    std::fprintf(stderr, "\r[%s] %5.1f%%", bar.c_str(), fraction * 100.0);
    if (fraction >= 1.0) std::fprintf(stderr, "\n");
    std::fflush(stderr);
}

int cmd_analyze(const std::string& config_path, const std::string& out_path) {
    Session session;
    try {
        session.config = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    }
    try {
        session.table = parse_dispersion_file(resolve_dispersion_path(session.config, config_path));
        session.profile = fit_integrated_dispersion(session.table, session.config.sim.pump_freq_hz,
                                                    session.config.sim.mu_fit,
                                                    session.config.sim.mu_sim,
                                                    session.config.res.ring_radius_m);
    } catch (const Error& e) {
        std::cerr << "dispersion error: " << e.what() << "\n";
        return kDispersionError;
    }
    const DispersionProfile& profile = session.profile;

    std::ostringstream csv;
    csv << "series,mu,freq_hz,dint_rads\n";
    // Raw table points referenced to the fitted pump line.
    for (const ModeRow& row : session.table.rows) {
        const long mu = row.order - profile.m0;
        const double omega = 2.0 * std::numbers::pi * row.freq_hz;
        const double dint = omega - (profile.omega0 + profile.d1 * static_cast<double>(mu));
        csv << "raw," << mu << ',' << fmt(row.freq_hz) << ',' << fmt(dint) << '\n';
    }
    // Fitted curve over the fit window, and the grid handed to the solver.
    const ModeTable& table = session.table;
    const DispersionProfile fit_series = fit_integrated_dispersion(
        table, session.config.sim.pump_freq_hz, session.config.sim.mu_fit,
        session.config.sim.mu_fit, session.config.res.ring_radius_m);
    for (std::size_t k = 0; k < fit_series.mu_grid.size(); ++k) {
        const int mu = fit_series.mu_grid[k];
        const double freq = (profile.omega0 + profile.d1 * mu + fit_series.dint[k]) /
                            (2.0 * std::numbers::pi);
        csv << "fit," << mu << ',' << fmt(freq) << ',' << fmt(fit_series.dint[k]) << '\n';
    }
    for (std::size_t k = 0; k < profile.mu_grid.size(); ++k) {
        const int mu = profile.mu_grid[k];
        const double freq = (profile.omega0 + profile.d1 * mu + profile.dint[k]) /
                            (2.0 * std::numbers::pi);
        csv << "sim," << mu << ',' << fmt(freq) << ',' << fmt(profile.dint[k]) << '\n';
    }
    write_text(out_path, csv.str());

    // Extrapolation can invent D_int zero-crossings that look like dispersive
    // wave phase matching; flag sign changes in the extrapolated region.
    bool warned = false;
    for (std::size_t k = 1; k < profile.mu_grid.size() && !warned; ++k) {
        if (!profile.extrapolated_mask[k] && !profile.extrapolated_mask[k - 1]) continue;
        if ((profile.dint[k] < 0.0) != (profile.dint[k - 1] < 0.0)) {
            std::cerr << "warning: extrapolated integrated dispersion changes sign near mu = "
                      << profile.mu_grid[k] << "; treat zero-crossings outside the fit window "
                      << "as fit artifacts\n";
            warned = true;
        }
    }

    std::cout << out_path << "\n";
    return kOk;
}

int cmd_solve(const std::string& config_path, const std::string& out_path,
              std::optional<std::uint64_t> seed_override) {
    Session session;
    try {
        session = open_session(config_path);
    } catch (const Error& e) {
        std::cerr << "setup error: " << e.what() << "\n";
        return kConfigError;
    }
    if (seed_override) session.plan.seed = *seed_override;

    const TemporalResult result = solve_temporal(session.plan, render_progress);
    save_results(result, session.config, out_path);
    if (result.step_collapse) {
        std::cerr << "\nsolver stopped early: " << result.diagnostic << "\n";
        std::cout << out_path << "\n";
        return kStepCollapse;
    }
    std::cout << out_path << "\n";
    return kOk;
}

int cmd_steady(const std::string& config_path, const std::string& out_path,
               const std::optional<std::string>& detuning_flag) {
    Session session;
    try {
        session = open_session(config_path);
    } catch (const Error& e) {
        std::cerr << "setup error: " << e.what() << "\n";
        return kConfigError;
    }

    double detuning = 0.0;
    if (detuning_flag) {
        detuning = parse_detuning(*detuning_flag);
    } else if (session.config.sim.fixed_detuning_rads) {
        detuning = *session.config.sim.fixed_detuning_rads;
    } else {
        std::cerr << "steady solve needs a detuning: pass --detuning or set sim.domega\n";
        return kConfigError;
    }

    const SteadySolution solution = solve_steady_state(session.plan, detuning);
    save_results(solution, session.config, session.plan, out_path);
    std::cout << out_path << "\n";
    if (!solution.converged) {
        std::cerr << "warning: Newton iteration stalled at residual norm "
                  << solution.residual_norm << " after " << solution.iterations
                  << " iterations; bundle flagged as unconverged\n";
        return kNoConvergence;
    }
    return kOk;
}

int cmd_export(const std::string& bundle_path, const std::string& what, int ind,
               const std::string& out_path) {
    const LoadedBundle bundle = load_results(bundle_path);

    // Steady bundles export through a single-snapshot record.
    EvolutionRecord record;
    if (bundle.temporal) {
        record = bundle.temporal->record;
    } else {
        record.plan_echo = bundle.plan;
        record.snapshots.push_back(bundle.steady->modal);
        record.detuning_trace.push_back(bundle.steady->detuning_rads);
        double comb = 0.0;
        const auto& modal = bundle.steady->modal;
        const std::size_t pump = static_cast<std::size_t>(-bundle.plan.profile.mu_min());
        for (std::size_t k = 0; k < modal.size(); ++k)
            if (k != pump) comb += std::norm(modal[k]);
        record.comb_power_trace.push_back(comb);
    }

    std::ostringstream csv;
    if (what == "spectra") {
        const Spectrum spectrum = spectrum_at(record, ind, bundle.plan);
        csv << "freq_hz,s_ring_dbm,s_wg_dbm\n";
        for (std::size_t k = 0; k < spectrum.freq_hz.size(); ++k)
            csv << fmt(spectrum.freq_hz[k]) << ',' << fmt(spectrum.s_ring_dbm[k]) << ','
                << fmt(spectrum.s_wg_dbm[k]) << '\n';
    } else if (what == "combpower") {
        const std::vector<double> normalized = comb_power(record);
        csv << "step,comb_power_norm,detuning_rads\n";
        for (std::size_t i = 0; i < normalized.size(); ++i)
            csv << i << ',' << fmt(normalized[i]) << ',' << fmt(record.detuning_trace[i]) << '\n';
    } else if (what == "time") {
        const TimeProfile profile = soliton_time(record, ind, bundle.plan);
        csv << "tau_s,intensity_w\n";
        for (std::size_t j = 0; j < profile.tau_s.size(); ++j)
            csv << fmt(profile.tau_s[j]) << ',' << fmt(profile.intensity_w[j]) << '\n';
    } else {
        throw InvalidValue("unknown export kind: " + what);
    }
    write_text(out_path, csv.str());
    std::cout << out_path << "\n";
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& argv) {
    CLI::App app{"Lugiato-Lefever microresonator comb solver"};
    app.require_subcommand(1);

    std::string config_path, out_path, bundle_path, what;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> detuning_flag;
    int ind = 0;

    CLI::App* analyze = app.add_subcommand("analyze", "fit the dispersion and export D_int series");
    analyze->add_option("-c,--config", config_path, "JSON config")->required();
    analyze->add_option("-o,--out", out_path, "output CSV")->required();

    CLI::App* solve = app.add_subcommand("solve", "run the detuning scan and save a results bundle");
    solve->add_option("-c,--config", config_path, "JSON config")->required();
    solve->add_option("-o,--out", out_path, "output bundle (zip)")->required();
    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt = solve->add_option("--seed", seed_value, "override the noise seed");

    CLI::App* steady = app.add_subcommand("steady", "solve the steady state at a fixed detuning");
    steady->add_option("-c,--config", config_path, "JSON config")->required();
    steady->add_option("-o,--out", out_path, "output bundle (zip)")->required();
    std::string detuning_value;
    CLI::Option* detuning_opt = steady->add_option(
        "--detuning", detuning_value, "detuning in rad/s (suffix 'hz' multiplies by 2*pi)");

    CLI::App* exp = app.add_subcommand("export", "write plot-ready CSV from a results bundle");
    exp->add_option("-b,--bundle", bundle_path, "results bundle")->required();
    exp->add_option("--what", what, "spectra | combpower | time")
        ->required()
        ->check(CLI::IsMember({"spectra", "combpower", "time"}));
    exp->add_option("--ind", ind, "snapshot index (spectra/time)");
    exp->add_option("-o,--out", out_path, "output CSV")->required();

    std::vector<std::string> args(argv.rbegin(), argv.rend()); // CLI11 parses reversed
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::cout << app.help();
            return kOk;
        }
        std::cerr << e.what() << "\n";
        return kConfigError;
    }
    if (seed_opt->count() > 0) seed_override = seed_value;
    if (detuning_opt->count() > 0) detuning_flag = detuning_value;

    try {
        if (analyze->parsed()) return cmd_analyze(config_path, out_path);
        if (solve->parsed()) return cmd_solve(config_path, out_path, seed_override);
        if (steady->parsed()) return cmd_steady(config_path, out_path, detuning_flag);
        if (exp->parsed()) return cmd_export(bundle_path, what, ind, out_path);
    } catch (const IndexOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIndexOutOfRange;
    } catch (const UnknownKey& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConflictingAlias& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const MissingRequired& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

} // namespace llesim::cli
