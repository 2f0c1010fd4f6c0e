#include "llesim/config.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "llesim/errors.hpp"

namespace llesim {

namespace {

using json = nlohmann::json;

/// Tracks which keys of a JSON object have been consumed so leftovers can be
/// reported as UnknownKey, and resolves Greek/Latin alias pairs.
class Section {
public:
    Section(const json& object, std::string name) : object_(object), name_(std::move(name)) {
        if (!object_.is_object()) throw InvalidValue("section '" + name_ + "' must be a JSON object");
    }

    std::optional<json> take(const std::string& latin, const std::string& greek = {}) {
        std::optional<json> value;
        if (object_.contains(latin)) {
            value = object_.at(latin);
            used_.insert(latin);
        }
        if (!greek.empty() && object_.contains(greek)) {
            used_.insert(greek);
            if (value && *value != object_.at(greek))
                throw ConflictingAlias("'" + name_ + "." + latin + "' and '" + name_ + "." + greek +
                                       "' are both set with different values");
            if (!value) value = object_.at(greek);
        }
        return value;
    }

    json require(const std::string& latin, const std::string& greek = {}) {
        auto value = take(latin, greek);
        if (!value)
            throw MissingRequired("missing required key '" + name_ + "." + latin + "'" +
                                  (greek.empty() ? "" : " (alias '" + greek + "')"));
        return *value;
    }

    void finish() const {
        for (const auto& [key, _] : object_.items())
            if (!used_.contains(key))
                throw UnknownKey("unknown key '" + name_ + "." + key + "'");
    }

private:
    const json& object_;
    std::string name_;
    std::set<std::string> used_;
};

double as_number(const json& value, const std::string& what) {
    if (!value.is_number()) throw InvalidValue("'" + what + "' must be a number");
    return value.get<double>();
}

std::array<int, 2> as_window(const json& value, const std::string& what) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
        !value[1].is_number_integer())
        throw InvalidValue("'" + what + "' must be a two-element integer array [min, max]");
    return {value[0].get<int>(), value[1].get<int>()};
}

} // namespace

SessionConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidValue(std::string("config is not valid JSON: ") + e.what());
    }

    Section top(doc, "config");
    SessionConfig config;

    const json res_obj = top.require("res");
    Section res(res_obj, "res");
    config.res.ring_radius_m = as_number(res.require("R"), "res.R");
    config.res.intrinsic_q = as_number(res.require("Qi"), "res.Qi");
    config.res.coupling_q = as_number(res.require("Qc"), "res.Qc");
    config.res.nonlinear_coeff = as_number(res.require("gamma", "γ"), "res.gamma");
    {
        const json dispfile = res.require("dispfile");
        if (!dispfile.is_string()) throw InvalidValue("'res.dispfile' must be a string");
        config.res.dispersion_file = dispfile.get<std::string>();
    }
    res.finish();

    const json sim_obj = top.require("sim");
    Section sim(sim_obj, "sim");
    config.sim.pump_power_w = as_number(sim.require("Pin"), "sim.Pin");
    config.sim.scan_round_trips = as_number(sim.require("Tscan"), "sim.Tscan");
    config.sim.pump_freq_hz = as_number(sim.require("f_pmp"), "sim.f_pmp");
    config.sim.detuning_init_rads = as_number(sim.require("domega_init", "δω_init"), "sim.domega_init");
    config.sim.detuning_end_rads = as_number(sim.require("domega_end", "δω_end"), "sim.domega_end");
    if (auto stop = sim.take("domega_stop", "δω_stop"))
        config.sim.detuning_stop_rads = as_number(*stop, "sim.domega_stop");
    if (auto fixed = sim.take("domega", "δω"))
        config.sim.fixed_detuning_rads = as_number(*fixed, "sim.domega");
    config.sim.mu_sim = as_window(sim.require("mu_sim", "μ_sim"), "sim.mu_sim");
    config.sim.mu_fit = as_window(sim.require("mu_fit", "μ_fit"), "sim.mu_fit");
    if (auto probe = sim.take("num_probe")) {
        if (!probe->is_number_integer()) throw InvalidValue("'sim.num_probe' must be an integer");
        config.sim.num_probe = probe->get<int>();
    }
    if (auto seed = sim.take("seed")) {
        if (!seed->is_number_integer()) throw InvalidValue("'sim.seed' must be an integer");
        config.sim.seed = seed->get<std::uint64_t>();
    }
    sim.finish();

    if (const auto solver = top.take("solver")) {
        Section controls(*solver, "solver");
        if (auto tol = controls.take("tol")) config.solver.tol = as_number(*tol, "solver.tol");
        if (auto maxiter = controls.take("maxiter")) {
            if (!maxiter->is_number_integer()) throw InvalidValue("'solver.maxiter' must be an integer");
            config.solver.maxiter = maxiter->get<int>();
        }
        if (auto factor = controls.take("step_factor"))
            config.solver.step_factor = as_number(*factor, "solver.step_factor");
        controls.finish();
    }
    top.finish();

    // Field-level sanity, beyond what build_plan re-checks.
    if (!(config.res.ring_radius_m > 0.0)) throw InvalidValue("res.R must be positive");
    if (!(config.res.intrinsic_q > 0.0)) throw InvalidValue("res.Qi must be positive");
    if (!(config.res.coupling_q > 0.0)) throw InvalidValue("res.Qc must be positive");
    if (config.sim.pump_power_w < 0.0) throw InvalidValue("sim.Pin must be non-negative");
    if (!(config.sim.scan_round_trips >= 1.0)) throw InvalidValue("sim.Tscan must be at least 1");
    if (config.sim.num_probe < 2) throw InvalidValue("sim.num_probe must be at least 2");
    for (const auto& [window, name] :
         {std::pair{config.sim.mu_sim, "sim.mu_sim"}, std::pair{config.sim.mu_fit, "sim.mu_fit"}})
        if (window[0] > 0 || window[1] < 0)
            throw InvalidValue(std::string(name) + " must contain the pump mode (mu = 0)");
    if (!(config.solver.tol > 0.0)) throw InvalidValue("solver.tol must be positive");
    if (config.solver.maxiter < 0) throw InvalidValue("solver.maxiter must be non-negative");
    if (!(config.solver.step_factor > 0.0 && config.solver.step_factor <= 1.0))
        throw InvalidValue("solver.step_factor must lie in (0, 1]");

    return config;
}

SessionConfig load_config(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoFailure("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

std::string dump_config(const SessionConfig& config) {
    json doc;
    doc["res"] = {{"R", config.res.ring_radius_m},
                  {"Qi", config.res.intrinsic_q},
                  {"Qc", config.res.coupling_q},
                  {"gamma", config.res.nonlinear_coeff},
                  {"dispfile", config.res.dispersion_file}};
    json sim = {{"Pin", config.sim.pump_power_w},
                {"Tscan", config.sim.scan_round_trips},
                {"f_pmp", config.sim.pump_freq_hz},
                {"domega_init", config.sim.detuning_init_rads},
                {"domega_end", config.sim.detuning_end_rads},
                {"mu_sim", config.sim.mu_sim},
                {"mu_fit", config.sim.mu_fit},
                {"num_probe", config.sim.num_probe},
                {"seed", config.sim.seed}};
    if (config.sim.detuning_stop_rads) sim["domega_stop"] = *config.sim.detuning_stop_rads;
    if (config.sim.fixed_detuning_rads) sim["domega"] = *config.sim.fixed_detuning_rads;
    doc["sim"] = sim;
    doc["solver"] = {{"tol", config.solver.tol},
                     {"maxiter", config.solver.maxiter},
                     {"step_factor", config.solver.step_factor}};
    return doc.dump(2);
}

std::string resolve_dispersion_path(const SessionConfig& config, const std::string& config_path) {
    const std::filesystem::path dispfile(config.res.dispersion_file);
    if (dispfile.is_absolute()) return dispfile.string();
    return (std::filesystem::path(config_path).parent_path() / dispfile).string();
}

} // namespace llesim
