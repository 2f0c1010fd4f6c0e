#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "llesim/analysis.hpp"
#include "llesim/bundle.hpp"
#include "llesim/config.hpp"
#include "llesim/dispersion.hpp"
#include "llesim/errors.hpp"
#include "llesim/field.hpp"
#include "llesim/plan.hpp"
#include "llesim/steady.hpp"
#include "llesim/stepper.hpp"

namespace py = pybind11;
using namespace llesim;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<int> to_numpy(const std::vector<int>& v) {
    py::array_t<int> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<std::complex<double>> to_numpy(const std::vector<cplx>& v) {
    py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<std::complex<double>> snapshots_to_numpy(const std::vector<std::vector<cplx>>& snaps) {
    const py::ssize_t probes = static_cast<py::ssize_t>(snaps.size());
    const py::ssize_t n = probes > 0 ? static_cast<py::ssize_t>(snaps.front().size()) : 0;
    py::array_t<std::complex<double>> out({probes, n});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t p = 0; p < probes; ++p)
        for (py::ssize_t k = 0; k < n; ++k)
            view(p, k) = snaps[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)];
    return out;
}

std::vector<cplx> from_numpy(const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 1) throw InvalidValue("expected a one-dimensional complex array");
    const auto view = arr.unchecked<1>();
    std::vector<cplx> out(static_cast<std::size_t>(view.shape(0)));
    for (py::ssize_t i = 0; i < view.shape(0); ++i) out[static_cast<std::size_t>(i)] = view(i);
    return out;
}

} // namespace

PYBIND11_MODULE(_llesim, m) {
    m.doc() = "Lugiato-Lefever microresonator comb solver";

    py::register_exception<Error>(m, "Error");
    py::register_exception<IndexOutOfRange>(m, "IndexOutOfRangeError", PyExc_IndexError);

    py::class_<ModeRow>(m, "ModeRow")
        .def_readonly("order", &ModeRow::order)
        .def_readonly("freq_hz", &ModeRow::freq_hz);

    py::class_<ModeTable>(m, "ModeTable")
        .def_readonly("rows", &ModeTable::rows)
        .def_property_readonly("orders",
                               [](const ModeTable& t) {
                                   std::vector<int> mu;
                                   mu.reserve(t.rows.size());
                                   for (const ModeRow& r : t.rows) mu.push_back(static_cast<int>(r.order));
                                   return to_numpy(mu);
                               })
        .def_property_readonly("freqs_hz", [](const ModeTable& t) {
            std::vector<double> f;
            f.reserve(t.rows.size());
            for (const ModeRow& r : t.rows) f.push_back(r.freq_hz);
            return to_numpy(f);
        });

    py::class_<DispersionProfile>(m, "DispersionProfile")
        .def_property_readonly("mu_grid", [](const DispersionProfile& p) { return to_numpy(p.mu_grid); })
        .def_property_readonly("dint", [](const DispersionProfile& p) { return to_numpy(p.dint); })
        .def_readonly("d1", &DispersionProfile::d1)
        .def_readonly("omega0", &DispersionProfile::omega0)
        .def_readonly("m0", &DispersionProfile::m0)
        .def_readonly("neff_pmp", &DispersionProfile::neff_pmp)
        .def_readonly("ng_pmp", &DispersionProfile::ng_pmp)
        .def_readonly("fit_window", &DispersionProfile::fit_window)
        .def_property_readonly("extrapolated_mask", [](const DispersionProfile& p) {
            py::array_t<bool> out(static_cast<py::ssize_t>(p.extrapolated_mask.size()));
            auto view = out.mutable_unchecked<1>();
            for (std::size_t i = 0; i < p.extrapolated_mask.size(); ++i)
                view(static_cast<py::ssize_t>(i)) = p.extrapolated_mask[i] != 0;
            return out;
        });

    py::class_<ResonatorSpec>(m, "ResonatorSpec")
        .def(py::init<>())
        .def_readwrite("ring_radius_m", &ResonatorSpec::ring_radius_m)
        .def_readwrite("intrinsic_q", &ResonatorSpec::intrinsic_q)
        .def_readwrite("coupling_q", &ResonatorSpec::coupling_q)
        .def_readwrite("nonlinear_coeff", &ResonatorSpec::nonlinear_coeff)
        .def_readwrite("dispersion_file", &ResonatorSpec::dispersion_file);

    py::class_<SimulationSpec>(m, "SimulationSpec")
        .def(py::init<>())
        .def_readwrite("pump_power_w", &SimulationSpec::pump_power_w)
        .def_readwrite("scan_round_trips", &SimulationSpec::scan_round_trips)
        .def_readwrite("pump_freq_hz", &SimulationSpec::pump_freq_hz)
        .def_readwrite("detuning_init_rads", &SimulationSpec::detuning_init_rads)
        .def_readwrite("detuning_end_rads", &SimulationSpec::detuning_end_rads)
        .def_readwrite("detuning_stop_rads", &SimulationSpec::detuning_stop_rads)
        .def_readwrite("fixed_detuning_rads", &SimulationSpec::fixed_detuning_rads)
        .def_readwrite("mu_sim", &SimulationSpec::mu_sim)
        .def_readwrite("mu_fit", &SimulationSpec::mu_fit)
        .def_readwrite("num_probe", &SimulationSpec::num_probe)
        .def_readwrite("seed", &SimulationSpec::seed);

    py::class_<StepControls>(m, "StepControls")
        .def(py::init<>())
        .def_readwrite("tol", &StepControls::tol)
        .def_readwrite("maxiter", &StepControls::maxiter)
        .def_readwrite("step_factor", &StepControls::step_factor);

    py::class_<SessionConfig>(m, "SessionConfig")
        .def(py::init<>())
        .def_readwrite("res", &SessionConfig::res)
        .def_readwrite("sim", &SessionConfig::sim)
        .def_readwrite("solver", &SessionConfig::solver);

    py::class_<DetuningRamp>(m, "DetuningRamp")
        .def_readonly("start_rads", &DetuningRamp::start_rads)
        .def_readonly("end_rads", &DetuningRamp::end_rads)
        .def_readonly("stop_rads", &DetuningRamp::stop_rads)
        .def_readonly("total_steps", &DetuningRamp::total_steps);

    py::class_<SimulationPlan>(m, "SimulationPlan")
        .def_readonly("profile", &SimulationPlan::profile)
        .def_readonly("n_modes", &SimulationPlan::n_modes)
        .def_readonly("round_trip_time_s", &SimulationPlan::round_trip_time_s)
        .def_readonly("round_trip_loss", &SimulationPlan::round_trip_loss)
        .def_readonly("coupling", &SimulationPlan::coupling)
        .def_readonly("kerr_per_trip", &SimulationPlan::kerr_per_trip)
        .def_readonly("pump_amp", &SimulationPlan::pump_amp)
        .def_property_readonly("linear_phase",
                               [](const SimulationPlan& p) { return to_numpy(p.linear_phase); })
        .def_readonly("ramp", &SimulationPlan::ramp)
        .def_readonly("controls", &SimulationPlan::controls)
        .def_readonly("num_probe", &SimulationPlan::num_probe)
        .def_readonly("seed", &SimulationPlan::seed)
        .def_property_readonly("pump_power_w", &SimulationPlan::pump_power_w);

    py::class_<FieldState>(m, "FieldState")
        .def_property_readonly("tau_grid", [](const FieldState& s) { return to_numpy(s.tau_grid); })
        .def_property_readonly("envelope", [](const FieldState& s) { return to_numpy(s.envelope); })
        .def_property_readonly("modal", [](const FieldState& s) { return to_numpy(s.modal); })
        .def_readonly("t_slow", &FieldState::t_slow)
        .def("modal_energy", &FieldState::modal_energy);

    py::class_<EvolutionRecord>(m, "EvolutionRecord")
        .def_property_readonly("snapshots",
                               [](const EvolutionRecord& r) { return snapshots_to_numpy(r.snapshots); })
        .def_property_readonly("detuning_trace",
                               [](const EvolutionRecord& r) { return to_numpy(r.detuning_trace); })
        .def_property_readonly("comb_power_trace",
                               [](const EvolutionRecord& r) { return to_numpy(r.comb_power_trace); })
        .def_readonly("plan_echo", &EvolutionRecord::plan_echo);

    py::class_<TemporalResult>(m, "TemporalResult")
        .def_readonly("record", &TemporalResult::record)
        .def_readonly("step_collapse", &TemporalResult::step_collapse)
        .def_readonly("diagnostic", &TemporalResult::diagnostic);

    py::class_<SteadySolution>(m, "SteadySolution")
        .def_property_readonly("modal", [](const SteadySolution& s) { return to_numpy(s.modal); })
        .def_readonly("residual_norm", &SteadySolution::residual_norm)
        .def_readonly("iterations", &SteadySolution::iterations)
        .def_readonly("detuning_rads", &SteadySolution::detuning_rads)
        .def_readonly("converged", &SteadySolution::converged);

    py::class_<Spectrum>(m, "Spectrum")
        .def_property_readonly("freq_hz", [](const Spectrum& s) { return to_numpy(s.freq_hz); })
        .def_property_readonly("s_ring_dbm", [](const Spectrum& s) { return to_numpy(s.s_ring_dbm); })
        .def_property_readonly("s_wg_dbm", [](const Spectrum& s) { return to_numpy(s.s_wg_dbm); });

    py::class_<TimeProfile>(m, "TimeProfile")
        .def_property_readonly("tau_s", [](const TimeProfile& t) { return to_numpy(t.tau_s); })
        .def_property_readonly("intensity_w", [](const TimeProfile& t) { return to_numpy(t.intensity_w); });

    py::class_<LoadedBundle>(m, "LoadedBundle")
        .def_readonly("format_version", &LoadedBundle::format_version)
        .def_readonly("kind", &LoadedBundle::kind)
        .def_readonly("config", &LoadedBundle::config)
        .def_readonly("plan", &LoadedBundle::plan)
        .def_readonly("temporal", &LoadedBundle::temporal)
        .def_readonly("steady", &LoadedBundle::steady);

    m.def("parse_dispersion_file", &parse_dispersion_file, py::arg("path"));
    m.def("parse_dispersion_text", &parse_dispersion_text, py::arg("text"));
    m.def("fit_integrated_dispersion", &fit_integrated_dispersion, py::arg("table"),
          py::arg("f_pmp_hz"), py::arg("mu_fit"), py::arg("mu_sim"), py::arg("ring_radius_m"));

    m.def("load_config", &load_config, py::arg("path"));
    m.def("parse_config", &parse_config, py::arg("json_text"));
    m.def("dump_config", &dump_config, py::arg("config"));

    m.def("build_plan", &build_plan, py::arg("res"), py::arg("sim"), py::arg("profile"),
          py::arg("controls") = StepControls{});
    m.def(
        "setup",
        [](const SessionConfig& config, const std::string& config_path) {
            const ModeTable table =
                parse_dispersion_file(resolve_dispersion_path(config, config_path));
            const DispersionProfile profile =
                fit_integrated_dispersion(table, config.sim.pump_freq_hz, config.sim.mu_fit,
                                          config.sim.mu_sim, config.res.ring_radius_m);
            return build_plan(config.res, config.sim, profile, config.solver);
        },
        py::arg("config"), py::arg("config_path"),
        "Fit the dispersion named by the config and resolve the simulation plan.");
    m.def("detuning_at", &detuning_at, py::arg("plan"), py::arg("step"));

    m.def("initial_field", &initial_field, py::arg("plan"), py::arg("seed"));
    m.def(
        "field_from_modal",
        [](const SimulationPlan& plan,
           const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& modal) {
            return field_from_modal(plan, from_numpy(modal));
        },
        py::arg("plan"), py::arg("modal"));
    m.def("step_once", &step_once, py::arg("state"), py::arg("plan"), py::arg("delta_omega_rads"),
          py::arg("dt_trips"));
    m.def("apply_linear_half_step", &apply_linear_half_step, py::arg("state"), py::arg("plan"),
          py::arg("delta_omega_rads"), py::arg("dt_trips"));
    m.def("apply_nonlinear_step", &apply_nonlinear_step, py::arg("state"), py::arg("plan"),
          py::arg("dt_trips"));

    m.def(
        "solve_temporal",
        [](const SimulationPlan& plan, const py::object& progress) {
            ProgressSink sink;
            if (!progress.is_none())
                sink = [progress](double fraction) {
                    py::gil_scoped_acquire acquire;
                    progress(fraction);
                };
            py::gil_scoped_release release;
            return solve_temporal(plan, sink);
        },
        py::arg("plan"), py::arg("progress") = py::none());

    m.def(
        "steady_residual",
        [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& modal,
           const SimulationPlan& plan, double detuning) {
            return to_numpy(steady_residual(from_numpy(modal), plan, detuning));
        },
        py::arg("modal"), py::arg("plan"), py::arg("delta_omega_rads"));
    m.def(
        "solve_steady_state",
        [](const SimulationPlan& plan, double detuning, const py::object& guess) {
            std::optional<std::vector<cplx>> initial;
            if (!guess.is_none())
                initial = from_numpy(
                    guess.cast<py::array_t<std::complex<double>,
                                           py::array::c_style | py::array::forcecast>>());
            py::gil_scoped_release release;
            return solve_steady_state(plan, detuning, initial);
        },
        py::arg("plan"), py::arg("delta_omega_rads"), py::arg("initial_guess") = py::none());

    m.def(
        "out_couple",
        [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& modal,
           const SimulationPlan& plan) { return to_numpy(out_couple(from_numpy(modal), plan)); },
        py::arg("modal"), py::arg("plan"));
    m.def("comb_power", [](const EvolutionRecord& r) { return to_numpy(comb_power(r)); },
          py::arg("record"));
    m.def("spectrum_at", &spectrum_at, py::arg("record"), py::arg("ind"), py::arg("plan"));
    m.def("soliton_time", &soliton_time, py::arg("record"), py::arg("ind"), py::arg("plan"));

    m.def("save_temporal",
          py::overload_cast<const TemporalResult&, const SessionConfig&, const std::string&>(
              &save_results),
          py::arg("result"), py::arg("config"), py::arg("path"));
    m.def("save_steady",
          py::overload_cast<const SteadySolution&, const SessionConfig&, const SimulationPlan&,
                            const std::string&>(&save_results),
          py::arg("solution"), py::arg("config"), py::arg("plan"), py::arg("path"));
    m.def("load_results", &load_results, py::arg("path"));
}
