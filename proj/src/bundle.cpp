#include "llesim/bundle.hpp"

#include <cstring>
#include <vector>

#include <json.hpp>

#include "llesim/errors.hpp"
#include "llesim/zipio.hpp"

namespace llesim {

namespace {

using json = nlohmann::json;

struct Dataset {
    std::string dtype;
    std::vector<std::size_t> shape;
    std::string bytes;
};

std::size_t dtype_size(const std::string& dtype) {
    if (dtype == "<f8" || dtype == "<i8") return 8;
    if (dtype == "|u1") return 1;
    throw CorruptBundle("unsupported dtype: " + dtype);
}

Dataset pack_doubles(const std::vector<double>& values, std::vector<std::size_t> shape) {
    Dataset ds{"<f8", std::move(shape), {}};
    ds.bytes.assign(reinterpret_cast<const char*>(values.data()), reinterpret_cast<const char*>(values.data() + values.size()));
    return ds;
}

Dataset pack_complex(const std::vector<cplx>& values, std::vector<std::size_t> shape) {
    shape.push_back(2);
    Dataset ds{"<f8", std::move(shape), {}};
    ds.bytes.assign(reinterpret_cast<const char*>(values.data()), reinterpret_cast<const char*>(values.data() + values.size()));
    return ds;
}

class BundleBuilder {
public:
    BundleBuilder(std::string kind, const SessionConfig& config, const SimulationPlan& plan)
        : kind_(std::move(kind)) {
        manifest_["format_version"] = kBundleFormatVersion;
        manifest_["kind"] = kind_;
        manifest_["config"] = json::parse(dump_config(config));

        json plan_doc;
        plan_doc["n_modes"] = plan.n_modes;
        plan_doc["round_trip_time_s"] = plan.round_trip_time_s;
        plan_doc["round_trip_loss"] = plan.round_trip_loss;
        plan_doc["coupling"] = plan.coupling;
        plan_doc["kerr_per_trip"] = plan.kerr_per_trip;
        plan_doc["pump_amp"] = plan.pump_amp;
        plan_doc["d1"] = plan.profile.d1;
        plan_doc["omega0"] = plan.profile.omega0;
        plan_doc["m0"] = plan.profile.m0;
        plan_doc["neff_pmp"] = plan.profile.neff_pmp;
        plan_doc["ng_pmp"] = plan.profile.ng_pmp;
        plan_doc["fit_window"] = plan.profile.fit_window;
        plan_doc["ramp"] = {{"start_rads", plan.ramp.start_rads},
                            {"end_rads", plan.ramp.end_rads},
                            {"total_steps", plan.ramp.total_steps}};
        if (plan.ramp.stop_rads) plan_doc["ramp"]["stop_rads"] = *plan.ramp.stop_rads;
        plan_doc["controls"] = {{"tol", plan.controls.tol},
                                {"maxiter", plan.controls.maxiter},
                                {"step_factor", plan.controls.step_factor}};
        plan_doc["num_probe"] = plan.num_probe;
        plan_doc["seed"] = plan.seed;
        manifest_["plan"] = plan_doc;

        add("mu_grid", [&] {
            std::vector<std::int64_t> mu(plan.profile.mu_grid.begin(), plan.profile.mu_grid.end());
            Dataset ds{"<i8", {mu.size()}, {}};
            ds.bytes.assign(reinterpret_cast<const char*>(mu.data()),
                            reinterpret_cast<const char*>(mu.data() + mu.size()));
            return ds;
        }());
        add("dint", pack_doubles(plan.profile.dint, {plan.profile.dint.size()}));
        add("extrapolated_mask", [&] {
            Dataset ds{"|u1", {plan.profile.extrapolated_mask.size()}, {}};
            ds.bytes.assign(reinterpret_cast<const char*>(plan.profile.extrapolated_mask.data()),
                            reinterpret_cast<const char*>(plan.profile.extrapolated_mask.data() +
                                                          plan.profile.extrapolated_mask.size()));
            return ds;
        }());
    }

    void add(const std::string& name, Dataset ds) {
        json& entry = manifest_["datasets"][name];
        entry["dtype"] = ds.dtype;
        entry["shape"] = ds.shape;
        entry["byte_length"] = ds.bytes.size();
        data_.emplace_back(name, std::move(ds.bytes));
    }

    void set_status(json status) { manifest_["status"] = std::move(status); }

    void write(const std::string& path) const {
        ZipWriter zip;
        zip.add("manifest.json", manifest_.dump(2));
        for (const auto& [name, bytes] : data_) zip.add("data/" + name + ".bin", bytes);
        zip.write(path);
    }

private:
    std::string kind_;
    json manifest_;
    std::vector<std::pair<std::string, std::string>> data_;
};

std::vector<double> unpack_doubles(const std::string& bytes) {
    std::vector<double> values(bytes.size() / sizeof(double));
    std::memcpy(values.data(), bytes.data(), values.size() * sizeof(double));
    return values;
}

std::vector<cplx> unpack_complex(const std::string& bytes) {
    std::vector<cplx> values(bytes.size() / sizeof(cplx));
    std::memcpy(values.data(), bytes.data(), values.size() * sizeof(cplx));
    return values;
}

class BundleParser {
public:
    explicit BundleParser(const std::string& path) : zip_(path) {
        try {
            manifest_ = json::parse(zip_.read("manifest.json"));
        } catch (const json::parse_error& e) {
            throw CorruptBundle(std::string("manifest.json is not valid JSON: ") + e.what());
        }
        if (!manifest_.contains("format_version") || !manifest_["format_version"].is_number_integer())
            throw CorruptBundle("manifest lacks an integer format_version");
        version_ = manifest_["format_version"].get<int>();
        if (version_ != kBundleFormatVersion)
            throw VersionMismatch("bundle format_version " + std::to_string(version_) +
                                  " is not supported (expected " +
                                  std::to_string(kBundleFormatVersion) + ")");
    }

    const json& manifest() const { return manifest_; }
    int version() const { return version_; }

    std::string read_dataset(const std::string& name, Dataset& meta) const {
        const json& datasets = manifest_.at("datasets");
        if (!datasets.contains(name)) throw CorruptBundle("manifest lists no dataset '" + name + "'");
        const json& entry = datasets.at(name);
        meta.dtype = entry.at("dtype").get<std::string>();
        meta.shape = entry.at("shape").get<std::vector<std::size_t>>();
        const std::size_t expect = entry.at("byte_length").get<std::size_t>();

        std::size_t count = dtype_size(meta.dtype);
        for (const std::size_t dim : meta.shape) count *= dim;
        std::string bytes;
        try {
            bytes = zip_.read("data/" + name + ".bin");
        } catch (const CorruptBundle&) {
            throw CorruptBundle("dataset '" + name + "' is missing or unreadable");
        }
        if (bytes.size() != expect || count != expect)
            throw CorruptBundle("dataset '" + name + "' has " + std::to_string(bytes.size()) +
                                " bytes where the manifest declares " + std::to_string(expect));
        return bytes;
    }

private:
    ZipReader zip_;
    json manifest_;
    int version_ = 0;
};

SimulationPlan plan_from_manifest(const BundleParser& parser) {
    const json& plan_doc = parser.manifest().at("plan");

    Dataset meta;
    SimulationPlan plan;
    plan.profile.d1 = plan_doc.at("d1").get<double>();
    plan.profile.omega0 = plan_doc.at("omega0").get<double>();
    plan.profile.m0 = plan_doc.at("m0").get<long>();
    plan.profile.neff_pmp = plan_doc.at("neff_pmp").get<double>();
    plan.profile.ng_pmp = plan_doc.at("ng_pmp").get<double>();
    plan.profile.fit_window = plan_doc.at("fit_window").get<std::array<int, 2>>();

    {
        const std::string bytes = parser.read_dataset("mu_grid", meta);
        std::vector<std::int64_t> mu(bytes.size() / sizeof(std::int64_t));
        std::memcpy(mu.data(), bytes.data(), bytes.size());
        plan.profile.mu_grid.assign(mu.begin(), mu.end());
    }
    plan.profile.dint = unpack_doubles(parser.read_dataset("dint", meta));
    {
        const std::string bytes = parser.read_dataset("extrapolated_mask", meta);
        plan.profile.extrapolated_mask.assign(bytes.begin(), bytes.end());
    }

    plan.n_modes = plan_doc.at("n_modes").get<int>();
    plan.round_trip_time_s = plan_doc.at("round_trip_time_s").get<double>();
    plan.round_trip_loss = plan_doc.at("round_trip_loss").get<double>();
    plan.coupling = plan_doc.at("coupling").get<double>();
    plan.kerr_per_trip = plan_doc.at("kerr_per_trip").get<double>();
    plan.pump_amp = plan_doc.at("pump_amp").get<double>();
    if (plan.n_modes != plan.profile.n_modes() ||
        plan.profile.dint.size() != plan.profile.mu_grid.size() ||
        plan.profile.extrapolated_mask.size() != plan.profile.mu_grid.size())
        throw CorruptBundle("plan grid arrays disagree about the mode count");

    plan.linear_phase.resize(plan.profile.dint.size());
    for (std::size_t k = 0; k < plan.linear_phase.size(); ++k)
        plan.linear_phase[k] = plan.round_trip_time_s * plan.profile.dint[k];

    const json& ramp = plan_doc.at("ramp");
    plan.ramp.start_rads = ramp.at("start_rads").get<double>();
    plan.ramp.end_rads = ramp.at("end_rads").get<double>();
    if (ramp.contains("stop_rads")) plan.ramp.stop_rads = ramp.at("stop_rads").get<double>();
    plan.ramp.total_steps = ramp.at("total_steps").get<std::int64_t>();

    const json& controls = plan_doc.at("controls");
    plan.controls.tol = controls.at("tol").get<double>();
    plan.controls.maxiter = controls.at("maxiter").get<int>();
    plan.controls.step_factor = controls.at("step_factor").get<double>();
    plan.num_probe = plan_doc.at("num_probe").get<int>();
    plan.seed = plan_doc.at("seed").get<std::uint64_t>();
    return plan;
}

} // namespace

void save_results(const TemporalResult& result, const SessionConfig& config,
                  const std::string& path) {
    const EvolutionRecord& record = result.record;
    BundleBuilder builder("temporal", config, record.plan_echo);
    builder.set_status({{"step_collapse", result.step_collapse}, {"diagnostic", result.diagnostic}});

    const std::size_t probes = record.snapshots.size();
    const std::size_t n = probes > 0 ? record.snapshots.front().size() : 0;
    std::vector<cplx> flat;
    flat.reserve(probes * n);
    for (const std::vector<cplx>& snap : record.snapshots)
        flat.insert(flat.end(), snap.begin(), snap.end());
    builder.add("snapshots", pack_complex(flat, {probes, n}));
    builder.add("detuning_trace", pack_doubles(record.detuning_trace, {record.detuning_trace.size()}));
    builder.add("comb_power_trace",
                pack_doubles(record.comb_power_trace, {record.comb_power_trace.size()}));
    builder.write(path);
}

void save_results(const SteadySolution& solution, const SessionConfig& config,
                  const SimulationPlan& plan, const std::string& path) {
    BundleBuilder builder("steady", config, plan);
    builder.set_status({{"converged", solution.converged},
                        {"iterations", solution.iterations},
                        {"residual_norm", solution.residual_norm},
                        {"detuning_rads", solution.detuning_rads}});
    builder.add("modal", pack_complex(solution.modal, {solution.modal.size()}));
    builder.write(path);
}

LoadedBundle load_results(const std::string& path) {
    const BundleParser parser(path);
    const json& manifest = parser.manifest();

    LoadedBundle bundle;
    bundle.format_version = parser.version();
    bundle.kind = manifest.at("kind").get<std::string>();
    bundle.config = parse_config(manifest.at("config").dump());
    bundle.plan = plan_from_manifest(parser);

    Dataset meta;
    if (bundle.kind == "temporal") {
        TemporalResult result;
        result.record.plan_echo = bundle.plan;
        const json& status = manifest.at("status");
        result.step_collapse = status.at("step_collapse").get<bool>();
        result.diagnostic = status.at("diagnostic").get<std::string>();

        const std::vector<cplx> flat = unpack_complex(parser.read_dataset("snapshots", meta));
        if (meta.shape.size() != 3 || meta.shape[2] != 2)
            throw CorruptBundle("dataset 'snapshots' must have shape [probes, n_modes, 2]");
        const std::size_t probes = meta.shape[0];
        const std::size_t n = meta.shape[1];
        result.record.snapshots.resize(probes);
        for (std::size_t p = 0; p < probes; ++p)
            result.record.snapshots[p].assign(flat.begin() + static_cast<std::ptrdiff_t>(p * n),
                                              flat.begin() + static_cast<std::ptrdiff_t>((p + 1) * n));
        result.record.detuning_trace = unpack_doubles(parser.read_dataset("detuning_trace", meta));
        result.record.comb_power_trace = unpack_doubles(parser.read_dataset("comb_power_trace", meta));
        if (result.record.detuning_trace.size() != probes ||
            result.record.comb_power_trace.size() != probes)
            throw CorruptBundle("snapshot traces disagree about the probe count");
        bundle.temporal = std::move(result);
    } else if (bundle.kind == "steady") {
        SteadySolution solution;
        const json& status = manifest.at("status");
        solution.converged = status.at("converged").get<bool>();
        solution.iterations = status.at("iterations").get<int>();
        solution.residual_norm = status.at("residual_norm").get<double>();
        solution.detuning_rads = status.at("detuning_rads").get<double>();
        solution.modal = unpack_complex(parser.read_dataset("modal", meta));
        bundle.steady = std::move(solution);
    } else {
        throw CorruptBundle("unknown bundle kind: " + bundle.kind);
    }
    return bundle;
}

} // namespace llesim
