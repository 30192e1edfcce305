#include "lrdoa/experiment_config.hpp"

#include <fstream>
#include <set>

namespace lrdoa {

using nlohmann::json;

namespace {

void reject_unknown(const json& block, const std::string& where, const std::set<std::string>& allowed)
{
    if (!block.is_object())
        throw ConfigError(where + ": expected an object");
    for (const auto& item : block.items())
        if (allowed.count(item.key()) == 0)
            throw ConfigError("unknown key '" + (where.empty() ? "" : where + ".") + item.key() + "'");
}

template <typename T>
T read(const json& block, const std::string& where, const char* key, T fallback)
{
    if (!block.contains(key))
        return fallback;
    try {
        return block.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("key '" + where + "." + key + "' has the wrong type");
    }
}

int read_int(const json& block, const std::string& where, const char* key, int fallback)
{
    if (!block.contains(key))
        return fallback;
    const json& v = block.at(key);
    if (!v.is_number_integer())
        throw ConfigError("key '" + where + "." + key + "' must be an integer");
    return v.get<int>();
}

BasisInit parse_basis_init(const std::string& tag, const std::string& where)
{
    if (tag == "steering")
        return BasisInit::steering;
    if (tag == "first_canonical")
        return BasisInit::first_canonical;
    throw ConfigError("key '" + where + ".basis_init' must be 'steering' or 'first_canonical'");
}

const char* basis_init_tag(BasisInit init)
{
    return init == BasisInit::steering ? "steering" : "first_canonical";
}

} // namespace

EstimatorSpec ExperimentConfig::estimator_for(Method method) const
{
    for (const auto& e : estimators)
        if (e.method == method)
            return e;
    EstimatorSpec spec = EstimatorSpec::defaults(method);
    spec.grid = grid;
    return spec;
}

ExperimentConfig default_experiment()
{
    ExperimentConfig cfg;
    cfg.snr_list_db = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    cfg.scenario = paper_scenario(cfg.snr_list_db.front(), 1);
    for (Method m : {Method::malrd, Method::alrd, Method::music, Method::capon, Method::esprit}) {
        EstimatorSpec spec = EstimatorSpec::defaults(m);
        spec.grid = cfg.grid;
        cfg.estimators.push_back(spec);
    }
    return cfg;
}

ExperimentConfig parse_config(const json& doc)
{
    reject_unknown(doc, "", {"geometry", "scenario", "estimators", "harness", "output"});
    ExperimentConfig cfg = default_experiment();

    if (doc.contains("geometry")) {
        const json& g = doc.at("geometry");
        reject_unknown(g, "geometry", {"M", "spacing_ratio"});
        cfg.geometry.num_sensors = read_int(g, "geometry", "M", cfg.geometry.num_sensors);
        cfg.geometry.spacing_ratio = read<double>(g, "geometry", "spacing_ratio", cfg.geometry.spacing_ratio);
    }

    if (doc.contains("scenario")) {
        const json& s = doc.at("scenario");
        reject_unknown(s, "scenario",
                       {"doas", "snr", "snr_list", "N", "correlated_pair", "rho", "seed", "source_power"});
        auto& sc = cfg.scenario;
        sc.doas_deg = read<std::vector<double>>(s, "scenario", "doas", sc.doas_deg);
        sc.num_snapshots = read_int(s, "scenario", "N", sc.num_snapshots);
        sc.source_power = read<double>(s, "scenario", "source_power", sc.source_power);
        sc.correlation_coeff = read<double>(s, "scenario", "rho", sc.correlation_coeff);
        sc.rng_seed = read<std::uint64_t>(s, "scenario", "seed", sc.rng_seed);
        if (s.contains("correlated_pair")) {
            const json& p = s.at("correlated_pair");
            if (p.is_null()) {
                sc.correlated_pair.reset();
            } else {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
                    throw ConfigError("key 'scenario.correlated_pair' must be null or two integer indices");
                sc.correlated_pair = std::make_pair(p[0].get<int>(), p[1].get<int>());
            }
        } else if (s.contains("doas")) {
            // A custom source set does not inherit the default pair.
            sc.correlated_pair.reset();
        }
        if (s.contains("snr") && s.contains("snr_list"))
            throw ConfigError("keys 'scenario.snr' and 'scenario.snr_list' are mutually exclusive");
        if (s.contains("snr"))
            cfg.snr_list_db = {read<double>(s, "scenario", "snr", 0.0)};
        if (s.contains("snr_list")) {
            cfg.snr_list_db = read<std::vector<double>>(s, "scenario", "snr_list", {});
            if (cfg.snr_list_db.empty())
                throw ConfigError("key 'scenario.snr_list' must not be empty");
        }
    }

    if (doc.contains("harness")) {
        const json& h = doc.at("harness");
        reject_unknown(h, "harness", {"trials", "grid_start", "grid_stop", "grid_step", "threads"});
        cfg.trials = read_int(h, "harness", "trials", cfg.trials);
        cfg.grid.start_deg = read<double>(h, "harness", "grid_start", cfg.grid.start_deg);
        cfg.grid.stop_deg = read<double>(h, "harness", "grid_stop", cfg.grid.stop_deg);
        cfg.grid.step_deg = read<double>(h, "harness", "grid_step", cfg.grid.step_deg);
        const int threads = read_int(h, "harness", "threads", 0);
        if (threads < 0)
            throw ConfigError("key 'harness.threads' must be >= 0");
        cfg.threads = static_cast<unsigned>(threads);
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        reject_unknown(o, "output", {"directory", "emit_plot_script"});
        cfg.output_dir = read<std::string>(o, "output", "directory", cfg.output_dir.string());
        cfg.emit_plot_script = read<bool>(o, "output", "emit_plot_script", cfg.emit_plot_script);
    }

    if (doc.contains("estimators")) {
        const json& list = doc.at("estimators");
        if (!list.is_array() || list.empty())
            throw ConfigError("key 'estimators' must be a non-empty array");
        cfg.estimators.clear();
        for (std::size_t i = 0; i < list.size(); ++i) {
            const json& e = list[i];
            const std::string where = "estimators[" + std::to_string(i) + "]";
            reject_unknown(e, where,
                           {"method", "I", "D", "alpha", "delta", "relative_delta", "basis_init", "fba", "K"});
            if (!e.contains("method") || !e.at("method").is_string())
                throw ConfigError("key '" + where + ".method' is required");
            const auto method = parse_method(e.at("method").get<std::string>());
            if (!method)
                throw ConfigError("key '" + where + ".method' names an unknown method '" +
                                  e.at("method").get<std::string>() + "'");
            EstimatorSpec spec = EstimatorSpec::defaults(*method);
            auto& lr = spec.low_rank;
            lr.basis_len = read_int(e, where, "I", lr.basis_len);
            lr.rank = read_int(e, where, "D", lr.rank);
            lr.forget = read<double>(e, where, "alpha", lr.forget);
            lr.init_scale = read<double>(e, where, "delta", lr.init_scale);
            lr.init_relative = read<bool>(e, where, "relative_delta", lr.init_relative);
            if (e.contains("basis_init"))
                lr.basis_init = parse_basis_init(read<std::string>(e, where, "basis_init", ""), where);
            spec.use_fba = read<bool>(e, where, "fba", spec.use_fba);
            spec.num_sources = read_int(e, where, "K", spec.num_sources);
            cfg.estimators.push_back(spec);
        }
    }

    // Semantic validation.
    if (cfg.trials < 1)
        throw ConfigError("key 'harness.trials' must be >= 1");
    try {
        cfg.geometry.validate();
        cfg.grid.validate();
        cfg.scenario.set_snr_db(cfg.snr_list_db.front());
        cfg.scenario.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (!(cfg.scenario.source_power > 0.0))
        throw ConfigError("key 'scenario.source_power' must be > 0");
    const int m = cfg.geometry.num_sensors;
    for (std::size_t i = 0; i < cfg.estimators.size(); ++i) {
        auto& spec = cfg.estimators[i];
        spec.grid = cfg.grid;
        const std::string where = "estimators[" + std::to_string(i) + "]";
        const int k = spec.num_sources >= 0 ? spec.num_sources : cfg.scenario.num_sources();
        if (k >= m)
            throw ConfigError("key '" + where + ".K' must be < M");
        if (spec.method == Method::alrd || spec.method == Method::malrd) {
            try {
                spec.low_rank.grid = cfg.grid;
                spec.low_rank.validate(m);
            } catch (const DomainError& e) {
                throw ConfigError(where + ": " + e.what());
            }
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig& config)
{
    json doc;
    doc["geometry"] = {{"M", config.geometry.num_sensors}, {"spacing_ratio", config.geometry.spacing_ratio}};

    const auto& sc = config.scenario;
    json scenario = {{"doas", sc.doas_deg},
                     {"N", sc.num_snapshots},
                     {"rho", sc.correlation_coeff},
                     {"seed", sc.rng_seed},
                     {"source_power", sc.source_power}};
    if (config.snr_list_db.size() == 1)
        scenario["snr"] = config.snr_list_db.front();
    else
        scenario["snr_list"] = config.snr_list_db;
    if (sc.correlated_pair)
        scenario["correlated_pair"] = {sc.correlated_pair->first, sc.correlated_pair->second};
    else
        scenario["correlated_pair"] = nullptr;
    doc["scenario"] = scenario;

    json estimators = json::array();
    for (const auto& e : config.estimators) {
        json block = {{"method", std::string(to_string(e.method))}, {"K", e.num_sources}};
        if (e.method == Method::alrd || e.method == Method::malrd) {
            block["I"] = e.low_rank.basis_len;
            block["D"] = e.low_rank.rank;
            block["alpha"] = e.low_rank.forget;
            block["delta"] = e.low_rank.init_scale;
            block["relative_delta"] = e.low_rank.init_relative;
            block["basis_init"] = basis_init_tag(e.low_rank.basis_init);
        } else {
            block["fba"] = e.use_fba;
        }
        estimators.push_back(block);
    }
    doc["estimators"] = estimators;
    doc["harness"] = {{"trials", config.trials},
                      {"grid_start", config.grid.start_deg},
                      {"grid_stop", config.grid.stop_deg},
                      {"grid_step", config.grid.step_deg},
                      {"threads", config.threads}};
    doc["output"] = {{"directory", config.output_dir.string()}, {"emit_plot_script", config.emit_plot_script}};
    return doc;
}

} // namespace lrdoa
