#include "lrdoa/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "lrdoa/csv_output.hpp"
#include "lrdoa/experiment_config.hpp"
#include "lrdoa/selftest.hpp"

namespace lrdoa::cli {

namespace {

std::optional<ExperimentConfig> load(const CommandOptions& options, std::ostream& log)
{
    try {
        ExperimentConfig cfg = options.config ? load_config(*options.config) : default_experiment();
        if (options.seed)
            cfg.scenario.rng_seed = *options.seed;
        if (options.out_dir)
            cfg.output_dir = *options.out_dir;
        if (options.threads)
            cfg.threads = *options.threads;
        return cfg;
    } catch (const std::exception& e) {
        log << "config error: " << e.what() << '\n';
        return std::nullopt;
    }
}

bool open_output(std::ofstream& out, const std::filesystem::path& path, std::ostream& log)
{
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    out.open(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        log << "cannot write " << path.string() << '\n';
        return false;
    }
    return true;
}

} // namespace

int cmd_spectrum(const CommandOptions& options, std::ostream& log)
{
    const auto method = parse_method(options.method);
    if (!method) {
        log << "config error: unknown method '" << options.method << "'\n";
        return config_error;
    }
    if (!is_spectral(*method)) {
        log << "config error: method '" << options.method << "' has no spectrum\n";
        return config_error;
    }
    const auto cfg = load(options, log);
    if (!cfg)
        return config_error;

    Spectrum spectrum;
    try {
        SourceScenario scenario = cfg->scenario;
        scenario.set_snr_db(cfg->snr_list_db.front());
        scenario.rng_seed = derive_seed(cfg->scenario.rng_seed, 0, 0);
        const SnapshotBatch batch = generate_snapshots(cfg->geometry, scenario);
        spectrum = estimate_spectrum(cfg->estimator_for(*method), batch, cfg->geometry,
                                     static_cast<int>(scenario.doas_deg.size()));
    } catch (const std::exception& e) {
        log << "estimator failure: " << e.what() << '\n';
        return estimator_failure;
    }
    for (const auto& d : spectrum.diagnostics)
        log << "warning: " << d.tag << " at " << format_number(d.angle_deg) << " deg\n";

    const auto path = cfg->output_dir / ("spectrum_" + std::string(to_string(*method)) + ".csv");
    std::ofstream out;
    if (!open_output(out, path, log))
        return estimator_failure;
    write_spectrum_csv(out, spectrum);
    log << "wrote " << path.string() << " (" << spectrum.size() << " rows)\n";
    return ok;
}

int cmd_sweep(const CommandOptions& options, std::ostream& log)
{
    const auto cfg = load(options, log);
    if (!cfg)
        return config_error;

    std::vector<SweepReport> reports;
    try {
        SweepOptions opts;
        opts.trials = cfg->trials;
        opts.master_seed = cfg->scenario.rng_seed;
        opts.threads = cfg->threads;
        reports = run_sweep(cfg->estimators, cfg->scenario, cfg->geometry, cfg->snr_list_db, opts);
    } catch (const std::exception& e) {
        log << "estimator failure: " << e.what() << '\n';
        return estimator_failure;
    }

    const auto csv = cfg->output_dir / "sweep.csv";
    std::ofstream out;
    if (!open_output(out, csv, log))
        return estimator_failure;
    write_sweep_csv(out, reports);
    out.close();
    log << "wrote " << csv.string() << '\n';

    if (cfg->emit_plot_script) {
        const auto script = cfg->output_dir / "plot_sweep.py";
        std::ofstream py;
        if (!open_output(py, script, log))
            return estimator_failure;
        write_plot_script(py, csv.filename().string());
        log << "wrote " << script.string() << '\n';
    }
    return ok;
}

int cmd_selftest(std::ostream& log, double inject_alpha)
{
    SelftestOptions opts;
    opts.alpha_override = inject_alpha;
    const auto checks = run_selftest(opts);
    int failed = 0;
    for (const auto& c : checks) {
        log << std::left << std::setw(20) << c.name << (c.passed ? "pass" : "FAIL");
        if (!c.passed) {
            log << "  " << c.detail;
            ++failed;
        }
        log << '\n';
    }
    log << checks.size() - failed << '/' << checks.size() << " checks passed\n";
    if (failed) {
        log << "failed:";
        for (const auto& c : checks)
            if (!c.passed)
                log << ' ' << c.name;
        log << '\n';
        return selftest_failed;
    }
    return ok;
}

} // namespace lrdoa::cli
