#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrdoa/eval_harness.hpp"
#include "lrdoa/signal_model.hpp"

namespace lrdoa {

/// Raised for schema violations; the message names the offending key.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Everything one CLI invocation needs. Block and key names:
///   geometry   { M, spacing_ratio }
///   scenario   { doas, snr | snr_list, N, correlated_pair, rho, seed, source_power }
///   estimators [ { method, I, D, alpha, delta, relative_delta, basis_init, fba, K } ]
///   harness    { trials, grid_start, grid_stop, grid_step, threads }
///   output     { directory, emit_plot_script }
struct ExperimentConfig {
    UlaGeometry geometry;
    SourceScenario scenario;           ///< noise power set from the first SNR
    std::vector<double> snr_list_db;   ///< one entry when `snr` is given
    std::vector<EstimatorSpec> estimators;
    int trials = 100;
    ScanGrid grid;
    unsigned threads = 0;
    std::filesystem::path output_dir = "out";
    bool emit_plot_script = true;

    /// Spec for the given method: the configured block, else its defaults.
    EstimatorSpec estimator_for(Method method) const;
};

/// Paper-scale defaults: M=60, 15 sources (0 and 1 correlated at 0.7), N=20,
/// SNR -10..20 dB, all five methods, 100 trials, 0.3 degree grid.
ExperimentConfig default_experiment();

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

} // namespace lrdoa
