#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lrdoa/baselines.hpp"
#include "lrdoa/low_rank.hpp"
#include "lrdoa/signal_model.hpp"
#include "lrdoa/spectrum.hpp"

namespace lrdoa {

enum class Method { malrd, alrd, music, capon, esprit };

std::string_view to_string(Method method) noexcept;
std::optional<Method> parse_method(std::string_view tag);
bool is_spectral(Method method) noexcept;

/// One estimator as configured for an experiment.
struct EstimatorSpec {
    Method method = Method::malrd;
    LowRankConfig low_rank;  ///< ALRD/MALRD only
    bool use_fba = true;     ///< baselines only
    int num_sources = -1;    ///< model order; -1 takes it from the scenario
    ScanGrid grid;

    /// Paper defaults for the method (I=12, D=5, alpha=0.998, FBA on).
    static EstimatorSpec defaults(Method method);
};

Spectrum estimate_spectrum(const EstimatorSpec& spec, const SnapshotBatch& batch, const UlaGeometry& geometry,
                           int num_sources, OpCounter* ops = nullptr);

/// K estimated DOAs, ascending.
std::vector<double> estimate_doas(const EstimatorSpec& spec, const SnapshotBatch& batch,
                                  const UlaGeometry& geometry, int num_sources, OpCounter* ops = nullptr);

struct TrialResult {
    std::vector<double> estimated_doas; ///< ascending
    bool resolved = false;
    std::vector<double> squared_errors; ///< deg^2, paired by order statistics
    std::uint64_t op_count = 0;
    std::uint64_t batch_hash = 0;
    std::string failure; ///< empty unless the estimator threw
};

/// Every estimate within half the neighbor gap of its true DOA. Source k
/// uses the gap to k-1; the first source uses the gap to the second. A single
/// source has no neighbor and is always resolved.
bool check_resolution(std::vector<double> true_doas, std::vector<double> est_doas);

TrialResult evaluate_trial(const std::vector<double>& true_doas, std::vector<double> est_doas);

/// sqrt( sum over trials and sources of squared error / (trials * K) ).
double rmse(const std::vector<TrialResult>& trials);

/// RMSE over the resolved trials only; NaN when none resolved.
double rmse_resolved_only(const std::vector<TrialResult>& trials);

/// Stochastic (unconditional) Cramer-Rao bound for the ULA model with the
/// scenario's source covariance, as sqrt(mean_k CRB_kk) in degrees. This is a
/// reference curve only.
double crb_reference(const SourceScenario& scenario, const UlaGeometry& geometry);

struct SweepReport {
    Method method = Method::malrd;
    std::vector<double> snr_grid_db;
    std::vector<double> resolution_prob;
    std::vector<double> rmse_deg;
    std::vector<double> rmse_resolved_deg;
    std::vector<double> crb_deg;
    std::vector<double> mean_op_count;
    int trials = 0;
    std::vector<std::vector<TrialResult>> results; ///< [snr][trial]
};

struct SweepOptions {
    int trials = 100;
    std::uint64_t master_seed = 1;
    unsigned threads = 0; ///< 0 = hardware concurrency
};

/// Monte Carlo sweep. Trial t at SNR index s draws one batch from
/// derive_seed(master_seed, s, t) and feeds it to every method.
std::vector<SweepReport> run_sweep(const std::vector<EstimatorSpec>& methods, const SourceScenario& scenario,
                                   const UlaGeometry& geometry, const std::vector<double>& snr_list_db,
                                   const SweepOptions& options);

enum class ProbeAxis { basis_len, rank, snapshots };

struct ProbeResult {
    std::vector<double> values;
    std::vector<double> op_counts;
    double slope = 0.0; ///< least-squares log-log slope
};

/// Counts estimator multiply-accumulates while varying one parameter of a
/// base spec, on random batches with the given geometry.
ProbeResult complexity_probe(const EstimatorSpec& base, const UlaGeometry& geometry, int num_snapshots,
                             ProbeAxis axis, const std::vector<int>& values, std::uint64_t seed = 1);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace lrdoa
