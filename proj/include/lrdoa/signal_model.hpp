#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "lrdoa/types.hpp"

namespace lrdoa {

struct UlaGeometry {
    int num_sensors = 60;
    double spacing_ratio = 0.5; ///< d_s / lambda_c

    void validate() const;
};

struct SourceScenario {
    std::vector<double> doas_deg;
    double source_power = 1.0;
    double noise_power = 0.1;
    std::optional<std::pair<int, int>> correlated_pair;
    double correlation_coeff = 0.0;
    int num_snapshots = 20;
    std::uint64_t rng_seed = 1;

    int num_sources() const noexcept { return static_cast<int>(doas_deg.size()); }

    /// SNR per source per element, sigma_s^2 / sigma_n^2 in dB.
    double snr_db() const;
    void set_snr_db(double snr_db);

    /// Throws DomainError on any violated invariant. Zero powers are accepted
    /// so that silent-source and noise-free batches can be synthesized.
    void validate() const;
};

struct SnapshotBatch {
    CMatrix data; ///< M x N, column i is snapshot r(i)
    SourceScenario scenario;
    UlaGeometry geometry;

    int num_sensors() const noexcept { return static_cast<int>(data.rows()); }
    int num_snapshots() const noexcept { return static_cast<int>(data.cols()); }
};

using Rng = std::mt19937_64;

/// Mixes a master seed with up to two stream indices into an independent
/// per-trial seed (splitmix64 finalizer chain).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// a(theta)[m] = exp(-2*pi*j*m*spacing_ratio*cos(theta)), 0 < theta < 180.
CVector steering_vector(const UlaGeometry& geometry, double theta_deg);

/// M x K matrix whose columns are steering vectors of the given angles.
CMatrix steering_matrix(const UlaGeometry& geometry, const std::vector<double>& thetas_deg);

/// K x N source samples: BPSK (+-sigma_s) for uncorrelated sources, a real
/// Gaussian AR(1) pair for the correlated sources.
CMatrix generate_source_matrix(const SourceScenario& scenario, Rng& rng);

/// r(i) = A s(i) + n(i) for the given sources; n is circular complex Gaussian
/// with per-element variance noise_power.
SnapshotBatch snapshots_from_sources(const UlaGeometry& geometry, const SourceScenario& scenario,
                                     const CMatrix& sources, Rng& rng);

SnapshotBatch generate_snapshots(const UlaGeometry& geometry, const SourceScenario& scenario, Rng& rng);

/// Seeds a fresh generator from scenario.rng_seed.
SnapshotBatch generate_snapshots(const UlaGeometry& geometry, const SourceScenario& scenario);

/// 15 angles from 20 to 132 degrees in 8 degree steps.
std::vector<double> default_doas();

/// M=60, N=20, K=15 with sources 0 and 1 correlated at 0.7, sigma_s^2 = 1.
SourceScenario paper_scenario(double snr_db, std::uint64_t seed);

/// FNV-1a over the raw bytes of the batch data.
std::uint64_t batch_hash(const SnapshotBatch& batch) noexcept;

} // namespace lrdoa
