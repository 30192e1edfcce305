#include "lrdoa/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

namespace lrdoa {

void UlaGeometry::validate() const
{
    if (num_sensors < 2)
        throw DomainError("geometry: num_sensors must be >= 2");
    if (!(spacing_ratio > 0.0) || !std::isfinite(spacing_ratio))
        throw DomainError("geometry: spacing_ratio must be > 0");
}

double SourceScenario::snr_db() const
{
    return 10.0 * std::log10(source_power / noise_power);
}

void SourceScenario::set_snr_db(double snr_db)
{
    noise_power = source_power * std::pow(10.0, -snr_db / 10.0);
}

void SourceScenario::validate() const
{
    if (doas_deg.empty())
        throw DomainError("scenario: at least one DOA is required");
    for (std::size_t k = 0; k < doas_deg.size(); ++k) {
        const double theta = doas_deg[k];
        if (!(theta > 0.0 && theta < 180.0))
            throw DomainError("scenario: DOA " + std::to_string(theta) + " outside (0, 180)");
        if (k > 0 && !(theta > doas_deg[k - 1]))
            throw DomainError("scenario: DOAs must be strictly ascending");
    }
    if (!(source_power >= 0.0) || !std::isfinite(source_power))
        throw DomainError("scenario: source_power must be >= 0");
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
        throw DomainError("scenario: noise_power must be >= 0");
    if (num_snapshots < 1)
        throw DomainError("scenario: num_snapshots must be >= 1");
    if (correlated_pair) {
        const auto [p, q] = *correlated_pair;
        const int k = num_sources();
        if (p < 0 || q < 0 || p >= k || q >= k || p == q)
            throw DomainError("scenario: correlated_pair must name two distinct source indices");
        if (!(correlation_coeff >= 0.0 && correlation_coeff < 1.0))
            throw DomainError("scenario: correlation coefficient must lie in [0, 1)");
    }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept
{
    auto mix = [](std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(master) ^ a) ^ (b * 0xD1B54A32D192ED03ull));
}

CVector steering_vector(const UlaGeometry& geometry, double theta_deg)
{
    if (!(theta_deg > 0.0 && theta_deg < 180.0))
        throw DomainError("steering_vector: theta " + std::to_string(theta_deg) + " outside (0, 180)");
    const int m_count = geometry.num_sensors;
    const double phase = -2.0 * kPi * geometry.spacing_ratio * std::cos(deg2rad(theta_deg));
    CVector a(m_count);
    for (int m = 0; m < m_count; ++m)
        a[m] = std::polar(1.0, phase * m);
    return a;
}

CMatrix steering_matrix(const UlaGeometry& geometry, const std::vector<double>& thetas_deg)
{
    CMatrix a(geometry.num_sensors, static_cast<Eigen::Index>(thetas_deg.size()));
    for (std::size_t k = 0; k < thetas_deg.size(); ++k)
        a.col(static_cast<Eigen::Index>(k)) = steering_vector(geometry, thetas_deg[k]);
    return a;
}

CMatrix generate_source_matrix(const SourceScenario& scenario, Rng& rng)
{
    scenario.validate();
    const int k_count = scenario.num_sources();
    const int n_count = scenario.num_snapshots;
    const double sigma = std::sqrt(scenario.source_power);

    CMatrix s(k_count, n_count);
    std::normal_distribution<double> gauss(0.0, 1.0);

    int lead = -1;
    int follow = -1;
    if (scenario.correlated_pair) {
        lead = scenario.correlated_pair->first;
        follow = scenario.correlated_pair->second;
    }
    for (int k = 0; k < k_count; ++k) {
        if (k == follow)
            continue;
        for (int i = 0; i < n_count; ++i) {
            if (k == lead)
                s(k, i) = sigma * gauss(rng);
            else
                s(k, i) = (rng() >> 63) != 0 ? sigma : -sigma;
        }
    }
    if (follow >= 0) {
        const double rho = scenario.correlation_coeff;
        const double innov = std::sqrt(1.0 - rho * rho);
        for (int i = 0; i < n_count; ++i)
            s(follow, i) = rho * s(lead, i).real() + innov * sigma * gauss(rng);
    }
    return s;
}

SnapshotBatch snapshots_from_sources(const UlaGeometry& geometry, const SourceScenario& scenario,
                                     const CMatrix& sources, Rng& rng)
{
    geometry.validate();
    scenario.validate();
    if (sources.rows() != scenario.num_sources() || sources.cols() != scenario.num_snapshots)
        throw DomainError("snapshots_from_sources: source matrix shape mismatch");

    SnapshotBatch batch;
    batch.scenario = scenario;
    batch.geometry = geometry;
    batch.data = steering_matrix(geometry, scenario.doas_deg) * sources;

    if (scenario.noise_power > 0.0) {
        std::normal_distribution<double> gauss(0.0, std::sqrt(scenario.noise_power / 2.0));
        for (Eigen::Index i = 0; i < batch.data.cols(); ++i)
            for (Eigen::Index m = 0; m < batch.data.rows(); ++m) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                batch.data(m, i) += Complex(re, im);
            }
    }
    return batch;
}

SnapshotBatch generate_snapshots(const UlaGeometry& geometry, const SourceScenario& scenario, Rng& rng)
{
    const CMatrix sources = generate_source_matrix(scenario, rng);
    return snapshots_from_sources(geometry, scenario, sources, rng);
}

SnapshotBatch generate_snapshots(const UlaGeometry& geometry, const SourceScenario& scenario)
{
    Rng rng(scenario.rng_seed);
    return generate_snapshots(geometry, scenario, rng);
}

std::vector<double> default_doas()
{
    std::vector<double> doas;
    for (int k = 0; k < 15; ++k)
        doas.push_back(20.0 + 8.0 * k);
    return doas;
}

SourceScenario paper_scenario(double snr_db, std::uint64_t seed)
{
    SourceScenario sc;
    sc.doas_deg = default_doas();
    sc.source_power = 1.0;
    sc.set_snr_db(snr_db);
    sc.correlated_pair = std::make_pair(0, 1);
    sc.correlation_coeff = 0.7;
    sc.num_snapshots = 20;
    sc.rng_seed = seed;
    return sc;
}

std::uint64_t batch_hash(const SnapshotBatch& batch) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    const auto* bytes = reinterpret_cast<const unsigned char*>(batch.data.data());
    const std::size_t len = static_cast<std::size_t>(batch.data.size()) * sizeof(Complex);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace lrdoa
