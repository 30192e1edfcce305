#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "lrdoa/signal_model.hpp"
#include "lrdoa/spectrum.hpp"
#include "lrdoa/types.hpp"

namespace lrdoa {

struct BaselineConfig {
    int num_sources = 15; ///< model order K, assumed known
    bool use_fba = true;
    ScanGrid grid;
};

enum class BaselineMethod { capon, music, esprit };

std::optional<BaselineMethod> parse_baseline_method(std::string_view tag);

/// P(theta) = 1 / (a^H R^{-1} a). A covariance with condition number above
/// 1e12 is loaded with 1e-8 * trace / M first.
Spectrum capon_spectrum(const CMatrix& r, const UlaGeometry& geometry, const BaselineConfig& config,
                        OpCounter* ops = nullptr);

/// P(theta) = 1 / ||E_n^H a||^2 with E_n the M - K weakest eigenvectors.
Spectrum music_spectrum(const CMatrix& r, const UlaGeometry& geometry, const BaselineConfig& config,
                        OpCounter* ops = nullptr);

/// LS-ESPRIT over maximally overlapping subarrays; angles ascending.
std::vector<double> esprit_estimate(const CMatrix& r, const UlaGeometry& geometry, int num_sources,
                                    OpCounter* ops = nullptr);

/// Sample covariance, optional forward-backward averaging, then the method.
std::vector<double> baseline_estimate(const SnapshotBatch& batch, const UlaGeometry& geometry,
                                      const BaselineConfig& config, BaselineMethod method,
                                      OpCounter* ops = nullptr);

/// Covariance the baselines operate on (FBA applied per config).
CMatrix baseline_covariance(const SnapshotBatch& batch, const BaselineConfig& config);

} // namespace lrdoa
