#pragma once

#include <vector>

#include "lrdoa/hankel_linalg.hpp"
#include "lrdoa/spectrum.hpp"
#include "lrdoa/types.hpp"

namespace lrdoa {

/// Parameters shared by the ALRD-RLS and MALRD-RLS estimators.
/// Starting point of the basis vectors at every scanning angle.
enum class BasisInit {
    first_canonical, ///< s(0) = e_1
    steering,        ///< s(0) = first I entries of a(theta_n) / I
};

struct LowRankConfig {
    int basis_len = 12;       ///< I
    int rank = 5;             ///< D
    double forget = 0.998;    ///< alpha
    double init_scale = 1.0;  ///< delta, tracked inverses start at delta^{-1} I
    /// When set, scans multiply delta by the batch's mean per-element power
    /// so the regularization tracks the data level.
    bool init_relative = true;
    BasisInit basis_init = BasisInit::steering;
    ScanGrid grid;

    void validate(int num_sensors) const;

    /// The config a scan actually runs with for this batch.
    LowRankConfig resolved_for(const CMatrix& batch) const;
};

using AlrdConfig = LowRankConfig;
using MalrdConfig = LowRankConfig;

/// I = 12, D = 5, alpha = 0.998 with delta = 2 x mean element power.
AlrdConfig default_alrd_config();

/// I = 12, D = 5, alpha = 0.998 with delta = 0.9 x mean element power.
MalrdConfig default_malrd_config();

/// Selection rows mu_d = d * floor(M / D), d = 0..D-1.
std::vector<int> selection_operator(int num_sensors, int rank, int basis_len);

/// Q H: rows mu_d of a Hankel embedding stacked into a D x I matrix.
CMatrix gather_rows(const HankelEmbedding& h, const std::vector<int>& selection);

namespace detail {

/// s(0) for the given steering embedding.
CVector initial_basis(const LowRankConfig& config, const HankelEmbedding& steering_hankel);

/// Shared auxiliary-vector step: advances R_D^{-1} with r_bar, then sets
/// aux = R_D^{-1} a_bar / (a_bar^H R_D^{-1} a_bar).
void advance_aux(CMatrix& inv_rd, CVector& aux, const CVector& r_bar, const CVector& a_bar, double forget,
                 OpCounter* ops);

/// 1 / Re(a_bar^H R_D^{-1} a_bar).
double output_power(const CMatrix& inv_rd, const CVector& a_bar);

} // namespace detail

} // namespace lrdoa
