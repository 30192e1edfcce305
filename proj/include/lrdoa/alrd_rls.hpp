#pragma once

#include <vector>

#include "lrdoa/hankel_linalg.hpp"
#include "lrdoa/low_rank.hpp"
#include "lrdoa/signal_model.hpp"
#include "lrdoa/spectrum.hpp"

namespace lrdoa {

/// Per-scanning-angle state of the ALRD-RLS recursions.
struct AlrdState {
    std::vector<int> selection;               ///< mu_d
    std::vector<CVector> basis;               ///< s_d, I x 1 each
    CVector aux;                              ///< omega_bar, D x 1
    std::vector<CMatrix> inv_rsd;             ///< tracked R_{s,d}^{-1}
    std::vector<std::vector<CVector>> ledger; ///< P_{d,j}, diagonal entries unused
    CMatrix inv_rd;                           ///< tracked R_D^{-1}
    CVector a_bar;                            ///< a_bar[d] = (row mu_d of A_n) s_d^*
    int snapshots_seen = 0;

    int rank() const noexcept { return static_cast<int>(basis.size()); }
};

AlrdState alrd_init(const AlrdConfig& config, const HankelEmbedding& steering_hankel);

/// a_bar[d] = (row mu_d of A_n) . conj(s_d) for the current basis.
CVector alrd_steering_reduction(const AlrdState& state, const HankelEmbedding& steering_hankel);

/// r_bar_D[d] = (row mu_d of R(i)) . conj(s_d).
CVector alrd_reduce(const AlrdState& state, const HankelEmbedding& snapshot_hankel);

/// Advances R_{s,d}^{-1} and the cross terms P_{d,j} with the current snapshot,
/// then solves the constrained normal equations for s_d (0-based d).
void update_basis(AlrdState& state, const AlrdConfig& config, const HankelEmbedding& snapshot_hankel,
                  const HankelEmbedding& steering_hankel, int d, OpCounter* ops = nullptr);

/// Reduces the snapshot, advances R_D^{-1}, refreshes a_bar and re-solves
/// omega_bar under omega_bar^H a_bar = 1.
void update_aux(AlrdState& state, const AlrdConfig& config, const HankelEmbedding& snapshot_hankel,
                const HankelEmbedding& steering_hankel, OpCounter* ops = nullptr);

double alrd_power(const AlrdState& state);

/// Full scan: per grid angle, D basis updates and one aux update per snapshot.
/// Angles whose recursions go singular get power 0 and a diagnostic entry.
Spectrum alrd_scan(const AlrdConfig& config, const SnapshotBatch& batch, const UlaGeometry& geometry,
                   OpCounter* ops = nullptr);

} // namespace lrdoa
