#pragma once

#include <vector>

#include "lrdoa/hankel_linalg.hpp"
#include "lrdoa/low_rank.hpp"
#include "lrdoa/signal_model.hpp"
#include "lrdoa/spectrum.hpp"

namespace lrdoa {

/// Per-scanning-angle state of MALRD-RLS: one basis vector shared by all
/// D segments.
struct MalrdState {
    std::vector<int> selection; ///< mu_d, rows gathered by Q
    CVector basis;              ///< s, I x 1
    CVector aux;                ///< omega_bar, D x 1
    CMatrix inv_rs;             ///< tracked R_s^{-1}
    CMatrix inv_rd;             ///< tracked R_D^{-1}
    CVector a_bar;              ///< Q A_n s^*
    int snapshots_seen = 0;

    int rank() const noexcept { return static_cast<int>(aux.size()); }
};

MalrdState malrd_init(const MalrdConfig& config, const HankelEmbedding& steering_hankel);

/// omega_bar^H Q A_n s^*; equals 1 right after a basis update.
Complex malrd_basis_constraint(const MalrdState& state, const HankelEmbedding& steering_hankel);

/// Advances R_s^{-1} with u = R^T(i) Q^T omega_bar^*, then
/// s = R_s^{-1} b / (b^H R_s^{-1} b) with b = A_n^T Q^T omega_bar^*.
void malrd_update_basis(MalrdState& state, const MalrdConfig& config, const HankelEmbedding& snapshot_hankel,
                        const HankelEmbedding& steering_hankel, OpCounter* ops = nullptr);

/// Redefines a_bar = Q A_n s^* and runs the auxiliary-vector RLS step.
void malrd_update_aux(MalrdState& state, const MalrdConfig& config, const HankelEmbedding& snapshot_hankel,
                      const HankelEmbedding& steering_hankel, OpCounter* ops = nullptr);

double malrd_power(const MalrdState& state);

Spectrum malrd_scan(const MalrdConfig& config, const SnapshotBatch& batch, const UlaGeometry& geometry,
                    OpCounter* ops = nullptr);

} // namespace lrdoa
