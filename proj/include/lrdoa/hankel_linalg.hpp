#pragma once

#include "lrdoa/types.hpp"

namespace lrdoa {

/// M x I zero-padded Hankel matrix of a length-M vector:
/// entry (m, j) = x[m + j] for m + j <= M - 1, else 0.
struct HankelEmbedding {
    int source_len = 0;
    int window = 0;
    CMatrix data;

    /// Row mu as a column vector, i.e. H^T d_mu.
    CVector row_vector(int mu) const { return data.row(mu).transpose(); }
};

HankelEmbedding hankel_embed(const CVector& x, int window);

struct CovarianceEstimate {
    CMatrix matrix;
    int num_snapshots = 0;
};

/// (1/N) sum_i r(i) r(i)^H, symmetrized.
CovarianceEstimate sample_covariance(const CMatrix& batch);

/// (R + J conj(R) J) / 2 with J the exchange matrix.
CMatrix forward_backward_average(const CMatrix& r);

struct HermitianEig {
    RVector values;  ///< descending
    CMatrix vectors; ///< column k pairs with values[k]
};

HermitianEig hermitian_eig(const CMatrix& r);

/// Matrix inversion lemma for A_next = forget * A + u v^H, given A^{-1}.
/// Overwrites inv with A_next^{-1} and returns the gain
/// (A^{-1} u) / (forget + v^H A^{-1} u).
CVector rank1_inverse_update_inplace(CMatrix& inv, const CVector& u, const CVector& v, double forget,
                                     OpCounter* ops = nullptr);

struct Rank1Update {
    CVector gain;
    CMatrix inv_next;
};

Rank1Update rank1_inverse_update(const CMatrix& inv, const CVector& u, const CVector& v, double forget);

} // namespace lrdoa
