#include "lrdoa/hankel_linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace lrdoa {

HankelEmbedding hankel_embed(const CVector& x, int window)
{
    const int m_count = static_cast<int>(x.size());
    if (window < 1 || window > m_count)
        throw DomainError("hankel_embed: window " + std::to_string(window) + " outside [1, " +
                          std::to_string(m_count) + "]");
    HankelEmbedding h;
    h.source_len = m_count;
    h.window = window;
    h.data = CMatrix::Zero(m_count, window);
    for (int m = 0; m < m_count; ++m)
        for (int j = 0; j < window && m + j < m_count; ++j)
            h.data(m, j) = x[m + j];
    return h;
}

CovarianceEstimate sample_covariance(const CMatrix& batch)
{
    if (batch.cols() < 1 || batch.rows() < 1)
        throw DomainError("sample_covariance: empty batch");
    CovarianceEstimate est;
    est.num_snapshots = static_cast<int>(batch.cols());
    CMatrix r = batch * batch.adjoint() / static_cast<double>(batch.cols());
    est.matrix = (r + r.adjoint()) / 2.0;
    return est;
}

CMatrix forward_backward_average(const CMatrix& r)
{
    if (r.rows() != r.cols())
        throw DomainError("forward_backward_average: matrix is not square");
    const Eigen::Index n = r.rows();
    CMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = 0.5 * (r(i, j) + std::conj(r(n - 1 - i, n - 1 - j)));
    return out;
}

HermitianEig hermitian_eig(const CMatrix& r)
{
    if (r.rows() != r.cols())
        throw DomainError("hermitian_eig: matrix is not square");
    const double scale = r.norm();
    if ((r - r.adjoint()).norm() > 1e-10 * std::max(scale, 1e-300))
        throw DomainError("hermitian_eig: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(r);
    if (solver.info() != Eigen::Success)
        throw SingularityError("hermitian_eig: eigensolver did not converge");

    // Eigen returns ascending order.
    HermitianEig eig;
    eig.values = solver.eigenvalues().reverse();
    eig.vectors = solver.eigenvectors().rowwise().reverse();
    return eig;
}

CVector rank1_inverse_update_inplace(CMatrix& inv, const CVector& u, const CVector& v, double forget,
                                     OpCounter* ops)
{
    if (!(forget > 0.0 && forget <= 1.0))
        throw DomainError("rank1_inverse_update: forgetting factor must lie in (0, 1]");
    const Eigen::Index n = inv.rows();
    if (inv.cols() != n || u.size() != n || v.size() != n)
        throw DomainError("rank1_inverse_update: dimension mismatch");

    CVector inv_u = inv * u;
    Eigen::RowVectorXcd vh_inv = v.adjoint() * inv;
    const Complex den = forget + v.dot(inv_u);
    if (!(std::abs(den) >= 1e-300) || !std::isfinite(std::abs(den)))
        throw SingularityError("rank1_inverse_update: singular denominator");
    CVector gain = inv_u / den;
    inv.noalias() -= gain * vh_inv;
    inv /= forget;
    count(ops, static_cast<std::uint64_t>(3 * n * n + n));
    return gain;
}

Rank1Update rank1_inverse_update(const CMatrix& inv, const CVector& u, const CVector& v, double forget)
{
    Rank1Update out;
    out.inv_next = inv;
    out.gain = rank1_inverse_update_inplace(out.inv_next, u, v, forget);
    return out;
}

} // namespace lrdoa
