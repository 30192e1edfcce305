#include "lrdoa/low_rank.hpp"

#include <cmath>
#include <string>

namespace lrdoa {

void LowRankConfig::validate(int num_sensors) const
{
    if (basis_len < 1 || basis_len > num_sensors)
        throw DomainError("low-rank config: basis length I must lie in [1, M]");
    if (rank < 1 || rank > num_sensors)
        throw DomainError("low-rank config: rank D must lie in [1, M]");
    if (!(forget > 0.0 && forget <= 1.0))
        throw DomainError("low-rank config: forgetting factor must lie in (0, 1]");
    if (!(init_scale > 0.0) || !std::isfinite(init_scale))
        throw DomainError("low-rank config: init_scale must be > 0");
    grid.validate();
}

AlrdConfig default_alrd_config()
{
    AlrdConfig c;
    c.init_scale = 2.0;
    return c;
}

MalrdConfig default_malrd_config()
{
    MalrdConfig c;
    c.init_scale = 0.9;
    return c;
}

LowRankConfig LowRankConfig::resolved_for(const CMatrix& batch) const
{
    LowRankConfig out = *this;
    out.init_relative = false;
    if (init_relative && batch.size() > 0) {
        const double level = batch.squaredNorm() / static_cast<double>(batch.size());
        if (level > 0.0 && std::isfinite(level))
            out.init_scale = init_scale * level;
    }
    return out;
}

std::vector<int> selection_operator(int num_sensors, int rank, int basis_len)
{
    if (num_sensors < 1 || rank < 1 || rank > num_sensors)
        throw DomainError("selection_operator: need 1 <= D <= M");
    if (basis_len < 1 || basis_len > num_sensors)
        throw DomainError("selection_operator: need 1 <= I <= M");
    const int stride = num_sensors / rank;
    if ((rank - 1) * stride > num_sensors - 1)
        throw DomainError("selection_operator: selection rows out of range");
    std::vector<int> mu(static_cast<std::size_t>(rank));
    for (int d = 0; d < rank; ++d)
        mu[static_cast<std::size_t>(d)] = d * stride;
    return mu;
}

CMatrix gather_rows(const HankelEmbedding& h, const std::vector<int>& selection)
{
    CMatrix out(static_cast<Eigen::Index>(selection.size()), h.window);
    for (std::size_t d = 0; d < selection.size(); ++d)
        out.row(static_cast<Eigen::Index>(d)) = h.data.row(selection[d]);
    return out;
}

namespace detail {

CVector initial_basis(const LowRankConfig& config, const HankelEmbedding& steering_hankel)
{
    if (config.basis_init == BasisInit::steering)
        return steering_hankel.data.row(0).transpose() / static_cast<double>(config.basis_len);
    return CVector::Unit(config.basis_len, 0);
}

void advance_aux(CMatrix& inv_rd, CVector& aux, const CVector& r_bar, const CVector& a_bar, double forget,
                 OpCounter* ops)
{
    rank1_inverse_update_inplace(inv_rd, r_bar, r_bar, forget, ops);
    const CVector z = inv_rd * a_bar;
    const Complex den = a_bar.dot(z);
    const auto n = static_cast<std::uint64_t>(a_bar.size());
    count(ops, n * n + 2 * n);
    if (!(std::abs(den) >= 1e-300) || !std::isfinite(std::abs(den)))
        throw SingularityError("aux update: a_bar^H R_D^{-1} a_bar is singular");
    aux = z / den;
}

double output_power(const CMatrix& inv_rd, const CVector& a_bar)
{
    const Complex q = a_bar.dot(inv_rd * a_bar);
    const double p = 1.0 / q.real();
    if (!std::isfinite(p) || !(p > 0.0))
        throw SingularityError("output power is not finite and positive");
    return p;
}

} // namespace detail

} // namespace lrdoa
