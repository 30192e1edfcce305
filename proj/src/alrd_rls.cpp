#include "lrdoa/alrd_rls.hpp"

#include <cmath>

namespace lrdoa {

namespace {

std::vector<HankelEmbedding> embed_batch(const SnapshotBatch& batch, int window)
{
    std::vector<HankelEmbedding> out;
    out.reserve(static_cast<std::size_t>(batch.num_snapshots()));
    for (int i = 0; i < batch.num_snapshots(); ++i)
        out.push_back(hankel_embed(batch.data.col(i), window));
    return out;
}

} // namespace

AlrdState alrd_init(const AlrdConfig& config, const HankelEmbedding& steering_hankel)
{
    config.validate(steering_hankel.source_len);
    if (steering_hankel.window != config.basis_len)
        throw DomainError("alrd_init: steering embedding window differs from I");

    const int rank = config.rank;
    const int len = config.basis_len;
    AlrdState st;
    st.selection = selection_operator(steering_hankel.source_len, rank, len);
    st.basis.assign(static_cast<std::size_t>(rank), detail::initial_basis(config, steering_hankel));
    st.aux = CVector::Constant(rank, Complex(1.0 / rank, 0.0));
    st.inv_rsd.assign(static_cast<std::size_t>(rank), CMatrix::Identity(len, len) / config.init_scale);
    st.ledger.assign(static_cast<std::size_t>(rank),
                     std::vector<CVector>(static_cast<std::size_t>(rank), CVector::Zero(len)));
    st.inv_rd = CMatrix::Identity(rank, rank) / config.init_scale;
    st.a_bar = alrd_steering_reduction(st, steering_hankel);
    return st;
}

CVector alrd_steering_reduction(const AlrdState& state, const HankelEmbedding& steering_hankel)
{
    CVector a_bar(state.rank());
    for (int d = 0; d < state.rank(); ++d) {
        const auto mu = state.selection[static_cast<std::size_t>(d)];
        a_bar[d] = state.basis[static_cast<std::size_t>(d)].dot(steering_hankel.data.row(mu).transpose());
    }
    return a_bar;
}

CVector alrd_reduce(const AlrdState& state, const HankelEmbedding& snapshot_hankel)
{
    return alrd_steering_reduction(state, snapshot_hankel);
}

void update_basis(AlrdState& state, const AlrdConfig& config, const HankelEmbedding& snapshot_hankel,
                  const HankelEmbedding& steering_hankel, int d, OpCounter* ops)
{
    const int rank = state.rank();
    if (d < 0 || d >= rank)
        throw DomainError("update_basis: basis index out of range");
    const auto len = static_cast<std::uint64_t>(config.basis_len);
    const auto du = static_cast<std::size_t>(d);
    const double alpha = config.forget;
    const Complex w_d = state.aux[d];

    auto data_row = [&](int j) -> CVector {
        return snapshot_hankel.data.row(state.selection[static_cast<std::size_t>(j)]).transpose();
    };
    auto steer_row = [&](int j) -> CVector {
        return steering_hankel.data.row(state.selection[static_cast<std::size_t>(j)]).transpose();
    };

    // R_{s,d} <- alpha R_{s,d} + |w_d|^2 u_d u_d^H. A vanishing weight would
    // make beta = 1/|w_d|^2 unbounded, so the data term is skipped.
    const CVector u_d = data_row(d);
    CMatrix& inv = state.inv_rsd[du];
    if (std::abs(w_d) >= 1e-12) {
        const CVector scaled = std::conj(w_d) * u_d;
        rank1_inverse_update_inplace(inv, scaled, scaled, alpha, ops);
    } else {
        rank1_inverse_update_inplace(inv, CVector::Zero(u_d.size()), CVector::Zero(u_d.size()), alpha, ops);
    }

    // P_{d,j} <- alpha P_{d,j} + u_d conj(w_d) w_j (u_j^H s_j), freshest s_j.
    CVector sum_p = CVector::Zero(u_d.size());
    Complex others = 0.0;
    for (int j = 0; j < rank; ++j) {
        if (j == d)
            continue;
        const auto ju = static_cast<std::size_t>(j);
        const CVector& s_j = state.basis[ju];
        const Complex proj = data_row(j).dot(s_j);
        CVector& p = state.ledger[du][ju];
        p = alpha * p + (std::conj(w_d) * state.aux[j] * proj) * u_d;
        sum_p += p;
        others += state.aux[j] * steer_row(j).dot(s_j);
        count(ops, 5 * len);
    }

    const CVector pi_h = std::conj(w_d) * steer_row(d);
    const CVector z = inv * pi_h;
    const CVector t = inv * sum_p;
    const Complex den = pi_h.dot(z);
    const Complex num = others - 1.0 - pi_h.dot(t);
    count(ops, 2 * len * len + 4 * len);
    if (!(std::abs(den) >= 1e-300) || !std::isfinite(std::abs(den)))
        throw SingularityError("update_basis: Lagrange multiplier denominator is singular");
    const Complex lambda = num / den;

    state.basis[du] = -t - lambda * z;
}

void update_aux(AlrdState& state, const AlrdConfig& config, const HankelEmbedding& snapshot_hankel,
                const HankelEmbedding& steering_hankel, OpCounter* ops)
{
    const CVector r_bar = alrd_reduce(state, snapshot_hankel);
    state.a_bar = alrd_steering_reduction(state, steering_hankel);
    count(ops, 2 * static_cast<std::uint64_t>(state.rank()) * static_cast<std::uint64_t>(config.basis_len));
    detail::advance_aux(state.inv_rd, state.aux, r_bar, state.a_bar, config.forget, ops);
    ++state.snapshots_seen;
}

double alrd_power(const AlrdState& state)
{
    if (state.snapshots_seen < 1)
        throw DomainError("alrd_power: no snapshots processed");
    return detail::output_power(state.inv_rd, state.a_bar);
}

Spectrum alrd_scan(const AlrdConfig& requested, const SnapshotBatch& batch, const UlaGeometry& geometry,
                   OpCounter* ops)
{
    if (batch.num_snapshots() < 1)
        throw DomainError("alrd_scan: empty batch");
    if (batch.num_sensors() != geometry.num_sensors)
        throw DomainError("alrd_scan: batch rows differ from geometry");
    requested.validate(geometry.num_sensors);
    const auto config = requested.resolved_for(batch.data);

    const auto embedded = embed_batch(batch, config.basis_len);
    Spectrum out;
    out.angles_deg = config.grid.angles();
    out.power.assign(out.angles_deg.size(), 0.0);

    for (std::size_t n = 0; n < out.angles_deg.size(); ++n) {
        const double theta = out.angles_deg[n];
        const HankelEmbedding steering = hankel_embed(steering_vector(geometry, theta), config.basis_len);
        try {
            AlrdState st = alrd_init(config, steering);
            for (const auto& snap : embedded) {
                for (int d = 0; d < config.rank; ++d)
                    update_basis(st, config, snap, steering, d, ops);
                update_aux(st, config, snap, steering, ops);
            }
            out.power[n] = alrd_power(st);
        } catch (const SingularityError& e) {
            out.power[n] = 0.0;
            out.diagnostics.push_back({theta, e.what()});
        }
    }
    return out;
}

} // namespace lrdoa
