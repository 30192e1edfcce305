#include "lrdoa/malrd_rls.hpp"

#include <cmath>

namespace lrdoa {

MalrdState malrd_init(const MalrdConfig& config, const HankelEmbedding& steering_hankel)
{
    config.validate(steering_hankel.source_len);
    if (steering_hankel.window != config.basis_len)
        throw DomainError("malrd_init: steering embedding window differs from I");

    const int rank = config.rank;
    const int len = config.basis_len;
    MalrdState st;
    st.selection = selection_operator(steering_hankel.source_len, rank, len);
    st.basis = detail::initial_basis(config, steering_hankel);
    st.aux = CVector::Constant(rank, Complex(1.0 / rank, 0.0));
    st.inv_rs = CMatrix::Identity(len, len) / config.init_scale;
    st.inv_rd = CMatrix::Identity(rank, rank) / config.init_scale;
    st.a_bar = gather_rows(steering_hankel, st.selection) * st.basis.conjugate();
    return st;
}

Complex malrd_basis_constraint(const MalrdState& state, const HankelEmbedding& steering_hankel)
{
    const CMatrix qa = gather_rows(steering_hankel, state.selection);
    return state.aux.dot(qa * state.basis.conjugate());
}

void malrd_update_basis(MalrdState& state, const MalrdConfig& config, const HankelEmbedding& snapshot_hankel,
                        const HankelEmbedding& steering_hankel, OpCounter* ops)
{
    const CMatrix qr = gather_rows(snapshot_hankel, state.selection);
    const CMatrix qa = gather_rows(steering_hankel, state.selection);
    const CVector w_conj = state.aux.conjugate();

    const CVector u = qr.transpose() * w_conj;
    const CVector b = qa.transpose() * w_conj;
    const auto len = static_cast<std::uint64_t>(config.basis_len);
    count(ops, 2 * len * static_cast<std::uint64_t>(state.rank()));

    rank1_inverse_update_inplace(state.inv_rs, u, u, config.forget, ops);

    const CVector z = state.inv_rs * b;
    const Complex den = b.dot(z);
    count(ops, len * len + 2 * len);
    if (!(std::abs(den) >= 1e-300) || !std::isfinite(std::abs(den)))
        throw SingularityError("malrd_update_basis: normalization denominator is singular");
    state.basis = z / den;
}

void malrd_update_aux(MalrdState& state, const MalrdConfig& config, const HankelEmbedding& snapshot_hankel,
                      const HankelEmbedding& steering_hankel, OpCounter* ops)
{
    const CVector s_conj = state.basis.conjugate();
    const CVector r_bar = gather_rows(snapshot_hankel, state.selection) * s_conj;
    state.a_bar = gather_rows(steering_hankel, state.selection) * s_conj;
    count(ops, 2 * static_cast<std::uint64_t>(state.rank()) * static_cast<std::uint64_t>(config.basis_len));
    detail::advance_aux(state.inv_rd, state.aux, r_bar, state.a_bar, config.forget, ops);
    ++state.snapshots_seen;
}

double malrd_power(const MalrdState& state)
{
    if (state.snapshots_seen < 1)
        throw DomainError("malrd_power: no snapshots processed");
    return detail::output_power(state.inv_rd, state.a_bar);
}

Spectrum malrd_scan(const MalrdConfig& requested, const SnapshotBatch& batch, const UlaGeometry& geometry,
                    OpCounter* ops)
{
    if (batch.num_snapshots() < 1)
        throw DomainError("malrd_scan: empty batch");
    if (batch.num_sensors() != geometry.num_sensors)
        throw DomainError("malrd_scan: batch rows differ from geometry");
    requested.validate(geometry.num_sensors);
    const auto config = requested.resolved_for(batch.data);

    std::vector<HankelEmbedding> embedded;
    embedded.reserve(static_cast<std::size_t>(batch.num_snapshots()));
    for (int i = 0; i < batch.num_snapshots(); ++i)
        embedded.push_back(hankel_embed(batch.data.col(i), config.basis_len));

    Spectrum out;
    out.angles_deg = config.grid.angles();
    out.power.assign(out.angles_deg.size(), 0.0);

    for (std::size_t n = 0; n < out.angles_deg.size(); ++n) {
        const double theta = out.angles_deg[n];
        const HankelEmbedding steering = hankel_embed(steering_vector(geometry, theta), config.basis_len);
        try {
            MalrdState st = malrd_init(config, steering);
            for (const auto& snap : embedded) {
                malrd_update_basis(st, config, snap, steering, ops);
                malrd_update_aux(st, config, snap, steering, ops);
            }
            out.power[n] = malrd_power(st);
        } catch (const SingularityError& e) {
            out.power[n] = 0.0;
            out.diagnostics.push_back({theta, e.what()});
        }
    }
    return out;
}

} // namespace lrdoa
