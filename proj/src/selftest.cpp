#include "lrdoa/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "lrdoa/alrd_rls.hpp"
#include "lrdoa/eval_harness.hpp"
#include "lrdoa/hankel_linalg.hpp"
#include "lrdoa/malrd_rls.hpp"
#include "lrdoa/signal_model.hpp"

namespace lrdoa {

namespace {

CVector random_cvector(Rng& rng, Eigen::Index n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = Complex(g(rng), g(rng));
    return v;
}

CMatrix random_cmatrix(Rng& rng, Eigen::Index rows, Eigen::Index cols)
{
    CMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        a.col(j) = random_cvector(rng, rows);
    return a;
}

double rel_fro(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

struct Context {
    double alpha(double own) const { return std::isfinite(opts.alpha_override) ? opts.alpha_override : own; }
    SelftestOptions opts;
};

std::string fmt(double v)
{
    std::ostringstream s;
    s.precision(3);
    s << v;
    return s.str();
}

// Each check returns an empty string on success, else a failure detail.
std::string check_steering(const Context&)
{
    UlaGeometry g;
    const CVector a = steering_vector(g, 37.2);
    const double dev = (a.cwiseAbs().array() - 1.0).abs().maxCoeff();
    const Complex expect = std::polar(1.0, -kPi * std::cos(deg2rad(37.2)));
    if (dev > 1e-14 || std::abs(a[0] - 1.0) > 0.0 || std::abs(a[1] - expect) > 1e-14)
        return "unit modulus or phase progression violated";
    return {};
}

std::string check_hankel_layout(const Context&)
{
    Rng rng(11);
    for (int m = 1; m <= 12; ++m) {
        const CVector x = random_cvector(rng, m);
        for (int w = 1; w <= m; ++w) {
            const HankelEmbedding h = hankel_embed(x, w);
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < w; ++c) {
                    const Complex expect = r + c < m ? x[r + c] : Complex(0.0);
                    if (h.data(r, c) != expect)
                        return "entry (" + std::to_string(r) + "," + std::to_string(c) + ") wrong for M=" +
                               std::to_string(m) + " I=" + std::to_string(w);
                }
        }
    }
    return {};
}

std::string check_segment_identity(const Context&)
{
    Rng rng(12);
    for (int m = 1; m <= 12; ++m)
        for (int w = 1; w <= std::min(4, m); ++w)
            for (int d = 1; d <= std::min(3, m); ++d) {
                const CVector x = random_cvector(rng, m);
                const auto mu = selection_operator(m, d, w);
                const HankelEmbedding h = hankel_embed(x, w);
                for (int k = 0; k < d; ++k) {
                    const CVector s = random_cvector(rng, w);
                    const Complex via_embed = s.dot(h.row_vector(mu[k]));
                    Complex direct = 0.0;
                    for (int t = 0; t < w; ++t)
                        if (mu[k] + t < m)
                            direct += x[mu[k] + t] * std::conj(s[t]);
                    if (std::abs(via_embed - direct) > 1e-12 * (1.0 + std::abs(direct)))
                        return "segment mismatch at M=" + std::to_string(m);
                }
            }
    return {};
}

std::string check_fba(const Context&)
{
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const CMatrix b = random_cmatrix(rng, 6, 6);
        const CMatrix r = b * b.adjoint();
        const CMatrix f = forward_backward_average(r);
        const Eigen::Index n = f.rows();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (std::abs(f(i, j) - std::conj(f(n - 1 - i, n - 1 - j))) > 1e-12 * r.norm())
                    return "output not persymmetric";
        if (rel_fro(forward_backward_average(f), f) > 1e-14)
            return "not idempotent";
    }
    return {};
}

std::string check_eig(const Context&)
{
    Rng rng(14);
    const CMatrix b = random_cmatrix(rng, 6, 6);
    const CMatrix r = b + b.adjoint();
    const HermitianEig e = hermitian_eig(r);
    const CMatrix rec = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
    if (rel_fro(rec, r) > 1e-10)
        return "reconstruction error " + fmt(rel_fro(rec, r));
    for (Eigen::Index k = 1; k < e.values.size(); ++k)
        if (e.values[k] > e.values[k - 1])
            return "eigenvalues not descending";
    return {};
}

std::string check_sample_covariance(const Context&)
{
    Rng rng(15);
    const CMatrix batch = random_cmatrix(rng, 8, 1000);
    const CMatrix r = sample_covariance(batch).matrix;
    CMatrix brute = CMatrix::Zero(8, 8);
    for (Eigen::Index i = batch.cols() - 1; i >= 0; --i)
        for (Eigen::Index p = 0; p < 8; ++p)
            for (Eigen::Index q = 0; q < 8; ++q)
                brute(p, q) += batch(p, i) * std::conj(batch(q, i));
    brute /= 1000.0;
    if ((r - brute).cwiseAbs().maxCoeff() > 1e-12)
        return "differs from outer-product average";
    return {};
}

std::string check_rank1(const Context& ctx)
{
    Rng rng(16);
    const double alpha = ctx.alpha(0.97);
    const int n = 5;
    CMatrix acc = CMatrix::Identity(n, n);
    CMatrix inv = CMatrix::Identity(n, n);
    for (int k = 0; k < 50; ++k) {
        const CVector u = random_cvector(rng, n);
        acc = alpha * acc + u * u.adjoint();
        rank1_inverse_update_inplace(inv, u, u, alpha);
    }
    const double err = rel_fro(inv, acc.inverse());
    if (err > 1e-8)
        return "tracked inverse error " + fmt(err);
    return {};
}

SnapshotBatch small_batch(int m, int n, std::uint64_t seed)
{
    UlaGeometry g;
    g.num_sensors = m;
    SourceScenario sc;
    sc.doas_deg = {40.0, 75.0};
    sc.num_snapshots = n;
    sc.set_snr_db(10.0);
    sc.rng_seed = seed;
    return generate_snapshots(g, sc);
}

LowRankConfig small_config(const Context& ctx, int len, int rank)
{
    LowRankConfig c;
    c.basis_len = len;
    c.rank = rank;
    c.forget = ctx.alpha(0.98);
    c.init_scale = 0.5;
    c.init_relative = false;
    return c;
}

std::string check_alrd_inv_rsd(const Context& ctx)
{
    const SnapshotBatch b = small_batch(8, 50, 21);
    const LowRankConfig cfg = small_config(ctx, 3, 2);
    const HankelEmbedding steer = hankel_embed(steering_vector(b.geometry, 63.0), 3);
    AlrdState st = alrd_init(cfg, steer);
    st.aux = CVector::Constant(2, Complex(0.6, -0.2));
    std::vector<CMatrix> acc(2, cfg.init_scale * CMatrix::Identity(3, 3));
    for (int i = 0; i < b.num_snapshots(); ++i) {
        const HankelEmbedding snap = hankel_embed(b.data.col(i), 3);
        for (int d = 0; d < 2; ++d) {
            const CVector u = snap.row_vector(st.selection[d]);
            acc[d] = cfg.forget * acc[d] + std::norm(st.aux[d]) * u * u.adjoint();
            update_basis(st, cfg, snap, steer, d);
        }
    }
    for (int d = 0; d < 2; ++d) {
        const double err = rel_fro(st.inv_rsd[d], acc[d].inverse());
        if (err > 1e-8)
            return "R_sd^-1 error " + fmt(err);
    }
    return {};
}

std::string check_alrd_inv_rd(const Context& ctx)
{
    const SnapshotBatch b = small_batch(8, 50, 22);
    const LowRankConfig cfg = small_config(ctx, 3, 2);
    const HankelEmbedding steer = hankel_embed(steering_vector(b.geometry, 63.0), 3);
    AlrdState st = alrd_init(cfg, steer);
    CMatrix acc = cfg.init_scale * CMatrix::Identity(2, 2);
    for (int i = 0; i < b.num_snapshots(); ++i) {
        const HankelEmbedding snap = hankel_embed(b.data.col(i), 3);
        const CVector r = alrd_reduce(st, snap);
        acc = cfg.forget * acc + r * r.adjoint();
        update_aux(st, cfg, snap, steer);
    }
    const double err = rel_fro(st.inv_rd, acc.inverse());
    if (err > 1e-8)
        return "R_D^-1 error " + fmt(err);
    return {};
}

std::string check_malrd_inv_rs(const Context& ctx)
{
    const SnapshotBatch b = small_batch(8, 50, 23);
    const LowRankConfig cfg = small_config(ctx, 3, 2);
    const HankelEmbedding steer = hankel_embed(steering_vector(b.geometry, 63.0), 3);
    MalrdState st = malrd_init(cfg, steer);
    st.aux = CVector::Constant(2, Complex(0.3, 0.4));
    CMatrix acc = cfg.init_scale * CMatrix::Identity(3, 3);
    for (int i = 0; i < b.num_snapshots(); ++i) {
        const HankelEmbedding snap = hankel_embed(b.data.col(i), 3);
        const CVector u = gather_rows(snap, st.selection).transpose() * st.aux.conjugate();
        acc = cfg.forget * acc + u * u.adjoint();
        malrd_update_basis(st, cfg, snap, steer);
    }
    const double err = rel_fro(st.inv_rs, acc.inverse());
    if (err > 1e-8)
        return "R_s^-1 error " + fmt(err);
    return {};
}

std::string check_constraints(const Context& ctx)
{
    const SnapshotBatch b = small_batch(12, 40, 24);
    const LowRankConfig cfg = small_config(ctx, 4, 3);
    for (double theta : {30.0, 75.0, 120.0}) {
        const HankelEmbedding steer = hankel_embed(steering_vector(b.geometry, theta), 4);
        AlrdState a = alrd_init(cfg, steer);
        MalrdState m = malrd_init(cfg, steer);
        for (int i = 0; i < b.num_snapshots(); ++i) {
            const HankelEmbedding snap = hankel_embed(b.data.col(i), 4);
            for (int d = 0; d < 3; ++d)
                update_basis(a, cfg, snap, steer, d);
            update_aux(a, cfg, snap, steer);
            if (std::abs(a.aux.dot(a.a_bar) - 1.0) > 1e-10)
                return "ALRD constraint violated";
            malrd_update_basis(m, cfg, snap, steer);
            if (std::abs(malrd_basis_constraint(m, steer) - 1.0) > 1e-10)
                return "MALRD basis constraint violated";
            malrd_update_aux(m, cfg, snap, steer);
            if (std::abs(m.aux.dot(m.a_bar) - 1.0) > 1e-10)
                return "MALRD constraint violated";
        }
    }
    return {};
}

std::string check_d1_equivalence(const Context& ctx)
{
    const SnapshotBatch b = small_batch(16, 10, 25);
    LowRankConfig cfg = small_config(ctx, 4, 1);
    cfg.grid = {30.0, 150.0, 2.0};
    const Spectrum a = alrd_scan(cfg, b, b.geometry);
    const Spectrum m = malrd_scan(cfg, b, b.geometry);
    for (std::size_t k = 0; k < a.size(); ++k)
        if (std::abs(a.power[k] - m.power[k]) > 1e-9 * std::abs(m.power[k]))
            return "spectra differ at " + fmt(a.angles_deg[k]) + " deg";
    return {};
}

std::string check_rmse(const Context&)
{
    std::vector<TrialResult> trials = {evaluate_trial({10.0, 20.0}, {11.0, 21.0}),
                                       evaluate_trial({10.0, 20.0}, {9.0, 23.0})};
    if (std::abs(rmse(trials) - std::sqrt(3.0)) > 1e-12)
        return "rmse arithmetic";
    return {};
}

} // namespace

std::vector<SelftestCheck> run_selftest(const SelftestOptions& options)
{
    const Context ctx{options};
    const std::vector<std::pair<std::string, std::function<std::string(const Context&)>>> checks = {
        {"steering-vector", check_steering},
        {"hankel-layout", check_hankel_layout},
        {"segment-identity", check_segment_identity},
        {"fba-persymmetry", check_fba},
        {"hermitian-eig", check_eig},
        {"sample-covariance", check_sample_covariance},
        {"rank1-inverse", check_rank1},
        {"alrd-inverse-rsd", check_alrd_inv_rsd},
        {"alrd-inverse-rd", check_alrd_inv_rd},
        {"malrd-inverse-rs", check_malrd_inv_rs},
        {"constraints", check_constraints},
        {"d1-equivalence", check_d1_equivalence},
        {"rmse", check_rmse},
    };
    std::vector<SelftestCheck> out;
    for (const auto& [name, fn] : checks) {
        SelftestCheck c{name, false, {}};
        try {
            c.detail = fn(ctx);
            c.passed = c.detail.empty();
        } catch (const std::exception& e) {
            c.detail = std::string("threw: ") + e.what();
        }
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace lrdoa
