#include "lrdoa/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lrdoa/hankel_linalg.hpp"

namespace lrdoa {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kLoadingFactor = 1e-8;

void check_square(const CMatrix& r, const UlaGeometry& geometry, const char* who)
{
    if (r.rows() != r.cols() || r.rows() != geometry.num_sensors)
        throw DomainError(std::string(who) + ": covariance must be M x M");
}

std::uint64_t cube(Eigen::Index m)
{
    const auto n = static_cast<std::uint64_t>(m);
    return n * n * n;
}

} // namespace

std::optional<BaselineMethod> parse_baseline_method(std::string_view tag)
{
    if (tag == "capon")
        return BaselineMethod::capon;
    if (tag == "music")
        return BaselineMethod::music;
    if (tag == "esprit")
        return BaselineMethod::esprit;
    return std::nullopt;
}

Spectrum capon_spectrum(const CMatrix& r, const UlaGeometry& geometry, const BaselineConfig& config,
                        OpCounter* ops)
{
    check_square(r, geometry, "capon_spectrum");
    const Eigen::Index m = r.rows();
    HermitianEig eig = hermitian_eig(r);
    count(ops, cube(m));

    const double trace = r.trace().real();
    if (!(trace > 0.0) || !std::isfinite(trace))
        throw SingularityError("capon_spectrum: covariance has no energy");

    const double lmax = eig.values[0];
    const double lmin = eig.values[m - 1];
    double loading = 0.0;
    if (!(lmin > 0.0) || lmax / lmin > kMaxCondition) {
        loading = kLoadingFactor * trace / static_cast<double>(m);
        eig.values.array() += loading;
    }
    if (!(eig.values[m - 1] > 0.0))
        throw SingularityError("capon_spectrum: covariance is singular after loading");

    // R^{-1} = V diag(1/lambda) V^H
    const CMatrix inv = eig.vectors * eig.values.cwiseInverse().asDiagonal() * eig.vectors.adjoint();
    count(ops, cube(m));

    Spectrum out;
    out.diagonal_loading = loading;
    out.angles_deg = config.grid.angles();
    out.power.reserve(out.angles_deg.size());
    for (double theta : out.angles_deg) {
        const CVector a = steering_vector(geometry, theta);
        const double q = a.dot(inv * a).real();
        count(ops, static_cast<std::uint64_t>(m * m + m));
        out.power.push_back(1.0 / q);
    }
    return out;
}

Spectrum music_spectrum(const CMatrix& r, const UlaGeometry& geometry, const BaselineConfig& config,
                        OpCounter* ops)
{
    check_square(r, geometry, "music_spectrum");
    const Eigen::Index m = r.rows();
    if (config.num_sources < 0 || config.num_sources >= m)
        throw DomainError("music_spectrum: need 0 <= K < M");
    const HermitianEig eig = hermitian_eig(r);
    count(ops, cube(m));

    const Eigen::Index k = config.num_sources;
    const CMatrix noise = eig.vectors.rightCols(m - k);

    Spectrum out;
    out.angles_deg = config.grid.angles();
    out.power.reserve(out.angles_deg.size());
    for (double theta : out.angles_deg) {
        const CVector a = steering_vector(geometry, theta);
        const double q = (noise.adjoint() * a).squaredNorm();
        count(ops, static_cast<std::uint64_t>(m * (m - k)));
        out.power.push_back(1.0 / std::max(q, std::numeric_limits<double>::min()));
    }
    return out;
}

std::vector<double> esprit_estimate(const CMatrix& r, const UlaGeometry& geometry, int num_sources,
                                    OpCounter* ops)
{
    check_square(r, geometry, "esprit_estimate");
    const Eigen::Index m = r.rows();
    if (num_sources < 0 || num_sources >= m)
        throw DomainError("esprit_estimate: need 0 <= K < M");
    if (num_sources == 0)
        return {};

    const HermitianEig eig = hermitian_eig(r);
    count(ops, cube(m));
    const CMatrix es = eig.vectors.leftCols(num_sources);
    const CMatrix upper = es.topRows(m - 1);
    const CMatrix lower = es.bottomRows(m - 1);

    Eigen::JacobiSVD<CMatrix> svd(upper);
    const RVector sv = svd.singularValues();
    if (!(sv[sv.size() - 1] > 1e-10 * sv[0]))
        throw SingularityError("esprit_estimate: subarray signal subspace is rank deficient");

    const CMatrix phi = upper.colPivHouseholderQr().solve(lower);
    Eigen::ComplexEigenSolver<CMatrix> ces(phi);
    if (ces.info() != Eigen::Success)
        throw SingularityError("esprit_estimate: rotation eigensolver did not converge");
    count(ops, static_cast<std::uint64_t>((m - 1) * num_sources * num_sources) + cube(num_sources));

    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(num_sources));
    for (Eigen::Index k = 0; k < num_sources; ++k) {
        // a_{m+1} / a_m = exp(-2 pi j r cos(theta))
        const double phase = std::arg(ces.eigenvalues()[k]);
        const double c = std::clamp(-phase / (2.0 * kPi * geometry.spacing_ratio), -1.0, 1.0);
        angles.push_back(rad2deg(std::acos(c)));
    }
    std::sort(angles.begin(), angles.end());
    return angles;
}

CMatrix baseline_covariance(const SnapshotBatch& batch, const BaselineConfig& config)
{
    CMatrix r = sample_covariance(batch.data).matrix;
    if (config.use_fba)
        r = forward_backward_average(r);
    return r;
}

std::vector<double> baseline_estimate(const SnapshotBatch& batch, const UlaGeometry& geometry,
                                      const BaselineConfig& config, BaselineMethod method, OpCounter* ops)
{
    const CMatrix r = baseline_covariance(batch, config);
    switch (method) {
    case BaselineMethod::capon:
        return find_peaks(capon_spectrum(r, geometry, config, ops), config.num_sources);
    case BaselineMethod::music:
        return find_peaks(music_spectrum(r, geometry, config, ops), config.num_sources);
    case BaselineMethod::esprit:
        return esprit_estimate(r, geometry, config.num_sources, ops);
    }
    throw DomainError("baseline_estimate: unknown method");
}

} // namespace lrdoa
