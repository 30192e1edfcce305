#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "lrdoa/baselines.hpp"
#include "lrdoa/eval_harness.hpp"
#include "lrdoa/hankel_linalg.hpp"

using namespace lrdoa;

namespace {

CMatrix noise_free(const UlaGeometry& g, const std::vector<double>& doas)
{
    const CMatrix a = steering_matrix(g, doas);
    return a * a.adjoint();
}

BaselineConfig config(int k, bool fba, ScanGrid grid = {})
{
    BaselineConfig c;
    c.num_sources = k;
    c.use_fba = fba;
    c.grid = grid;
    return c;
}

SourceScenario two_sources(double a, double b, double rho, int n, double snr, std::uint64_t seed)
{
    SourceScenario sc;
    sc.doas_deg = {a, b};
    if (rho > 0.0) {
        sc.correlated_pair = std::pair{0, 1};
        sc.correlation_coeff = rho;
    }
    sc.num_snapshots = n;
    sc.set_snr_db(snr);
    sc.rng_seed = seed;
    return sc;
}

} // namespace

TEST_SUITE("baselines") {

TEST_CASE("method tags")
{
    CHECK(parse_baseline_method("capon") == BaselineMethod::capon);
    CHECK(parse_baseline_method("music") == BaselineMethod::music);
    CHECK(parse_baseline_method("esprit") == BaselineMethod::esprit);
    CHECK_FALSE(parse_baseline_method("jio").has_value());
}

TEST_CASE("capon on white noise is flat")
{
    const UlaGeometry g{10, 0.5};
    const Spectrum s = capon_spectrum(0.4 * CMatrix::Identity(10, 10), g, config(1, false));
    CHECK(s.size() == 599);
    for (double p : s.power)
        CHECK(p == doctest::Approx(0.04));
    CHECK(s.diagonal_loading == 0.0);
}

TEST_CASE("capon on a noise-free single source is loaded and peaks at the source")
{
    const UlaGeometry g{12, 0.5};
    const Spectrum s = capon_spectrum(noise_free(g, {60.0}), g, config(1, false));
    CHECK(s.diagonal_loading > 0.0);
    CHECK(std::abs(argmax_angle(s) - 60.0) <= 0.15 + 1e-9);
}

TEST_CASE("capon is homogeneous in the covariance")
{
    const UlaGeometry g{8, 0.5};
    CMatrix r = noise_free(g, {40.0, 100.0}) + 0.1 * CMatrix::Identity(8, 8);
    const Spectrum s1 = capon_spectrum(r, g, config(2, false));
    const Spectrum s5 = capon_spectrum(5.0 * r, g, config(2, false));
    for (std::size_t k = 0; k < s1.size(); ++k)
        CHECK(s5.power[k] == doctest::Approx(5.0 * s1.power[k]).epsilon(1e-9));
    CHECK(find_peaks(s1, 2) == find_peaks(s5, 2));
}

TEST_CASE("capon rejects an all-zero covariance")
{
    const UlaGeometry g{4, 0.5};
    CHECK_THROWS_AS(capon_spectrum(CMatrix::Zero(4, 4), g, config(1, false)), SingularityError);
    CHECK_THROWS_AS(capon_spectrum(CMatrix::Identity(3, 3), g, config(1, false)), DomainError);
}

TEST_CASE("music with an empty signal subspace is flat")
{
    const UlaGeometry g{6, 0.5};
    const Spectrum s = music_spectrum(CMatrix::Identity(6, 6), g, config(0, false));
    for (double p : s.power)
        CHECK(p == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("music on noise-free sources")
{
    const UlaGeometry g{8, 0.5};
    const Spectrum s = music_spectrum(noise_free(g, {50.0, 70.0}), g, config(2, false, {50.0, 90.0, 20.0}));
    REQUIRE(s.size() == 3);
    CHECK(s.power[0] > 1e6);
    CHECK(s.power[1] > 1e6);
    CHECK(s.power[2] < 1e3);
}

TEST_CASE("music is invariant to a consistent sensor permutation")
{
    const UlaGeometry g{7, 0.5};
    const CMatrix r = noise_free(g, {47.0, 83.0}) + 0.05 * CMatrix::Identity(7, 7);
    const ScanGrid grid{20.0, 160.0, 10.0};
    const Spectrum s = music_spectrum(r, g, config(2, false, grid));

    std::vector<int> order(7);
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin() + 2, order.end());
    std::swap(order[0], order[4]);
    CMatrix perm = CMatrix::Zero(7, 7);
    for (int i = 0; i < 7; ++i)
        perm(i, order[i]) = 1.0;
    const HermitianEig e = hermitian_eig(perm * r * perm.transpose());
    const CMatrix noise = e.vectors.rightCols(5);
    const auto angles = grid.angles();
    for (std::size_t k = 0; k < angles.size(); ++k) {
        const CVector a = perm * steering_vector(g, angles[k]);
        const double p = 1.0 / (noise.adjoint() * a).squaredNorm();
        CHECK(std::abs(p - s.power[k]) <= 1e-9 * s.power[k]);
    }
}

TEST_CASE("music model order out of range")
{
    const UlaGeometry g{4, 0.5};
    CHECK_THROWS_AS(music_spectrum(CMatrix::Identity(4, 4), g, config(4, false)), DomainError);
    CHECK_THROWS_AS(music_spectrum(CMatrix::Identity(4, 4), g, config(-1, false)), DomainError);
}

TEST_CASE("esprit at broadside")
{
    const UlaGeometry g{6, 0.5};
    const auto est = esprit_estimate(noise_free(g, {90.0}), g, 1);
    REQUIRE(est.size() == 1);
    CHECK(std::abs(est[0] - 90.0) < 1e-6);
}

TEST_CASE("esprit recovers two noise-free sources")
{
    const UlaGeometry g{10, 0.5};
    const auto est = esprit_estimate(noise_free(g, {70.0, 50.0}), g, 2);
    REQUIRE(est.size() == 2);
    CHECK(std::abs(est[0] - 50.0) < 1e-4);
    CHECK(std::abs(est[1] - 70.0) < 1e-4);
}

TEST_CASE("esprit under a small white perturbation")
{
    const UlaGeometry g{10, 0.5};
    const auto est = esprit_estimate(noise_free(g, {40.0}) + 0.01 * CMatrix::Identity(10, 10), g, 1);
    CHECK(std::abs(est[0] - 40.0) < 0.01);
}

TEST_CASE("esprit model order out of range")
{
    const UlaGeometry g{5, 0.5};
    CHECK_THROWS_AS(esprit_estimate(CMatrix::Identity(5, 5), g, 5), DomainError);
}

TEST_CASE("esprit ignores the scan grid")
{
    const UlaGeometry g{20, 0.5};
    const SnapshotBatch b = generate_snapshots(g, two_sources(50.0, 70.0, 0.0, 50, 10.0, 3));
    const auto coarse = baseline_estimate(b, g, config(2, true, {10.0, 170.0, 40.0}), BaselineMethod::esprit);
    const auto fine = baseline_estimate(b, g, config(2, true), BaselineMethod::esprit);
    CHECK(coarse == fine);
}

TEST_CASE("forward-backward averaging barely moves capon on uncorrelated sources")
{
    const UlaGeometry g{20, 0.5};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SnapshotBatch b = generate_snapshots(g, two_sources(50.0, 80.0, 0.0, 100, 20.0, seed));
        const auto with = baseline_estimate(b, g, config(2, true), BaselineMethod::capon);
        const auto without = baseline_estimate(b, g, config(2, false), BaselineMethod::capon);
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(with[k] - without[k]) < 0.3);
    }
}

TEST_CASE("forward-backward averaging restores music on a nearly coherent pair")
{
    const UlaGeometry g{20, 0.5};
    const int trials = 20;
    int fba_ok = 0, plain_miss = 0;
    for (int t = 0; t < trials; ++t) {
        const SnapshotBatch b = generate_snapshots(g, two_sources(60.0, 63.0, 0.999, 200, 20.0, 100 + t));
        const auto with = baseline_estimate(b, g, config(2, true), BaselineMethod::music);
        const auto without = baseline_estimate(b, g, config(2, false), BaselineMethod::music);
        fba_ok += check_resolution({60.0, 63.0}, with);
        plain_miss += !check_resolution({60.0, 63.0}, without);
    }
    CHECK(fba_ok == trials);
    CHECK(plain_miss >= trials / 2);
}

TEST_CASE("baseline covariance applies averaging per config")
{
    const UlaGeometry g{6, 0.5};
    const SnapshotBatch b = generate_snapshots(g, two_sources(50.0, 80.0, 0.0, 10, 5.0, 9));
    const CMatrix plain = baseline_covariance(b, config(2, false));
    CHECK((plain - sample_covariance(b.data).matrix).norm() < 1e-14);
    CHECK((baseline_covariance(b, config(2, true)) - forward_backward_average(plain)).norm() < 1e-14);
}

}
