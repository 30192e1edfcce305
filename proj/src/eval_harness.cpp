#include "lrdoa/eval_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "lrdoa/alrd_rls.hpp"
#include "lrdoa/malrd_rls.hpp"

namespace lrdoa {

std::string_view to_string(Method method) noexcept
{
    switch (method) {
    case Method::malrd: return "malrd";
    case Method::alrd: return "alrd";
    case Method::music: return "music";
    case Method::capon: return "capon";
    case Method::esprit: return "esprit";
    }
    return "unknown";
}

std::optional<Method> parse_method(std::string_view tag)
{
    for (Method m : {Method::malrd, Method::alrd, Method::music, Method::capon, Method::esprit})
        if (tag == to_string(m))
            return m;
    return std::nullopt;
}

bool is_spectral(Method method) noexcept { return method != Method::esprit; }

EstimatorSpec EstimatorSpec::defaults(Method method)
{
    EstimatorSpec spec;
    spec.method = method;
    spec.low_rank = method == Method::alrd ? default_alrd_config() : default_malrd_config();
    return spec;
}

namespace {

BaselineConfig baseline_config(const EstimatorSpec& spec, int num_sources)
{
    BaselineConfig bc;
    bc.num_sources = num_sources;
    bc.use_fba = spec.use_fba;
    bc.grid = spec.grid;
    return bc;
}

int model_order(const EstimatorSpec& spec, int num_sources)
{
    return spec.num_sources >= 0 ? spec.num_sources : num_sources;
}

} // namespace

Spectrum estimate_spectrum(const EstimatorSpec& spec, const SnapshotBatch& batch, const UlaGeometry& geometry,
                           int num_sources, OpCounter* ops)
{
    LowRankConfig lr = spec.low_rank;
    lr.grid = spec.grid;
    const BaselineConfig bc = baseline_config(spec, model_order(spec, num_sources));
    switch (spec.method) {
    case Method::malrd: return malrd_scan(lr, batch, geometry, ops);
    case Method::alrd: return alrd_scan(lr, batch, geometry, ops);
    case Method::capon: return capon_spectrum(baseline_covariance(batch, bc), geometry, bc, ops);
    case Method::music: return music_spectrum(baseline_covariance(batch, bc), geometry, bc, ops);
    case Method::esprit: break;
    }
    throw DomainError("estimate_spectrum: esprit produces no spectrum");
}

std::vector<double> estimate_doas(const EstimatorSpec& spec, const SnapshotBatch& batch,
                                  const UlaGeometry& geometry, int num_sources, OpCounter* ops)
{
    const int k = model_order(spec, num_sources);
    if (spec.method == Method::esprit) {
        const BaselineConfig bc = baseline_config(spec, k);
        return esprit_estimate(baseline_covariance(batch, bc), geometry, k, ops);
    }
    return find_peaks(estimate_spectrum(spec, batch, geometry, num_sources, ops), k);
}

bool check_resolution(std::vector<double> true_doas, std::vector<double> est_doas)
{
    if (true_doas.size() != est_doas.size())
        throw DomainError("check_resolution: estimate count differs from source count");
    std::sort(true_doas.begin(), true_doas.end());
    std::sort(est_doas.begin(), est_doas.end());
    const std::size_t k_count = true_doas.size();
    if (k_count < 2)
        return true;
    for (std::size_t k = 0; k < k_count; ++k) {
        const double gap = k == 0 ? std::abs(true_doas[1] - true_doas[0]) : std::abs(true_doas[k] - true_doas[k - 1]);
        if (!(std::abs(est_doas[k] - true_doas[k]) < gap / 2.0))
            return false;
    }
    return true;
}

TrialResult evaluate_trial(const std::vector<double>& true_doas, std::vector<double> est_doas)
{
    TrialResult tr;
    std::vector<double> truth = true_doas;
    std::sort(truth.begin(), truth.end());
    std::sort(est_doas.begin(), est_doas.end());
    tr.resolved = check_resolution(truth, est_doas);
    tr.squared_errors.reserve(truth.size());
    for (std::size_t k = 0; k < truth.size(); ++k) {
        const double e = est_doas[k] - truth[k];
        tr.squared_errors.push_back(e * e);
    }
    tr.estimated_doas = std::move(est_doas);
    return tr;
}

namespace {

double rmse_over(const std::vector<TrialResult>& trials, bool resolved_only)
{
    double sum = 0.0;
    std::size_t terms = 0;
    for (const auto& t : trials) {
        if (resolved_only && !t.resolved)
            continue;
        for (double e : t.squared_errors)
            sum += e;
        terms += t.squared_errors.size();
    }
    if (terms == 0)
        return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(sum / static_cast<double>(terms));
}

} // namespace

double rmse(const std::vector<TrialResult>& trials) { return rmse_over(trials, false); }

double rmse_resolved_only(const std::vector<TrialResult>& trials) { return rmse_over(trials, true); }

double crb_reference(const SourceScenario& scenario, const UlaGeometry& geometry)
{
    scenario.validate();
    geometry.validate();
    const int m = geometry.num_sensors;
    const int k = scenario.num_sources();
    if (k >= m)
        throw DomainError("crb_reference: need K < M");

    const CMatrix a = steering_matrix(geometry, scenario.doas_deg);
    CMatrix da(m, k);
    for (int j = 0; j < k; ++j) {
        const double theta = deg2rad(scenario.doas_deg[static_cast<std::size_t>(j)]);
        const double rate = 2.0 * kPi * geometry.spacing_ratio * std::sin(theta);
        for (int i = 0; i < m; ++i)
            da(i, j) = a(i, j) * Complex(0.0, rate * i);
    }

    CMatrix p = CMatrix::Identity(k, k) * scenario.source_power;
    if (scenario.correlated_pair) {
        const auto [i, j] = *scenario.correlated_pair;
        p(i, j) = p(j, i) = scenario.correlation_coeff * scenario.source_power;
    }
    const double sigma2 = scenario.noise_power;
    const CMatrix r = a * p * a.adjoint() + sigma2 * CMatrix::Identity(m, m);

    const CMatrix gram = a.adjoint() * a;
    Eigen::JacobiSVD<CMatrix> gsvd(gram);
    if (!(gsvd.singularValues()[k - 1] > 1e-10 * gsvd.singularValues()[0]))
        throw SingularityError("crb_reference: steering matrix is rank deficient");
    const CMatrix proj_perp = CMatrix::Identity(m, m) - a * gram.ldlt().solve(a.adjoint());

    const CMatrix left = da.adjoint() * proj_perp * da;
    const CMatrix right = p * a.adjoint() * r.ldlt().solve(a) * p;
    const Eigen::MatrixXd h = left.cwiseProduct(right.transpose()).real();

    Eigen::JacobiSVD<Eigen::MatrixXd> hsvd(h);
    if (!(hsvd.singularValues()[k - 1] > 1e-12 * hsvd.singularValues()[0]))
        throw SingularityError("crb_reference: Fisher information is singular");
    const Eigen::MatrixXd crb = h.inverse() * (sigma2 / (2.0 * scenario.num_snapshots));
    return rad2deg(std::sqrt(crb.trace() / k));
}

std::vector<SweepReport> run_sweep(const std::vector<EstimatorSpec>& methods, const SourceScenario& scenario,
                                   const UlaGeometry& geometry, const std::vector<double>& snr_list_db,
                                   const SweepOptions& options)
{
    if (options.trials < 1)
        throw DomainError("run_sweep: trials must be >= 1");
    if (methods.empty() || snr_list_db.empty())
        throw DomainError("run_sweep: need at least one method and one SNR");
    scenario.validate();
    geometry.validate();

    const std::size_t n_snr = snr_list_db.size();
    const auto n_trials = static_cast<std::size_t>(options.trials);
    const std::size_t n_methods = methods.size();
    const int k = scenario.num_sources();

    std::vector<SweepReport> reports(n_methods);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
        reports[mi].method = methods[mi].method;
        reports[mi].snr_grid_db = snr_list_db;
        reports[mi].trials = options.trials;
        reports[mi].results.assign(n_snr, std::vector<TrialResult>(n_trials));
    }

    auto run_job = [&](std::size_t job) {
        const std::size_t s = job / n_trials;
        const std::size_t t = job % n_trials;
        SourceScenario sc = scenario;
        sc.set_snr_db(snr_list_db[s]);
        sc.rng_seed = derive_seed(options.master_seed, s, t);
        const SnapshotBatch batch = generate_snapshots(geometry, sc);
        const std::uint64_t hash = batch_hash(batch);
        for (std::size_t mi = 0; mi < n_methods; ++mi) {
            OpCounter ops;
            TrialResult tr;
            try {
                tr = evaluate_trial(sc.doas_deg, estimate_doas(methods[mi], batch, geometry, k, &ops));
            } catch (const std::exception& e) {
                // No estimates: measure against broadside and count as unresolved.
                tr = evaluate_trial(sc.doas_deg, std::vector<double>(static_cast<std::size_t>(k), 90.0));
                tr.resolved = false;
                tr.failure = e.what();
            }
            tr.op_count = ops.macs;
            tr.batch_hash = hash;
            reports[mi].results[s][t] = std::move(tr);
        }
    };

    const std::size_t n_jobs = n_snr * n_trials;
    unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_jobs));
    if (workers <= 1) {
        for (std::size_t j = 0; j < n_jobs; ++j)
            run_job(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (std::size_t j = next++; j < n_jobs; j = next++) {
                        try {
                            run_job(j);
                        } catch (...) {
                            std::lock_guard lock(error_mutex);
                            if (!error)
                                error = std::current_exception();
                        }
                    }
                });
        }
        if (error)
            std::rethrow_exception(error);
    }

    for (std::size_t s = 0; s < n_snr; ++s) {
        SourceScenario sc = scenario;
        sc.set_snr_db(snr_list_db[s]);
        double crb = std::numeric_limits<double>::quiet_NaN();
        try {
            crb = crb_reference(sc, geometry);
        } catch (const SingularityError&) {
        }
        for (auto& rep : reports) {
            const auto& trials = rep.results[s];
            std::size_t resolved = 0;
            std::size_t failed = 0;
            double ops = 0.0;
            for (const auto& t : trials) {
                resolved += t.resolved ? 1 : 0;
                failed += t.failure.empty() ? 0 : 1;
                ops += static_cast<double>(t.op_count);
            }
            if (failed == trials.size())
                throw std::runtime_error("run_sweep: every trial of " + std::string(to_string(rep.method)) +
                                         " failed: " + trials.front().failure);
            rep.resolution_prob.push_back(static_cast<double>(resolved) / static_cast<double>(trials.size()));
            rep.rmse_deg.push_back(rmse(trials));
            rep.rmse_resolved_deg.push_back(rmse_resolved_only(trials));
            rep.crb_deg.push_back(crb);
            rep.mean_op_count.push_back(ops / static_cast<double>(trials.size()));
        }
    }
    return reports;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("loglog_slope: need at least two paired points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ProbeResult complexity_probe(const EstimatorSpec& base, const UlaGeometry& geometry, int num_snapshots,
                             ProbeAxis axis, const std::vector<int>& values, std::uint64_t seed)
{
    ProbeResult out;
    for (int v : values) {
        EstimatorSpec spec = base;
        int n = num_snapshots;
        switch (axis) {
        case ProbeAxis::basis_len: spec.low_rank.basis_len = v; break;
        case ProbeAxis::rank: spec.low_rank.rank = v; break;
        case ProbeAxis::snapshots: n = v; break;
        }
        SourceScenario sc;
        sc.doas_deg = {50.0, 70.0};
        sc.num_snapshots = n;
        sc.set_snr_db(10.0);
        sc.rng_seed = seed;
        const SnapshotBatch batch = generate_snapshots(geometry, sc);
        OpCounter ops;
        estimate_doas(spec, batch, geometry, sc.num_sources(), &ops);
        out.values.push_back(static_cast<double>(v));
        out.op_counts.push_back(static_cast<double>(ops.macs));
    }
    out.slope = loglog_slope(out.values, out.op_counts);
    return out;
}

} // namespace lrdoa
