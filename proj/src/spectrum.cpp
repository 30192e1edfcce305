#include "lrdoa/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrdoa/types.hpp"

namespace lrdoa {

void ScanGrid::validate() const
{
    if (!(step_deg > 0.0))
        throw DomainError("grid: step must be > 0");
    if (!(start_deg > 0.0 && stop_deg < 180.0))
        throw DomainError("grid: angles must lie in (0, 180)");
    if (!(stop_deg >= start_deg))
        throw DomainError("grid: stop must be >= start");
}

std::size_t ScanGrid::size() const
{
    validate();
    return static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
}

std::vector<double> ScanGrid::angles() const
{
    const std::size_t n = size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k)
        out[k] = start_deg + static_cast<double>(k) * step_deg;
    return out;
}

std::vector<double> find_peaks(const Spectrum& spectrum, int num_peaks)
{
    const auto& p = spectrum.power;
    const std::size_t n = p.size();
    if (num_peaks < 0 || static_cast<std::size_t>(num_peaks) > n)
        throw DomainError("find_peaks: more peaks requested than grid points");

    auto by_power = [&p](std::size_t a, std::size_t b) {
        if (p[a] != p[b])
            return p[a] > p[b];
        return a < b;
    };

    std::vector<std::size_t> maxima;
    for (std::size_t k = 0; k < n; ++k) {
        const bool left_ok = k == 0 || p[k] > p[k - 1];
        const bool right_ok = k + 1 == n || p[k] > p[k + 1];
        if (left_ok && right_ok)
            maxima.push_back(k);
    }
    std::sort(maxima.begin(), maxima.end(), by_power);

    std::vector<std::size_t> chosen(maxima.begin(),
                                    maxima.begin() + std::min<std::size_t>(maxima.size(), num_peaks));
    if (chosen.size() < static_cast<std::size_t>(num_peaks)) {
        std::vector<bool> taken(n, false);
        for (auto k : chosen)
            taken[k] = true;
        std::vector<std::size_t> rest;
        for (std::size_t k = 0; k < n; ++k)
            if (!taken[k])
                rest.push_back(k);
        std::sort(rest.begin(), rest.end(), by_power);
        for (std::size_t k = 0; chosen.size() < static_cast<std::size_t>(num_peaks); ++k)
            chosen.push_back(rest[k]);
    }

    std::vector<double> angles;
    angles.reserve(chosen.size());
    for (auto k : chosen)
        angles.push_back(spectrum.angles_deg[k]);
    std::sort(angles.begin(), angles.end());
    return angles;
}

double argmax_angle(const Spectrum& spectrum)
{
    if (spectrum.power.empty())
        throw DomainError("argmax_angle: empty spectrum");
    const auto it = std::max_element(spectrum.power.begin(), spectrum.power.end());
    return spectrum.angles_deg[static_cast<std::size_t>(it - spectrum.power.begin())];
}

} // namespace lrdoa
