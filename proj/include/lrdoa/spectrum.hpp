#pragma once

#include <string>
#include <vector>

namespace lrdoa {

/// Uniform grid of scanning angles in degrees, endpoints inclusive.
struct ScanGrid {
    double start_deg = 0.3;
    double stop_deg = 179.7;
    double step_deg = 0.3;

    void validate() const;
    std::size_t size() const;
    std::vector<double> angles() const;
};

struct SpectrumDiagnostic {
    double angle_deg = 0.0;
    std::string tag;
};

struct Spectrum {
    std::vector<double> angles_deg;
    std::vector<double> power;
    std::vector<SpectrumDiagnostic> diagnostics;
    double diagonal_loading = 0.0; ///< loading added to the covariance, if any

    std::size_t size() const noexcept { return angles_deg.size(); }
};

/// The K largest strict local maxima, filled with the largest remaining grid
/// points if fewer exist. Ties go to the lowest angle. Result is ascending.
std::vector<double> find_peaks(const Spectrum& spectrum, int num_peaks);

/// Angle of the global maximum (lowest angle on ties).
double argmax_angle(const Spectrum& spectrum);

} // namespace lrdoa
