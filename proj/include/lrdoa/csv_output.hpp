#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "lrdoa/eval_harness.hpp"
#include "lrdoa/spectrum.hpp"

namespace lrdoa {

/// Locale-independent shortest round-trip decimal; "nan"/"inf" for non-finite.
std::string format_number(double value);

/// Scientific notation with 15 significant digits.
std::string format_scientific(double value);

/// Header `angle_deg,power`, one row per grid point.
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);

/// Header `method,snr_db,trials,resolution_prob,rmse_deg,rmse_resolved_only_deg,crb_deg,mean_op_count`.
void write_sweep_csv(std::ostream& out, const std::vector<SweepReport>& reports);

/// matplotlib script that reads only the named sweep CSV.
void write_plot_script(std::ostream& out, const std::string& csv_name);

} // namespace lrdoa
