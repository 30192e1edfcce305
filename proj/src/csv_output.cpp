#include "lrdoa/csv_output.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace lrdoa {

namespace {

std::string non_finite(double value)
{
    if (std::isnan(value))
        return "nan";
    return value > 0 ? "inf" : "-inf";
}

} // namespace

std::string format_number(double value)
{
    if (!std::isfinite(value))
        return non_finite(value);
    // Grid angles are accumulated as start + k * step; 12 significant digits
    // hide the representation noise while keeping every meaningful digit.
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
    return std::string(buf.data(), res.ptr);
}

std::string format_scientific(double value)
{
    if (!std::isfinite(value))
        return non_finite(value);
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::scientific, 14);
    return std::string(buf.data(), res.ptr);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum)
{
    out << "angle_deg,power\n";
    for (std::size_t k = 0; k < spectrum.size(); ++k)
        out << format_number(spectrum.angles_deg[k]) << ',' << format_scientific(spectrum.power[k]) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepReport>& reports)
{
    out << "method,snr_db,trials,resolution_prob,rmse_deg,rmse_resolved_only_deg,crb_deg,mean_op_count\n";
    for (const auto& rep : reports)
        for (std::size_t s = 0; s < rep.snr_grid_db.size(); ++s)
            out << to_string(rep.method) << ',' << format_number(rep.snr_grid_db[s]) << ',' << rep.trials << ','
                << format_number(rep.resolution_prob[s]) << ',' << format_number(rep.rmse_deg[s]) << ','
                << format_number(rep.rmse_resolved_deg[s]) << ',' << format_number(rep.crb_deg[s]) << ','
                << format_number(rep.mean_op_count[s]) << '\n';
}

void write_plot_script(std::ostream& out, const std::string& csv_name)
{
    out << R"py(#!/usr/bin/env python3
"""Plots resolution probability and RMSE versus SNR from )py"
        << csv_name << R"py(."""
import csv
import os
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = defaultdict(list)
with open(os.path.join(here, ")py"
        << csv_name << R"py(")) as f:
    for row in csv.DictReader(f):
        rows[row["method"]].append(row)

fig, (ax_res, ax_rmse) = plt.subplots(1, 2, figsize=(11, 4))
crb = None
for method, items in rows.items():
    items.sort(key=lambda r: float(r["snr_db"]))
    snr = [float(r["snr_db"]) for r in items]
    ax_res.plot(snr, [float(r["resolution_prob"]) for r in items], marker="o", label=method)
    ax_rmse.semilogy(snr, [float(r["rmse_deg"]) for r in items], marker="o", label=method)
    crb = (snr, [float(r["crb_deg"]) for r in items])
if crb is not None:
    ax_rmse.semilogy(crb[0], crb[1], "k--", label="CRB")
ax_res.set_xlabel("SNR (dB)")
ax_res.set_ylabel("probability of resolution")
ax_res.set_ylim(-0.05, 1.05)
ax_rmse.set_xlabel("SNR (dB)")
ax_rmse.set_ylabel("RMSE (deg)")
for ax in (ax_res, ax_rmse):
    ax.grid(True, alpha=0.3)
    ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "sweep.png"), dpi=120)
)py";
}

} // namespace lrdoa
