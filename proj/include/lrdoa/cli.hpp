#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace lrdoa::cli {

enum ExitCode : int { ok = 0, selftest_failed = 1, config_error = 2, estimator_failure = 3 };

struct CommandOptions {
    std::optional<std::filesystem::path> config; ///< paper defaults when absent
    std::string method = "malrd";
    std::optional<std::filesystem::path> out_dir;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
};

/// Writes <out>/spectrum_<method>.csv for the first configured SNR.
int cmd_spectrum(const CommandOptions& options, std::ostream& log);

/// Writes <out>/sweep.csv and, when enabled, <out>/plot_sweep.py.
int cmd_sweep(const CommandOptions& options, std::ostream& log);

int cmd_selftest(std::ostream& log, double inject_alpha);

} // namespace lrdoa::cli
