#include <cmath>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "lrdoa/cli.hpp"

int main(int argc, char** argv)
{
    using namespace lrdoa::cli;

    CLI::App app{"Low-rank subspace DOA estimation benchmark"};
    app.require_subcommand(1);

    CommandOptions opts;
    std::string config;
    std::string out;
    unsigned threads = 0;
    std::uint64_t seed = 0;
    double inject_alpha = std::numeric_limits<double>::quiet_NaN();

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON experiment config (paper defaults when omitted)");
        sub->add_option("--out", out, "output directory (overrides config)");
        sub->add_option("--threads", threads, "worker threads, 0 = auto");
        sub->add_option("--seed", seed, "master seed (overrides config)");
    };

    auto* spectrum = app.add_subcommand("spectrum", "write one spatial spectrum as CSV");
    add_common(spectrum);
    spectrum->add_option("--method", opts.method, "malrd | alrd | music | capon");

    auto* sweep = app.add_subcommand("sweep", "Monte Carlo SNR sweep");
    add_common(sweep);

    auto* selftest = app.add_subcommand("selftest", "run the fixed-seed oracle checks");
    selftest->add_option("--inject-alpha", inject_alpha)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    auto fill = [&](CLI::App* sub) {
        if (sub->count("--config"))
            opts.config = config;
        if (sub->count("--out"))
            opts.out_dir = out;
        if (sub->count("--threads"))
            opts.threads = threads;
        if (sub->count("--seed"))
            opts.seed = seed;
    };

    if (spectrum->parsed()) {
        fill(spectrum);
        return cmd_spectrum(opts, std::cerr);
    }
    if (sweep->parsed()) {
        fill(sweep);
        return cmd_sweep(opts, std::cerr);
    }
    return cmd_selftest(std::cout, inject_alpha);
}
