#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dinsim/cli.hpp"
#include "dinsim/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dinsim - venture-banking DIN and clawback-lien studies"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string seed;

    app.add_option("--config", config_path, "flat key = value config file");
    app.add_option("--set", overrides, "override, section.key=value (repeatable)");
    app.add_option("--out", out_path, "output path");
    app.add_option("--seed", seed, "Monte Carlo seed override");

    auto* sweep = app.add_subcommand("sweep", "bank and underwriter return curves as CSV");
    auto* calibrate = app.add_subcommand("calibrate", "fit knobs to the quantitative anchors");
    auto* mc = app.add_subcommand("mc", "seeded Monte Carlo fund study");
    auto* lifecycle = app.add_subcommand("lifecycle", "replay a timed lien scenario");
    std::string scenario_path;
    lifecycle->add_option("scenario", scenario_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!seed.empty()) overrides.push_back("mc.seed=" + seed);
        if (!out_path.empty()) overrides.push_back("output.path=" + out_path);
        const dinsim::cli::RunConfig config = dinsim::cli::load_config(config_path, overrides);

        if (sweep->parsed()) return dinsim::cli::cmd_sweep(config);
        if (calibrate->parsed()) return dinsim::cli::cmd_calibrate(config);
        if (mc->parsed()) return dinsim::cli::cmd_mc(config);
        if (lifecycle->parsed()) return dinsim::cli::cmd_lifecycle(config, scenario_path);
    } catch (const dinsim::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const dinsim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
