// Command-line front end: run a registered experiment from a scenario file
// and write its table as CSV, list the registry, or validate a config.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "irssim/csv.hpp"
#include "irssim/experiments.hpp"
#include "irssim/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitUnknownExperiment = 3;
constexpr int kExitIo = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reflecting-surface link simulation experiment runner"};
    app.require_subcommand(1);

    std::string experiment, config_path, out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;

    CLI::App* run = app.add_subcommand("run", "Run one experiment and emit CSV");
    run->add_option("--experiment", experiment, "Registered experiment id")->required();
    run->add_option("--config", config_path, "Scenario JSON file")->required();
    run->add_option("--seed", seed, "Base seed (default: the scenario's seed)")
        ->each([&](const std::string&) { seed_given = true; });
    run->add_option("--out", out_path, "Output CSV path (default: stdout)");

    CLI::App* list = app.add_subcommand("list-experiments", "Print registered ids");

    CLI::App* validate = app.add_subcommand("validate", "Parse and check a scenario");
    validate->add_option("--config", config_path, "Scenario JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (list->parsed()) {
            for (const auto& id : irssim::experiment_ids()) std::cout << id << '\n';
            return 0;
        }
        if (validate->parsed()) {
            const irssim::Scenario s = irssim::load_scenario(config_path);
            std::cout << "ok: " << config_path << " (digest " << s.digest << ")\n";
            return 0;
        }
        (void)run;
        if (!irssim::is_experiment(experiment))
            throw irssim::UnknownExperimentError("unknown experiment: " + experiment);
        const irssim::Scenario s = irssim::load_scenario(config_path);
        irssim::validate_for_experiment(experiment, s);
        const std::uint64_t base = seed_given ? seed : s.base_seed;
        const irssim::ExperimentResult result =
            irssim::run_experiment(experiment, s, base);
        if (out_path.empty()) {
            irssim::emit_csv(result, std::cout);
        } else {
            irssim::write_csv(result, out_path);
        }
        return 0;
    } catch (const irssim::UnknownExperimentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnknownExperiment;
    } catch (const irssim::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const irssim::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
