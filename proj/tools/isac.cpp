// SPDX-License-Identifier: Apache-2.0
//
// isac <command> --config <path> --output <path> [--set k=v ...] [--workers N]

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scnisac/config.hpp"
#include "scnisac/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"SCN detection and ISAC power-allocation experiments"};
    std::string command, config_path, output_path;
    std::vector<std::string> overrides;
    int workers = 1;

    std::vector<std::string> names;
    for (const auto& [name, _] : scn::command_table()) names.push_back(name);
    app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--output", output_path, "CSV file to write")->required();
    app.add_option("--set", overrides, "Override a config value, e.g. detector.trials=200000");
    app.add_option("--workers", workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : scn::kExitConfigError;
    }

    scn::ExperimentConfig config;
    try {
        config = scn::load_config(config_path, overrides);
    } catch (const scn::ConfigError& e) {
        std::cerr << "isac: " << e.what() << '\n';
        return scn::kExitConfigError;
    }

    try {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) {
            std::cerr << "isac: cannot open output '" << output_path << "'\n";
            return scn::kExitRuntimeError;
        }
        const int rc = scn::command_table().at(command)(config, out, scn::RunOptions{workers});
        out.close();
        if (!out) {
            std::cerr << "isac: failed writing '" << output_path << "'\n";
            return scn::kExitRuntimeError;
        }
        if (rc == scn::kExitValidationFailed) std::cerr << "isac: validation failed; see " << output_path << '\n';
        return rc;
    } catch (const scn::ConfigError& e) {
        std::cerr << "isac: " << e.what() << '\n';
        return scn::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "isac: " << e.what() << '\n';
        return scn::kExitRuntimeError;
    }
}
