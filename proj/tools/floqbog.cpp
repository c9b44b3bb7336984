#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

int main(int argc, char** argv)
{
    using namespace floqbog::cli;

    CLI::App app{"Floquet-Bogoliubov spectra, stability and topology of a driven bosonic chain"};
    app.set_version_flag("--version", kVersion);

    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    int threads = 0;

    app.add_option("command", command, "Computation to run")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("-c,--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("-s,--set", overrides, "Override a config value, e.g. model.nu1p=6 (repeatable)");
    app.add_option("-o,--out", out_path, "Output path prefix; writes <prefix>.csv and <prefix>.json");
    app.add_option("-j,--threads", threads, "Worker thread cap")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (!out_path.empty())
        overrides.push_back("output.path=\"" + out_path + "\"");
    if (threads > 0)
        overrides.push_back("numerics.threads=" + std::to_string(threads));

    RunConfig cfg;
    try {
        cfg = load_config(config_path, overrides);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return run_command(command, cfg, std::cout, std::cerr);
}
