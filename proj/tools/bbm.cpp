#include "bbm/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Damped Benjamin-Bona-Mahony simulator and verification harness"};
    app.require_subcommand(1);

    std::string config_path;
    auto* simulate = app.add_subcommand("simulate", "run one configuration");
    simulate->add_option("config", config_path, "run configuration (JSON)")->required();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "operators|conservation|dissipation|lipschitz|picard|all")
        ->required();

    std::string sweep_path;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("sweep", sweep_path, "sweep description (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : bbm::exit_bad_config;
    }

    if (*simulate)
        return bbm::run_simulate(config_path, std::cout, std::cerr);
    if (*sweep)
        return bbm::run_sweep(sweep_path, std::cout, std::cerr);
    return bbm::run_verify(suite, std::cout);
}
