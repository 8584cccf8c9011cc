#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "volflow/config.hpp"
#include "volflow/scenarios.hpp"

int main(int argc, char** argv) {
    using namespace volflow::cli;
    CLI::App app{"volflow: functional volume product experiments"};
    std::string scenario, config_path;
    RunOptions opt;
    opt.log = &std::cout;
    app.add_option("scenario", scenario, "Scenario to run")->required()->check(CLI::IsMember(scenario_names()));
    app.add_option("--config", config_path, "Experiment config file")->required();
    app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    app.add_option("--threads", opt.threads, "Worker threads for parameter sweeps")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--tol-scale", opt.tol_scale, "Multiplier for every assertion tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        const Config cfg = Config::load(config_path);
        const RunResult r = run_scenario(scenario, cfg, opt);
        for (const auto& f : r.files) std::cout << "wrote " << f << '\n';
        for (const auto& f : r.failures) std::cout << "assertion failed: " << f << '\n';
        std::cout << scenario << ": " << (r.status == 0 ? "ok" : "FAILED") << '\n';
        return r.status;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
