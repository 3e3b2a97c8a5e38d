// gi: command-line front end.
//   gi scatter|regions|asymptote|simulate|compare --config <file> [--out <dir>] [--gnuplot]
// Exit codes: 0 ok, 1 config invalid, 2 soliton assumption, 3 sign assumption,
// 4 solver non-convergence, 5 region collar, >= 10 internal.

#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gi/cli.hpp"
#include "gi/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Long-time asymptotics and simulation of the GI-type derivative NLS with a nonzero background"};
    app.require_subcommand(1, 1);
    std::string config, out;
    bool gnuplot = false;
    for (const char* name : {"scatter", "regions", "asymptote", "simulate", "compare"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON run configuration")->required();
        sub->add_option("--out", out, "output directory (default: output_dir from the config)");
        sub->add_flag("--gnuplot", gnuplot, "also write a gnuplot script per CSV");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const gi::RunConfig cfg = gi::load_config(config);
        const gi::CommandResult r = gi::run_command(command, cfg, gnuplot);
        gi::write_outputs(r, out.empty() ? std::filesystem::path(cfg.output_dir) : std::filesystem::path(out));
        std::cout << r.console;
        return 0;
    } catch (const gi::Error& e) {
        std::cerr << "gi " << command << ": " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "gi " << command << ": internal error: " << e.what() << '\n';
        return 10;
    }
}
