#include <cstdlib>
#include <iostream>
#include <string>

#include "fracsica/scenario.hpp"

#include <CLI11.hpp>

namespace {

using fracsica::scenario::ScenarioConfig;

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    bool dump_config = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "scenario configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (overrides [output] directory)");
    cmd->add_flag("--dump-config", opts.dump_config,
                  "print the fully resolved configuration and exit");
}

// Output directory priority: --out flag, then FRACSICA_OUT_DIR, then config.
std::string resolve_out_dir(const CommonOptions& opts, const ScenarioConfig& config) {
    if (!opts.out_dir.empty()) {
        return opts.out_dir;
    }
    if (const char* env = std::getenv("FRACSICA_OUT_DIR"); env != nullptr && *env != '\0') {
        return env;
    }
    return config.output.directory;
}

int dispatch(const std::string& subcommand, const CommonOptions& opts) {
    ScenarioConfig config;
    try {
        config = fracsica::scenario::parse_config_file(opts.config_path);
    } catch (const fracsica::scenario::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fracsica::scenario::kExitConfigError;
    }

    if (opts.dump_config) {
        std::cout << fracsica::scenario::dump_config(config);
        return fracsica::scenario::kExitSuccess;
    }

    const std::string out_dir = resolve_out_dir(opts, config);
    try {
        if (subcommand == "simulate") {
            return fracsica::scenario::run_simulate(config, out_dir);
        }
        if (subcommand == "focp") {
            return fracsica::scenario::run_focp(config, out_dir);
        }
        return fracsica::scenario::run_hypotheses(config, out_dir);
    } catch (const fracsica::scenario::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fracsica::scenario::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return fracsica::scenario::kExitSolverFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Fractional-order SICA HIV/AIDS model: simulation, stability analysis and optimal "
        "control"};
    app.require_subcommand(1);

    CommonOptions simulate_opts;
    CLI::App* simulate =
        app.add_subcommand("simulate", "integrate the uncontrolled model per alpha");
    add_common(simulate, simulate_opts);

    CommonOptions focp_opts;
    CLI::App* focp =
        app.add_subcommand("focp", "solve the optimal control problem per alpha");
    add_common(focp, focp_opts);

    CommonOptions hyp_opts;
    CLI::App* hypotheses =
        app.add_subcommand("hypotheses", "check the incidence hypotheses H1-H4");
    add_common(hypotheses, hyp_opts);

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        return dispatch("simulate", simulate_opts);
    }
    if (focp->parsed()) {
        return dispatch("focp", focp_opts);
    }
    return dispatch("hypotheses", hyp_opts);
}
