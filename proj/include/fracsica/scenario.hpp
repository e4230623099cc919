#ifndef FRACSICA_SCENARIO_HPP
#define FRACSICA_SCENARIO_HPP

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsica/focp.hpp"
#include "fracsica/sica.hpp"

// Scenario configuration (INI-style text files) and the batch runners behind
// the CLI subcommands. The config grammar is documented in the README; every
// key has a default, so a file only states what it overrides.
namespace fracsica::scenario {

struct IncidenceConfig {
    std::string kind = "bilinear";  // bilinear | saturated | hattaf_yousfi
    double beta = sica::kMoroccoBeta;
    double saturation_a = 1.0;      // saturated: f = beta*S/(1 + a*I)
    double hattaf_a0 = 1.0;         // hattaf_yousfi: f = beta*S/(a0 + a1*S + a2*I)
    double hattaf_a1 = 0.0;
    double hattaf_a2 = 0.0;

    friend bool operator==(const IncidenceConfig&, const IncidenceConfig&) = default;
};

struct InitialStateConfig {
    bool morocco = true;  // when false, the explicit fractions below are used
    sica::SicaState state{0.0, 0.0, 0.0, 0.0};

    friend bool operator==(const InitialStateConfig&, const InitialStateConfig&) = default;
};

struct ModelConfig {
    sica::SicaParams params = sica::morocco_params();
    IncidenceConfig incidence;
    InitialStateConfig initial;

    friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct SolverConfig {
    std::vector<double> alphas{1.0};
    double t0 = 0.0;
    double tf = 5.0;
    std::size_t n_steps = 2000;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct FocpSection {
    bool enabled = false;
    double B1 = 2.5;
    double B2 = 2.5;
    bool delta_auto = true;  // resolve delta as max I of the uncontrolled alpha=1 run
    double delta = 0.0;      // used when delta_auto is false
    double v1_max = 1.0;
    double v2_max = 1.0;
    double C1 = 1.0;
    double C2 = 1.0;
    std::size_t max_iterations = 300;
    double tolerance = 1e-4;
    double relaxation = 0.5;

    friend bool operator==(const FocpSection&, const FocpSection&) = default;
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool json = true;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
    ModelConfig model;
    SolverConfig solver;
    FocpSection focp;
    OutputConfig output;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parse failure; `line` is 1-based (0 when the location is not line-specific)
/// and `key` names the offending entry when there is one.
struct ConfigError : std::runtime_error {
    ConfigError(int line_, std::string key_, const std::string& what)
        : std::runtime_error(what), line(line_), key(std::move(key_)) {}
    int line;
    std::string key;
};

ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

/// Canonical text form; parsing it back yields an identical configuration.
std::string dump_config(const ScenarioConfig& config);

/// Instantiate the configured incidence model (throws ConfigError on an
/// unregistered kind).
sica::IncidencePtr make_incidence(const IncidenceConfig& config);

sica::SicaState initial_state(const ModelConfig& config);

// Process exit codes shared by the runners and the CLI.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitSolverFailure = 2;
inline constexpr int kExitWarnings = 3;

/// Simulate the uncontrolled model for every configured alpha; writes one
/// trajectory CSV per alpha plus summary.json into out_dir.
int run_simulate(const ScenarioConfig& config, const std::string& out_dir);

/// Solve the control problem for every configured alpha; writes per-alpha
/// CSVs (states, controls, efficacy) plus cost_effectiveness.json. Returns
/// kExitWarnings when any sweep stopped at max_iterations without converging.
int run_focp(const ScenarioConfig& config, const std::string& out_dir);

/// Check the incidence hypotheses; writes hypotheses.json and prints a
/// human-readable report to stdout.
int run_hypotheses(const ScenarioConfig& config, const std::string& out_dir);

}  // namespace fracsica::scenario

#endif
