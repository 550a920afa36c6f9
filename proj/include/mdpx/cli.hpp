#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mdpx {

/// Parsed command line. Fields not used by the chosen command keep their defaults.
struct RunConfig {
    std::string command;  // generate | analyze | bounds | cover | reach | learn | sweep | report
    std::string input;    // MDP path, generator kind, or sweep family
    std::string output_path;  // empty: standard output
    std::string format = "json";
    std::uint64_t master_seed = 0;
    std::optional<std::size_t> workers;

    // MDP loading
    bool renormalize = false;
    std::optional<std::size_t> component;

    // generate
    int n = 1;
    int width = 5;
    int height = 5;
    std::string walls_file;
    std::vector<std::string> goals;  // "x,y"
    double slip = 0.0;
    double density = 1.0;
    std::size_t states = 2;
    std::size_t actions = 1;
    double gamma = 0.95;

    // analyze
    bool cheeger = false;
    bool spectrum = false;
    bool symmetry = false;

    // bounds / learn
    std::map<std::string, double> constants;  // constant_c1, constant_c2, omega, epsilon, delta, vmax
    std::optional<double> epsilon;

    // cover / sweep
    std::size_t trials = 64;
    std::size_t horizon = 100000;

    // reach
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t k = 1;

    // learn
    std::size_t steps = 100000;
    std::size_t seeds = 1;

    // sweep
    std::string sizes;  // "A..B" or comma list
    std::string metric;
};

/// Parses argv and runs one subcommand. Reports go to `out` (or the output
/// file); diagnostics and usage go to `err`. Returns 0 on success, 1 on
/// domain errors (reducible MDP, bad file), 2 on usage errors.
/// MDPX_SEED overrides --seed and MDPX_WORKERS overrides --workers.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Runs an already-parsed configuration.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mdpx
