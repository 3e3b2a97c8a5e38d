#pragma once
// Run configuration and the five commands of the `gi` tool. Commands build
// their outputs in memory; write_outputs puts them on disk in one go.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gi/elliptic.hpp"
#include "gi/pde_sim.hpp"

namespace gi {

struct ProfileSpec {
    std::string family = "constant";  // constant | phase_step | bump
    cplx eps{0.0, 0.0};                // bump amplitude
    double x0 = 0.0;                   // centre of the step or bump
    double sigma = 1.0;                // bump width
    double ell = 2.0;                  // phase-step width
};

struct AsymptoteSpec {
    std::optional<double> x, t;                // single point
    std::vector<double> sweep_t;               // sweep: every t against every x (or xi)
    std::vector<double> sweep_x, sweep_xi;
    double collar = 1e-4;
    bool collar_fallback = false;
};

struct SimSpec {
    SimGrid grid;
    double T = 1.0;
    std::vector<double> snapshots;
    double dt = -1.0;  // <= 0: 0.2 dx^2
    double sponge_fraction = 0.1, sponge_strength = 1.0;
    /// Write u = q exp(i q0^4 t / 2) instead of q.
    bool gauge = false;
};

struct CompareSpec {
    std::vector<double> xi, t;
};

struct RunConfig {
    Background bg;
    double phase_minus = 0.0, phase_plus = 0.0;
    ProfileSpec profile;
    std::vector<double> z_grid;
    std::vector<double> xi_grid;
    AsymptoteSpec asymptote;
    SimSpec sim;
    CompareSpec compare;
    double realness_tol = 1e-6;
    std::string output_dir = ".";

    InitialProfile make_profile() const;
};

/// Parses a JSON document. Unknown keys, wrong types and inconsistent values
/// throw ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& file);

struct OutputFile {
    std::string name;
    std::string content;
};

struct CommandResult {
    std::vector<OutputFile> files;
    std::string console;  // printed to stdout
};

CommandResult cmd_scatter(const RunConfig& cfg);
CommandResult cmd_regions(const RunConfig& cfg);
CommandResult cmd_asymptote(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_compare(const RunConfig& cfg);

/// Dispatches by name and, with gnuplot set, adds a script per CSV.
/// Unknown names throw ConfigError.
CommandResult run_command(const std::string& name, const RunConfig& cfg, bool gnuplot = false);

/// Creates dir and writes every file through a temporary and a rename.
void write_outputs(const CommandResult& result, const std::filesystem::path& dir);

/// Leading-order q(x, t) in whichever sector x/t lies. Inside the collar of
/// the elliptic sectors this throws CollarError unless collar_fallback is set.
struct AsymptoteValue {
    cplx q;
    std::string region;
};
AsymptoteValue leading_order(double x, double t, const ScatteringData& data, const AsymptoteSpec& spec);

/// 17 significant digits, '.' separator.
std::string format_double(double v);

/// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gi
