#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asianpde/sde.hpp"
#include "asianpde/strategy.hpp"

namespace asianpde {

enum class Command { price, verify_key_lemma, verify_general, barrier_table, convergence, sweep };

Command parse_command(const std::string& name);
std::string to_string(Command c);

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitBoundViolation = 4,
};

/// Fully resolved run description. Every numeric field is range-checked by
/// validate() before any computation starts.
struct RunConfig {
    Command command = Command::price;
    std::optional<MarketSpec> market;

    std::size_t grid_nx = 1025;
    std::size_t grid_nt = 1025;

    std::size_t paths = 100000;
    std::size_t steps = 1000;
    std::uint64_t seed = 20240611;
    bool seed_explicit = false;
    Scheme scheme = Scheme::exact_y;

    double t = 0.0;  ///< price point
    double x = 1.0;

    std::vector<double> r_list;  ///< empty: per-command default
    double t0 = -1.0;            ///< key-lemma frame centre; < 0 means T / 2
    double mu = 2.0;
    double lambda = 1.0;
    double Lambda = 1.0;
    double M0 = 1.0;

    double barrier_R = 6.0;
    std::vector<double> barrier_times{0.5, 1.0, 2.0};
    std::size_t barrier_nx = 101;

    std::size_t convergence_levels = 3;

    std::string out_dir;

    void validate() const;
    /// Deterministic key=value rendering of every field that affects output.
    std::string canonical() const;
    std::uint64_t hash() const;
};

/// Command-line overrides; unset members leave the config file value alone.
struct CliOverrides {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
    std::optional<std::size_t> grid_nx;
    std::optional<std::size_t> grid_nt;
    std::optional<std::string> r_list;
    std::optional<double> mu;
    std::optional<double> t;
    std::optional<double> x;
    std::optional<std::string> scheme;
};

/// Reads the config file (if any), applies overrides, validates.
RunConfig resolve_config(Command command, const CliOverrides& overrides);

struct RunResult {
    int exit_code = kExitOk;
    std::string console;                        ///< human-readable summary
    std::map<std::string, std::string> files;   ///< artifact name -> CSV text
};

/// Executes a validated config. Numerical failures and bound violations are
/// reported through exit_code; ConfigError propagates.
RunResult run(const RunConfig& config);

/// Writes every artifact to dir via temporary files renamed into place.
void write_artifacts(const RunResult& result, const std::string& dir);

}  // namespace asianpde
