#pragma once

// CLI orchestration: single runs, parameter sweeps, verification suites.
// Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
// 3 integrator failure.

#include "bbm/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bbm {

inline constexpr int exit_ok = 0;
inline constexpr int exit_check_failed = 1;
inline constexpr int exit_bad_config = 2;
inline constexpr int exit_integration_failed = 3;

/// BBM_OUTPUT_DIR, when set, replaces the configured output directory.
std::filesystem::path resolve_output_dir(const std::string& configured);

struct SimulationOutcome {
    int exit_code = exit_ok;
    std::optional<double> failure_time;
    std::string message;
    double initial_energy = 0.0;
    double final_h1_distance = 0.0;
    double total_dissipation = 0.0;
    double tail_last = 0.0;
    double balance_residual = 0.0;
};

/// Runs one configuration and writes ledger.csv, snapshots/, decay_report.json
/// and config.json under `output_dir`.
SimulationOutcome simulate(const SimConfig& config, const std::filesystem::path& output_dir);

int run_simulate(const std::string& config_path, std::ostream& out, std::ostream& err);
int run_sweep(const std::string& sweep_path, std::ostream& out, std::ostream& err);
int run_verify(const std::string& suite, std::ostream& out);

}  // namespace bbm
