#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rotordyn/model.hpp"

namespace rotordyn {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 2 input/validation error, 3 numerical/solver error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

enum class Subcommand { Modes, Campbell, Critical, Frf };

/// Parsed command line for one run.
struct RunConfig {
    Subcommand subcommand = Subcommand::Modes;
    std::string model_path;
    std::string out_path;

    double speed_rpm = 0.0;            // modes/frf
    double min_rpm = 0.0;              // sweeps
    double max_rpm = 0.0;
    int steps = 0;

    std::optional<double> delta_t_k;   // thermal overrides
    std::optional<std::string> thermal_mode;  // "fixed" | "force"
    std::optional<double> axial_force_n;

    std::string resp_dof;              // node:<id>:<y|z|ty|tz>
    std::string exc_dof;
    double fmin_hz = 0.0;
    double fmax_hz = 0.0;
    int points = 0;
    std::string method = "modal";      // modal | real13 | direct | all

    double excitation_order = 1.0;
};

/// DOF addressing syntax used on the CLI: node:<id>:<y|z|ty|tz>.
DofIndex parse_dof_spec(const std::string& spec);

/// Effective thermal condition: config flags override the model's own
/// thermal block; absent both, no thermal load.
std::optional<ThermalLoad> effective_thermal(const RunConfig& config, const RotorModel& model);

int run_modes(const RunConfig& config);
int run_campbell(const RunConfig& config);
int run_critical(const RunConfig& config);
int run_frf(const RunConfig& config);

/// Full CLI entry point (argument parsing + dispatch + exit-code mapping).
int run_cli(int argc, const char* const* argv);

}  // namespace rotordyn
