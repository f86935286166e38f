#pragma once

#include <string>
#include <utility>
#include <vector>

#include "suprad/analysis.hpp"
#include "suprad/bifurcation.hpp"
#include "suprad/profiles.hpp"
#include "suprad/recurrence.hpp"
#include "suprad/solver.hpp"

namespace suprad {

/// Key/value pairs echoed under "config" in JSON emissions so every run
/// is self-describing.
using config_echo = std::vector<std::pair<std::string, std::string>>;

/// Expands "<min>:<max>:<count>" into a log-spaced grid with 0 < min < max
/// and an integer count >= 2. Usage error on malformed input.
[[nodiscard]] std::vector<double> parse_grid_spec(const std::string& spec);

/// Rows k, a_k, delta_k, eta_k, eta_tilde_k at full decimal precision.
void write_recurrence_csv(const std::string& path, const recurrence_table& table);

/// Rows r, z, z_prime, r2_ez over the given radii.
void write_profile_csv(const std::string& path, const bubble_profile& profile,
                       const std::vector<double>& radii);

/// Rows t, r, u, m, log_rhs, phi, psi (center first); the trailing pair is
/// left empty outside the diagnostics' validity range.
void write_solution_csv(const std::string& path, const radial_solution& sol,
                        const scaling_diagnostics& diag);

/// JSON sidecar: scalars, identity residuals, and the config echo. The
/// model and weight specs are always included so the file pair can be
/// reloaded without external knowledge.
void write_solution_json(const std::string& path, const radial_solution& sol,
                         const config_echo& config = {});

/// Rebuilds a solution from a write_solution_csv file and its sidecar.
/// The slope channel is recomputed from the model, phi/psi columns are
/// ignored, and the step-size floor is not preserved.
[[nodiscard]] radial_solution load_solution(const std::string& csv_path,
                                            const std::string& json_path);

/// Detection report: run scalars, one row per event, window totals, and
/// the config echo.
void write_detect_json(const std::string& path, const radial_solution& sol,
                       const std::vector<concentration_event>& events, double total_energy,
                       double sum_2a_target, const config_echo& config = {});

/// Rows mu, log_lambda, lambda, total_energy, bubble_count, turning_flag;
/// the flag marks the grid row nearest each certified turning point.
void write_branch_csv(const std::string& path, const branch& br);

} // namespace suprad
