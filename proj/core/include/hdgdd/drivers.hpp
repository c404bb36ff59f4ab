#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdgdd/config.hpp"
#include "hdgdd/eoc.hpp"
#include "hdgdd/mesh.hpp"
#include "hdgdd/timestepping.hpp"

namespace hdgdd {

/// Structured unit-square mesh with n = 2^level.
[[nodiscard]] Mesh level_mesh(int level);

/// Problem data for a config (eps resolved).
[[nodiscard]] Problem make_problem(const RunConfig& config);

/// Mesh for `simulate`: mesh_file if set, else mesh_n x mesh_n; example2
/// boundary tags applied when needed.
[[nodiscard]] Mesh simulation_mesh(const RunConfig& config);

struct LevelResult {
  ErrorReport report;
  double dt = 0.0;
  int steps = 0;
  int max_iterations = 0;
};

/// Example 1 on one level up to t_final.
[[nodiscard]] LevelResult run_example1_level(const RunConfig& config, int level, std::ostream& log);

struct ConvergenceResult {
  std::vector<LevelResult> levels;
  std::vector<EocRow> rows;
};

/// All configured levels; writes <output_dir>/convergence.csv when
/// output_dir is non-empty.
[[nodiscard]] ConvergenceResult run_convergence(const RunConfig& config, std::ostream& log);

struct SimulateResult {
  std::vector<std::string> vtk_files;
  std::vector<StepLog> log;
  double u_min = 0.0;
  double u_max = 0.0;
};

/// Time integration with VTK snapshots (cell means of u, phi and p) and
/// <output_dir>/timeseries.csv (t,u_min,u_max,iterations).
[[nodiscard]] SimulateResult run_simulate(const RunConfig& config, std::ostream& log);

struct ProjectionRow {
  std::string name;
  int expected_order = 0;
  int level = 0;
  double h = 0.0;
  double error = 0.0;
  std::optional<double> rate;
};

/// Projection errors of the Example 1 fields at project_time for every
/// level; writes <output_dir>/projection.csv.
[[nodiscard]] std::vector<ProjectionRow> run_project_check(const RunConfig& config, std::ostream& log);

[[nodiscard]] std::string projection_csv(const std::vector<ProjectionRow>& rows);

} // namespace hdgdd
