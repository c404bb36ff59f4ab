#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hdgdd {

enum class ProblemKind { example1, example2, zero };

/// Run parameters read from a line-oriented `key = value` file (`#` starts a
/// comment). Unset optional keys fall back to the problem defaults.
struct RunConfig {
  int k = 0;
  std::vector<int> levels{1, 2, 3, 4, 5};  ///< level l has n = 2^l cells per side
  std::optional<double> eps;               ///< default: 0.1 (example1), 1e-2 (example2), 1 (zero)
  double tau = 1.0;
  std::string dt = "auto";                 ///< "auto", "h", "h^1.5" or a number
  double t_final = 1.0;
  double coupling_rel_tol = 1e-10;
  double coupling_abs_tol = 1e-12;
  int coupling_max_iter = 50;
  int coupling_anderson_depth = 2;
  std::vector<double> snapshots;
  std::string output_dir = "out";
  int threads = 1;
  ProblemKind problem = ProblemKind::example1;
  int mesh_n = 50;                         ///< simulate: cells per side
  std::string mesh_file;                   ///< simulate: optional mesh instead of mesh_n
  double project_time = 0.5;               ///< project-check: evaluation time of the fields

  [[nodiscard]] double resolved_eps() const;
};

/// Throws ConfigError with the line number on malformed input or unknown keys.
[[nodiscard]] RunConfig parse_config(const std::string& text);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Canonical text: every key in fixed order, one per line.
[[nodiscard]] std::string serialize_config(const RunConfig& config);

/// Range checks. Throws ConfigError.
void validate(const RunConfig& config);

[[nodiscard]] std::string to_string(ProblemKind kind);

struct ResolvedStep {
  double dt = 0.0;
  bool adjusted = false;  ///< requested step was reduced to divide T
  double requested = 0.0;
};

/// Time step for mesh size h: "h" -> h, "h^1.5" -> h^1.5, "auto" -> h for
/// k = 0 and h^1.5 otherwise, numbers as given; then reduced to the largest
/// step <= the request that divides T.
[[nodiscard]] ResolvedStep resolve_dt(const RunConfig& config, double h);

} // namespace hdgdd
