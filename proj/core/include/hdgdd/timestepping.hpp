#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hdgdd/fields.hpp"
#include "hdgdd/mesh.hpp"
#include "hdgdd/projections.hpp"
#include "hdgdd/solver.hpp"

namespace hdgdd {

/// Uniform grid on [0, T]. Throws InputError unless steps * dt == T to 1e-12.
class TimeGrid {
public:
  TimeGrid(double t_final, double dt);

  [[nodiscard]] double t_final() const { return t_final_; }
  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] int steps() const { return steps_; }
  [[nodiscard]] double time(int step) const { return step == steps_ ? t_final_ : step * dt_; }
  /// Step index of a grid time, or -1 if t is not on the grid.
  [[nodiscard]] int step_of(double t) const;

  /// Largest dt' <= dt with T/dt' an integer.
  [[nodiscard]] static double divisor_step(double t_final, double dt);

private:
  double t_final_;
  double dt_;
  int steps_;
};

enum class BdfScheme { bdf1, bdf2 };

struct BDFState {
  CoefficientField u;       ///< level n
  CoefficientField u_prev;  ///< level n-1 (empty before the first step)
  double time = 0.0;
  int steps_taken = 0;

  [[nodiscard]] BdfScheme next_scheme() const { return steps_taken == 0 ? BdfScheme::bdf1 : BdfScheme::bdf2; }
};

struct CouplingConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_iter = 50;
  /// Anderson mixing depth on the Gummel map; 0 gives the plain fixed point.
  int anderson_depth = 2;
};

/// Problem definition shared by the time loop and the harness.
struct Problem {
  SpaceTimeFunction f1;
  SpaceTimeFunction f2;
  ScalarFunction u0;
  BoundaryData bc;
};

struct StepResult {
  TransportSolution transport;
  PoissonSolution poisson;
  int iterations = 0;
  std::vector<double> increments;  ///< L2 increment of u per fixed-point iteration
};

/// L2 projection of u0 onto P^{k+1}.
[[nodiscard]] BDFState initialize(const ScalarFunction& u0, const Mesh& mesh, int k);

/// Coupled solver for one mesh; owns the cached Poisson factorization.
class CoupledStepper {
public:
  CoupledStepper(const Mesh& mesh, SolverConfig config, Problem problem, CouplingConfig coupling = {});

  /// Advances the state by dt (BDF1 on the first step, BDF2 after) with a
  /// Gummel fixed point. Throws SolverError if it does not converge.
  StepResult step(BDFState& state, double dt);

  [[nodiscard]] const PoissonSolver& poisson() const { return poisson_; }

private:
  const Mesh* mesh_;
  SolverConfig config_;
  Problem problem_;
  CouplingConfig coupling_;
  PoissonSolver poisson_;
  TransportSolver transport_;
};

struct Snapshot {
  double time = 0.0;
  int step = 0;
  TransportSolution transport;
  PoissonSolution poisson;
};

struct StepLog {
  double time = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  int iterations = 0;
};

struct Trajectory {
  BDFState final_state;
  std::optional<StepResult> final_step;
  std::vector<Snapshot> snapshots;
  std::vector<StepLog> log;
};

using StepObserver = std::function<void(const StepLog&, const StepResult&)>;

/// Runs the whole grid. Snapshot times must lie on the grid (InputError
/// otherwise); the result at each requested time is stored.
[[nodiscard]] Trajectory run(CoupledStepper& stepper, BDFState initial, const TimeGrid& grid,
                             const std::vector<double>& snapshot_times = {}, const StepObserver& observer = {});

/// Min and max of the scalar over quadrature points and vertices of every element.
[[nodiscard]] std::pair<double, double> field_range(const CoefficientField& u, int exactness);

/// sqrt(sum_K |K| |c_K|^2) for the orthonormal basis: the L2 norm of a field.
[[nodiscard]] double l2_norm(const Mesh& mesh, const CoefficientField& field);

} // namespace hdgdd
