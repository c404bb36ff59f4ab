#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "hdgdd/condensation.hpp"
#include "hdgdd/fields.hpp"
#include "hdgdd/mesh.hpp"

namespace hdgdd {

/// Numbering of trace unknowns: dirichlet faces are constrained, all other
/// faces (interior and neumann) own `dofs_per_face` consecutive active dofs in
/// global face order.
class TraceDofMap {
public:
  TraceDofMap() = default;
  TraceDofMap(const Mesh& mesh, int dofs_per_face);

  [[nodiscard]] int dofs_per_face() const { return dofs_per_face_; }
  [[nodiscard]] int num_active() const { return num_active_; }
  [[nodiscard]] bool constrained(int face) const { return first_[static_cast<std::size_t>(face)] < 0; }
  /// First active dof of a face, or -1 when constrained.
  [[nodiscard]] int first_dof(int face) const { return first_[static_cast<std::size_t>(face)]; }
  [[nodiscard]] const std::vector<int>& constrained_faces() const { return constrained_faces_; }

private:
  int dofs_per_face_ = 0;
  int num_active_ = 0;
  std::vector<int> first_;
  std::vector<int> constrained_faces_;
};

/// Condensed global system over active trace dofs. Constrained dofs are
/// eliminated: their columns are folded into the rhs.
struct TraceSystem {
  TraceDofMap dofs;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  TraceField constrained_values;  ///< prescribed values on dirichlet faces, zero elsewhere
};

/// Scatters element Schur complements and reduced loads. Throws SolverError if
/// a diagonal entry of the result is zero.
[[nodiscard]] TraceSystem assemble_trace_system(const Mesh& mesh, const std::vector<CondensedBlock>& blocks,
                                                TraceDofMap dofs, TraceField constrained_values);

/// Rhs only, for a fixed matrix (loads changed, blocks reduced anew).
[[nodiscard]] Eigen::VectorXd assemble_trace_rhs(const Mesh& mesh, const std::vector<Eigen::VectorXd>& reduced_rhs,
                                                 const std::vector<CondensedBlock>& blocks, const TraceDofMap& dofs,
                                                 const TraceField& constrained_values);

/// Direct sparse solve (COLAMD + LU). Throws SolverError on factorization
/// failure or if the relative residual exceeds 1e-10.
[[nodiscard]] Eigen::VectorXd solve_trace(const TraceSystem& system);

/// Reusable factorization. `factorize` keeps the symbolic analysis when the
/// sparsity pattern is unchanged.
class TraceSolver {
public:
  TraceSolver();
  ~TraceSolver();
  TraceSolver(TraceSolver&&) noexcept;
  TraceSolver& operator=(TraceSolver&&) noexcept;

  void factorize(const Eigen::SparseMatrix<double>& matrix);
  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Full trace field from active solution plus constrained values.
[[nodiscard]] TraceField expand_trace(const TraceSystem& system, const Eigen::VectorXd& active);
[[nodiscard]] TraceField expand_trace(const TraceDofMap& dofs, const TraceField& constrained_values,
                                      const Eigen::VectorXd& active);

/// Local trace vector (3 faces, element orientation of dof storage is global)
/// gathered from a full trace field.
[[nodiscard]] Eigen::VectorXd gather_trace(const Mesh& mesh, int element, const TraceField& trace);

} // namespace hdgdd
