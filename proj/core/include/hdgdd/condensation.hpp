#pragma once

#include <Eigen/Dense>

#include "hdgdd/hdg_local.hpp"

namespace hdgdd {

/// Static condensation of one LocalSystem onto its trace unknowns:
///   S = A_LL - A_LI A_II^{-1} A_IL,   g = b_L - A_LI A_II^{-1} b_I.
/// Keeps the factorization of A_II so loads can change without
/// refactorizing (the Poisson operator does not depend on u).
class CondensedBlock {
public:
  CondensedBlock(const LocalSystem& local, int element_id);

  [[nodiscard]] const Eigen::MatrixXd& schur() const { return schur_; }
  [[nodiscard]] const Eigen::VectorXd& reduced_rhs() const { return reduced_rhs_; }
  [[nodiscard]] int interior_size() const { return static_cast<int>(interior_rhs_.size()); }
  [[nodiscard]] int trace_size() const { return static_cast<int>(schur_.rows()); }

  /// Reduced load for new interior/trace loads.
  [[nodiscard]] Eigen::VectorXd reduce(const Eigen::VectorXd& interior_rhs, const Eigen::VectorXd& trace_rhs) const;
  /// Interior unknowns A_II^{-1}(b_I - A_IL lambda) with the stored load.
  [[nodiscard]] Eigen::VectorXd recover(const Eigen::VectorXd& trace_values) const;
  [[nodiscard]] Eigen::VectorXd recover(const Eigen::VectorXd& trace_values, const Eigen::VectorXd& interior_rhs) const;

private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::MatrixXd solved_coupling_;  // A_II^{-1} A_IL
  Eigen::MatrixXd trace_interior_;   // A_LI
  Eigen::MatrixXd schur_;
  Eigen::VectorXd interior_rhs_;
  Eigen::VectorXd reduced_rhs_;
};

/// Throws SolverError with the element id and a reciprocal condition
/// estimate when A_II is singular.
[[nodiscard]] CondensedBlock condense(const LocalSystem& local, int element_id = -1);

[[nodiscard]] Eigen::VectorXd recover_interior(const CondensedBlock& block, const Eigen::VectorXd& trace_values);

} // namespace hdgdd
