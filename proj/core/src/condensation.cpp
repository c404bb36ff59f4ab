#include "hdgdd/condensation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hdgdd/error.hpp"

namespace hdgdd {

namespace {
constexpr double singular_rcond = 1e-14;
}

CondensedBlock::CondensedBlock(const LocalSystem& local, int element_id) {
  const int ni = local.interior_size();
  const int nl = local.trace_size();
  lu_.compute(local.interior_interior());
  // rcond() reports 1 for an exactly zero pivot, so bound it by the pivot ratio.
  const Eigen::VectorXd pivots = lu_.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = ni > 0 ? pivots.minCoeff() / pivots.maxCoeff() : 1.0;
  const double rcond = ni > 0 ? std::min(lu_.rcond(), pivot_ratio) : 1.0;
  if (!(rcond > singular_rcond) || !std::isfinite(rcond)) {
    throw SolverError(fmt::format("interior block of element {} is singular (rcond estimate {:.3e})", element_id,
                                  rcond));
  }
  solved_coupling_ = lu_.solve(local.interior_trace());
  trace_interior_ = local.trace_interior();
  schur_ = local.trace_trace() - trace_interior_ * solved_coupling_;
  interior_rhs_ = local.rhs.head(ni);
  reduced_rhs_ = local.rhs.tail(nl) - trace_interior_ * lu_.solve(interior_rhs_);
}

Eigen::VectorXd CondensedBlock::reduce(const Eigen::VectorXd& interior_rhs, const Eigen::VectorXd& trace_rhs) const {
  return trace_rhs - trace_interior_ * lu_.solve(interior_rhs);
}

Eigen::VectorXd CondensedBlock::recover(const Eigen::VectorXd& trace_values) const {
  return recover(trace_values, interior_rhs_);
}

Eigen::VectorXd CondensedBlock::recover(const Eigen::VectorXd& trace_values,
                                        const Eigen::VectorXd& interior_rhs) const {
  return lu_.solve(interior_rhs) - solved_coupling_ * trace_values;
}

CondensedBlock condense(const LocalSystem& local, int element_id) { return CondensedBlock(local, element_id); }

Eigen::VectorXd recover_interior(const CondensedBlock& block, const Eigen::VectorXd& trace_values) {
  return block.recover(trace_values);
}

} // namespace hdgdd
