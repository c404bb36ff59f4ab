#include "hdgdd/trace_system.hpp"

#include <cmath>

#include <Eigen/SparseLU>
#include <fmt/format.h>

#include "hdgdd/error.hpp"

namespace hdgdd {

TraceDofMap::TraceDofMap(const Mesh& mesh, int dofs_per_face) : dofs_per_face_(dofs_per_face) {
  first_.assign(static_cast<std::size_t>(mesh.num_faces()), -1);
  int next = 0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag == BoundaryTag::dirichlet) {
      constrained_faces_.push_back(f);
    } else {
      first_[static_cast<std::size_t>(f)] = next;
      next += dofs_per_face;
    }
  }
  num_active_ = next;
}

namespace {

// Global index of local trace dof l, or -1 when constrained.
int global_index(const Mesh& mesh, const TraceDofMap& dofs, int element, int l) {
  const int nt = dofs.dofs_per_face();
  const int face = mesh.element_faces(element)[static_cast<std::size_t>(l / nt)];
  const int first = dofs.first_dof(face);
  return first < 0 ? -1 : first + l % nt;
}

double constrained_value(const Mesh& mesh, const TraceDofMap& dofs, const TraceField& values, int element, int l) {
  const int nt = dofs.dofs_per_face();
  const int face = mesh.element_faces(element)[static_cast<std::size_t>(l / nt)];
  return values.face(face)[l % nt];
}

} // namespace

TraceSystem assemble_trace_system(const Mesh& mesh, const std::vector<CondensedBlock>& blocks, TraceDofMap dofs,
                                  TraceField constrained_values) {
  TraceSystem sys;
  const int n = dofs.num_active();
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> triplets;
  const int nl = 3 * dofs.dofs_per_face();
  triplets.reserve(blocks.size() * static_cast<std::size_t>(nl * nl));
  std::vector<int> index(static_cast<std::size_t>(nl));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const CondensedBlock& block = blocks[static_cast<std::size_t>(e)];
    for (int l = 0; l < nl; ++l) {
      index[static_cast<std::size_t>(l)] = global_index(mesh, dofs, e, l);
    }
    for (int i = 0; i < nl; ++i) {
      const int gi = index[static_cast<std::size_t>(i)];
      if (gi < 0) {
        continue;
      }
      double r = block.reduced_rhs()[i];
      for (int j = 0; j < nl; ++j) {
        const int gj = index[static_cast<std::size_t>(j)];
        if (gj < 0) {
          r -= block.schur()(i, j) * constrained_value(mesh, dofs, constrained_values, e, j);
        } else {
          triplets.emplace_back(gi, gj, block.schur()(i, j));
        }
      }
      sys.rhs[gi] += r;
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();

  for (int i = 0; i < n; ++i) {
    if (sys.matrix.coeff(i, i) == 0.0) {
      throw SolverError(fmt::format("trace system has a zero diagonal at dof {} (of {})", i, n));
    }
  }
  sys.dofs = std::move(dofs);
  sys.constrained_values = std::move(constrained_values);
  return sys;
}

Eigen::VectorXd assemble_trace_rhs(const Mesh& mesh, const std::vector<Eigen::VectorXd>& reduced_rhs,
                                   const std::vector<CondensedBlock>& blocks, const TraceDofMap& dofs,
                                   const TraceField& constrained_values) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs.num_active());
  const int nl = 3 * dofs.dofs_per_face();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& s = blocks[static_cast<std::size_t>(e)].schur();
    const auto& g = reduced_rhs[static_cast<std::size_t>(e)];
    for (int i = 0; i < nl; ++i) {
      const int gi = global_index(mesh, dofs, e, i);
      if (gi < 0) {
        continue;
      }
      double r = g[i];
      for (int j = 0; j < nl; ++j) {
        if (global_index(mesh, dofs, e, j) < 0) {
          r -= s(i, j) * constrained_value(mesh, dofs, constrained_values, e, j);
        }
      }
      rhs[gi] += r;
    }
  }
  return rhs;
}

struct TraceSolver::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  Eigen::SparseMatrix<double> matrix;
  bool analyzed = false;
};

TraceSolver::TraceSolver() : impl_(std::make_unique<Impl>()) {}
TraceSolver::~TraceSolver() = default;
TraceSolver::TraceSolver(TraceSolver&&) noexcept = default;
TraceSolver& TraceSolver::operator=(TraceSolver&&) noexcept = default;

namespace {

bool same_pattern(const Eigen::SparseMatrix<double>& a, const Eigen::SparseMatrix<double>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) {
    return false;
  }
  for (Eigen::Index j = 0; j <= a.outerSize(); ++j) {
    if (a.outerIndexPtr()[j] != b.outerIndexPtr()[j]) {
      return false;
    }
  }
  for (Eigen::Index i = 0; i < a.nonZeros(); ++i) {
    if (a.innerIndexPtr()[i] != b.innerIndexPtr()[i]) {
      return false;
    }
  }
  return true;
}

} // namespace

void TraceSolver::factorize(const Eigen::SparseMatrix<double>& matrix) {
  if (matrix.rows() == 0) {
    impl_->matrix = matrix;
    return;
  }
  if (!impl_->analyzed || !same_pattern(impl_->matrix, matrix)) {
    impl_->lu.analyzePattern(matrix);
    impl_->analyzed = true;
  }
  impl_->matrix = matrix;
  impl_->lu.factorize(matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw SolverError(fmt::format("sparse LU failed on {} trace dofs ({} nonzeros): {}", matrix.rows(),
                                  matrix.nonZeros(), impl_->lu.lastErrorMessage()));
  }
}

Eigen::VectorXd TraceSolver::solve(const Eigen::VectorXd& rhs) const {
  if (impl_->matrix.rows() == 0) {
    return Eigen::VectorXd::Zero(0);
  }
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  const double bnorm = rhs.norm();
  const double rnorm = (impl_->matrix * x - rhs).norm();
  if (!std::isfinite(rnorm) || rnorm > 1e-10 * bnorm + 1e-300) {
    if (!(bnorm == 0.0 && rnorm == 0.0)) {
      throw SolverError(fmt::format("trace solve residual {:.3e} exceeds tolerance (|b| = {:.3e}, {} dofs)", rnorm,
                                    bnorm, impl_->matrix.rows()));
    }
  }
  return x;
}

Eigen::VectorXd solve_trace(const TraceSystem& system) {
  TraceSolver solver;
  solver.factorize(system.matrix);
  return solver.solve(system.rhs);
}

TraceField expand_trace(const TraceDofMap& dofs, const TraceField& constrained_values, const Eigen::VectorXd& active) {
  TraceField out = constrained_values;
  const int nt = dofs.dofs_per_face();
  for (int f = 0; f < out.num_faces(); ++f) {
    const int first = dofs.first_dof(f);
    if (first >= 0) {
      out.face(f) = active.segment(first, nt);
    }
  }
  return out;
}

TraceField expand_trace(const TraceSystem& system, const Eigen::VectorXd& active) {
  return expand_trace(system.dofs, system.constrained_values, active);
}

Eigen::VectorXd gather_trace(const Mesh& mesh, int element, const TraceField& trace) {
  const int nt = trace.face_size();
  Eigen::VectorXd out(3 * nt);
  for (int f = 0; f < 3; ++f) {
    out.segment(f * nt, nt) = trace.face(mesh.element_faces(element)[static_cast<std::size_t>(f)]);
  }
  return out;
}

} // namespace hdgdd
