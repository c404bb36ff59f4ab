#include "hdgdd/local_matrices.hpp"

#include <fmt/format.h>

#include "hdgdd/error.hpp"
#include "hdgdd/quadrature.hpp"

namespace hdgdd {

Eigen::MatrixXd local_mass_matrix(const TriangleBasis& basis, const ElementGeometry& geometry, int exactness) {
  if (!(geometry.det > 0.0)) {
    throw MeshError("mass matrix requested on a degenerate element");
  }
  if (exactness < 0) {
    exactness = 2 * basis.degree();
  }
  if (exactness < 2 * basis.degree()) {
    throw InputError(fmt::format("mass matrix needs exactness >= {}", 2 * basis.degree()));
  }
  const auto& table = volume_table(basis.degree(), exactness);
  const auto& rule = triangle_quadrature(exactness);
  const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), rule.size());
  return geometry.det * table.values.transpose() * w.asDiagonal() * table.values;
}

Eigen::MatrixXd local_face_mass(const SegmentBasis& trial, const SegmentBasis& test, double length) {
  if (!(length > 0.0)) {
    throw MeshError("face mass requested on a zero-length face");
  }
  const auto& rule = segment_quadrature(trial.degree() + test.degree());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(trial.dim(), test.dim());
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[static_cast<std::size_t>(q)];
    m.noalias() += rule.weights[static_cast<std::size_t>(q)] * length * trial.values(s) * test.values(s).transpose();
  }
  return m;
}

Eigen::MatrixXd local_face_mass(const TriangleBasis& trial, int local_face, const SegmentBasis& test,
                                const ElementGeometry& geometry, bool reversed) {
  const double length = geometry.face_lengths.at(static_cast<std::size_t>(local_face));
  if (!(length > 0.0)) {
    throw MeshError("face mass requested on a zero-length face");
  }
  const auto& rule = segment_quadrature(trial.degree() + test.degree());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(trial.dim(), test.dim());
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[static_cast<std::size_t>(q)];
    const auto p = reference_face_point(local_face, s);
    const Eigen::VectorXd psi = test.values(reversed ? 1.0 - s : s);
    m.noalias() += rule.weights[static_cast<std::size_t>(q)] * length * trial.values(p[0], p[1]) * psi.transpose();
  }
  return m;
}

} // namespace hdgdd
