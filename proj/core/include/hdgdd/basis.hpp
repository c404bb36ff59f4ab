#pragma once

#include <array>

#include <Eigen/Dense>

namespace hdgdd {

[[nodiscard]] constexpr int triangle_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Hierarchical orthonormal basis of P^k on the reference triangle, scaled so
/// that 2 * integral(phi_i phi_j) = delta_ij. On a physical element the mass
/// matrix is therefore |K| * I and phi_0 == 1.
///
/// Built by Cholesky orthonormalization of centred monomials, which gives the
/// same span and the same hierarchy as a Dubiner basis.
class TriangleBasis {
public:
  explicit TriangleBasis(int degree);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int dim() const { return dim_; }

  [[nodiscard]] Eigen::VectorXd values(double xi, double eta) const;
  /// dim x 2 matrix of reference gradients.
  [[nodiscard]] Eigen::MatrixX2d gradients(double xi, double eta) const;

  /// Coefficients of basis function i in the centred monomial basis
  /// (xi-1/3)^a (eta-1/3)^b, ordered by total degree then decreasing a.
  [[nodiscard]] const Eigen::MatrixXd& monomial_coefficients() const { return coefficients_; }

private:
  int degree_;
  int dim_;
  Eigen::MatrixXd coefficients_;  // row i: basis function i
};

/// Orthonormal Legendre basis on [0,1]: sqrt(2a+1) P_a(2s-1).
class SegmentBasis {
public:
  explicit SegmentBasis(int degree) : degree_(degree) {}

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int dim() const { return degree_ + 1; }
  [[nodiscard]] Eigen::VectorXd values(double s) const;
  [[nodiscard]] Eigen::VectorXd derivatives(double s) const;

private:
  int degree_;
};

/// Shared immutable basis instance.
[[nodiscard]] const TriangleBasis& triangle_basis(int degree);

/// Basis values and reference gradients tabulated at the points of
/// triangle_quadrature(exactness). Rows are quadrature points.
struct VolumeTable {
  Eigen::MatrixXd values;
  Eigen::MatrixXd d_xi;
  Eigen::MatrixXd d_eta;
};

/// Triangle-basis values at the points of segment_quadrature(exactness)
/// mapped onto each local face (parametrized from vertex f to vertex f+1),
/// and segment-basis values at the same parameters, both orientations.
struct FaceTable {
  std::array<Eigen::MatrixXd, 3> volume_values;  ///< per local face: nq x dim
  Eigen::MatrixXd trace_values;                  ///< nq x (k+1), parameter s
  Eigen::MatrixXd trace_values_reversed;         ///< nq x (k+1), parameter 1-s
};

[[nodiscard]] const VolumeTable& volume_table(int degree, int exactness);
/// `volume_degree` selects the triangle basis, `trace_degree` the segment basis.
[[nodiscard]] const FaceTable& face_table(int volume_degree, int trace_degree, int exactness);

/// Reference coordinates of the point at parameter s on local face f.
[[nodiscard]] std::array<double, 2> reference_face_point(int local_face, double s);

} // namespace hdgdd
