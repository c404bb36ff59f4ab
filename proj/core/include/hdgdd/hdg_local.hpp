#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "hdgdd/fields.hpp"
#include "hdgdd/mesh.hpp"

namespace hdgdd {

/// Dense element system. Unknowns are ordered as
///   [flux_x | flux_y | scalar | trace face 0 | trace face 1 | trace face 2]
/// and rows follow the same order of test functions. Trace dofs are
/// coefficients in the global face orientation.
struct LocalSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  int flux_dim = 0;    ///< dim of one flux component
  int scalar_dim = 0;
  int face_dofs = 0;   ///< trace dofs per face

  [[nodiscard]] int interior_size() const { return 2 * flux_dim + scalar_dim; }
  [[nodiscard]] int trace_size() const { return 3 * face_dofs; }
  [[nodiscard]] int size() const { return interior_size() + trace_size(); }
  [[nodiscard]] int scalar_offset() const { return 2 * flux_dim; }
  [[nodiscard]] int trace_offset(int local_face = 0) const { return interior_size() + local_face * face_dofs; }

  [[nodiscard]] auto interior_interior() const { return matrix.topLeftCorner(interior_size(), interior_size()); }
  [[nodiscard]] auto interior_trace() const { return matrix.topRightCorner(interior_size(), trace_size()); }
  [[nodiscard]] auto trace_interior() const { return matrix.bottomLeftCorner(trace_size(), interior_size()); }
  [[nodiscard]] auto trace_trace() const { return matrix.bottomRightCorner(trace_size(), trace_size()); }
};

/// Normal component of a numerical flux on one face of one element, stored
/// as Legendre coefficients in the element-local face parameter.
struct NormalFlux {
  Eigen::VectorXd coefficients;

  [[nodiscard]] double operator()(double s) const;
};

/// p_hat.n on each local face of an element.
using ElementNormalFlux = std::array<NormalFlux, 3>;

/// Quadrature exactness used by the transport assembly for degree k.
[[nodiscard]] constexpr int transport_exactness(int k) { return 3 * k + 4; }
[[nodiscard]] constexpr int poisson_exactness(int k) { return 2 * (k + 1) + 2; }

/// Transport (HDG(A)) element matrix for q in [P^k]^2, u in P^{k+1}, u_hat in
/// P^k per face, with Lehrenfeld-Schoberl stabilization h_K^{-1}. Rows:
///   r:  (q,r) - (u, div r) + <u_hat, r.n>
///   w:  alpha (u,w) + (div q, w) + <h^{-1}(P u - u_hat), P w>
///       + (p u, grad w) - <p_hat.n u_hat, w>
///   mu: -<q.n, mu> - <h^{-1}(P u - u_hat), mu>     (= -<q_hat.n, mu>)
/// `drift` (degree k+1) and `p_hat_normal` may be null for zero drift.
/// The rhs is left zero.
[[nodiscard]] LocalSystem local_transport_blocks(const Mesh& mesh, int element, int k, const CoefficientField* drift,
                                                 const ElementNormalFlux* p_hat_normal, double mass_scale);

/// Poisson (HDG_{k+1}) element matrix for p in [P^{k+1}]^2, phi in P^{k+1},
/// phi_hat in P^{k+1} per face, scaled by eps:
///   r:  eps[(p,r) - (phi, div r) + <phi_hat, r.n>]
///   w:  eps[(div p, w) + <tau(phi - phi_hat), w>]
///   mu: -eps[<p.n, mu> + <tau(phi - phi_hat), mu>]   (= -eps<p_hat.n, mu>)
/// The rhs is left zero. Throws InputError for tau <= 0.
[[nodiscard]] LocalSystem local_poisson_blocks(const Mesh& mesh, int element, int k, const std::array<double, 3>& tau,
                                               double eps);

/// p.n + tau (phi - phi_hat) on one face of an element.
[[nodiscard]] NormalFlux evaluate_p_hat_normal(const Mesh& mesh, int element, int local_face,
                                               const CoefficientField& p, const CoefficientField& phi,
                                               const TraceField& phi_hat, double tau);

[[nodiscard]] std::vector<ElementNormalFlux> evaluate_p_hat_normal(const Mesh& mesh, const CoefficientField& p,
                                                                   const CoefficientField& phi,
                                                                   const TraceField& phi_hat,
                                                                   const std::vector<std::array<double, 3>>& tau);

} // namespace hdgdd
