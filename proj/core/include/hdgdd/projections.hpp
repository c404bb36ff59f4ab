#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hdgdd/fields.hpp"
#include "hdgdd/mesh.hpp"

namespace hdgdd {

using ScalarFunction = std::function<double(double x, double y)>;
using VectorFunction = std::function<Eigen::Vector2d(double x, double y)>;

/// Per-element stabilization values on the three local faces.
using FaceStabilization = std::vector<std::array<double, 3>>;

[[nodiscard]] FaceStabilization uniform_stabilization(const Mesh& mesh, double tau);

/// Element-wise L2 projection onto P^degree (quadrature exactness 2k+12, capped at 40).
[[nodiscard]] CoefficientField l2_project_element(const ScalarFunction& f, int degree, const Mesh& mesh);
[[nodiscard]] CoefficientField l2_project_element(const VectorFunction& f, int degree, const Mesh& mesh);

/// Face-wise L2 projection onto P^degree(e).
[[nodiscard]] TraceField l2_project_face(const ScalarFunction& g, int degree, const Mesh& mesh);

/// A volumetric field restricted to one face of an adjacent element,
/// evaluated in the global face parameter.
class FaceRestriction {
public:
  FaceRestriction(Eigen::VectorXd coefficients, int degree, int local_face, bool reversed)
      : coefficients_(std::move(coefficients)), degree_(degree), local_face_(local_face), reversed_(reversed) {}

  [[nodiscard]] double operator()(double s) const;
  [[nodiscard]] int local_face() const { return local_face_; }

private:
  Eigen::VectorXd coefficients_;
  int degree_;
  int local_face_;
  bool reversed_;
};

/// Throws MeshError if `face_id` is not a face of `element`.
[[nodiscard]] FaceRestriction restrict_to_face(const CoefficientField& field, const Mesh& mesh, int element,
                                               int face_id, int component = 0);

struct HdgProjection {
  CoefficientField flux;    ///< Pi_V p, two components
  CoefficientField scalar;  ///< Pi_W phi
};

/// Coupled projection into [P^degree]^2 x P^degree: element moments against
/// P^{degree-1} and face moments of (flux.n + tau scalar) against P^degree(e).
/// The scheme's potential space uses degree = k+1. Throws SolverError when an
/// element violates tau >= 0 with max tau > 0.
[[nodiscard]] HdgProjection hdg_project(const VectorFunction& p, const ScalarFunction& phi, int degree,
                                        const FaceStabilization& tau, const Mesh& mesh);
[[nodiscard]] HdgProjection hdg_project(const VectorFunction& p, const ScalarFunction& phi, int degree, double tau,
                                        const Mesh& mesh);

} // namespace hdgdd
