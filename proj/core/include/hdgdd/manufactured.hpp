#pragma once

#include <Eigen/Dense>

#include "hdgdd/fields.hpp"
#include "hdgdd/mesh.hpp"
#include "hdgdd/solver.hpp"
#include "hdgdd/timestepping.hpp"

namespace hdgdd {

/// u = cos t sin x cos y, phi = sin t cos x sin y with closed-form derivatives.
struct Example1 {
  static double u(double x, double y, double t);
  static double phi(double x, double y, double t);
  static Eigen::Vector2d q(double x, double y, double t);  ///< -grad u
  static Eigen::Vector2d p(double x, double y, double t);  ///< -grad phi
  static double u_t(double x, double y, double t);
  static double laplace_u(double x, double y, double t);
  static double laplace_phi(double x, double y, double t);
  static double drift_divergence(double x, double y, double t);  ///< div(u grad phi)
};

struct Sources {
  SpaceTimeFunction f1;
  SpaceTimeFunction f2;
};

/// f1 = u_t - lap u + div(u grad phi), f2 = -eps lap phi + u.
[[nodiscard]] Sources example1_sources(double eps);

/// Full Example 1 problem (dirichlet data = exact traces on every boundary face).
[[nodiscard]] Problem example1_problem(double eps);

/// Doping profile: -0.8 on (0,0.5)x(0.5,1), 0.8 elsewhere.
[[nodiscard]] double example2_f2(double x, double y);

/// eps = 1e-2, f1 = 0, piecewise f2, mixed boundary data, u0 = (1 + f2)/2.
[[nodiscard]] Problem example2_problem();
inline constexpr double example2_eps = 1e-2;

/// Dirichlet on y = 0 and on {y = 1, x <= 0.25}, neumann elsewhere.
[[nodiscard]] BoundaryTag example2_boundary(const Point& midpoint, const Point& a, const Point& b);

/// Everything zero, all faces dirichlet.
[[nodiscard]] Problem zero_problem();

/// sqrt(sum_K integral_K |field - exact|^2) with quadrature exactness
/// 2 * degree + 8 (>= 2(k+2)+4 for every field the scheme produces).
[[nodiscard]] double l2_error(const CoefficientField& field, const SpaceTimeFunction& exact, double t,
                              const Mesh& mesh);
/// Vector-valued field against an exact vector function.
[[nodiscard]] double l2_error(const CoefficientField& field,
                              const std::function<Eigen::Vector2d(double, double, double)>& exact, double t,
                              const Mesh& mesh);

/// sqrt(sum_e h_e ||trace - g||^2_e) over all faces.
[[nodiscard]] double face_error(const TraceField& trace, const SpaceTimeFunction& exact, double t, const Mesh& mesh);

} // namespace hdgdd
