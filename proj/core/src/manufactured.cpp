#include "hdgdd/manufactured.hpp"

#include <algorithm>
#include <cmath>

#include "hdgdd/basis.hpp"
#include "hdgdd/quadrature.hpp"

namespace hdgdd {

double Example1::u(double x, double y, double t) { return std::cos(t) * std::sin(x) * std::cos(y); }
double Example1::phi(double x, double y, double t) { return std::sin(t) * std::cos(x) * std::sin(y); }

Eigen::Vector2d Example1::q(double x, double y, double t) {
  return {-std::cos(t) * std::cos(x) * std::cos(y), std::cos(t) * std::sin(x) * std::sin(y)};
}

Eigen::Vector2d Example1::p(double x, double y, double t) {
  return {std::sin(t) * std::sin(x) * std::sin(y), -std::sin(t) * std::cos(x) * std::cos(y)};
}

double Example1::u_t(double x, double y, double t) { return -std::sin(t) * std::sin(x) * std::cos(y); }
double Example1::laplace_u(double x, double y, double t) { return -2.0 * u(x, y, t); }
double Example1::laplace_phi(double x, double y, double t) { return -2.0 * phi(x, y, t); }

double Example1::drift_divergence(double x, double y, double t) {
  // grad u . grad phi + u lap phi, with grad u = -q, grad phi = -p
  return q(x, y, t).dot(p(x, y, t)) + u(x, y, t) * laplace_phi(x, y, t);
}

Sources example1_sources(double eps) {
  Sources s;
  s.f1 = [](double x, double y, double t) {
    return Example1::u_t(x, y, t) - Example1::laplace_u(x, y, t) + Example1::drift_divergence(x, y, t);
  };
  s.f2 = [eps](double x, double y, double t) { return -eps * Example1::laplace_phi(x, y, t) + Example1::u(x, y, t); };
  return s;
}

Problem example1_problem(double eps) {
  const Sources s = example1_sources(eps);
  Problem pr;
  pr.f1 = s.f1;
  pr.f2 = s.f2;
  pr.u0 = [](double x, double y) { return Example1::u(x, y, 0.0); };
  pr.bc.g_u = &Example1::u;
  pr.bc.g_phi = &Example1::phi;
  return pr;
}

double example2_f2(double x, double y) { return (x > 0.0 && x < 0.5 && y > 0.5 && y < 1.0) ? -0.8 : 0.8; }

Problem example2_problem() {
  Problem pr;
  pr.f1 = {};
  pr.f2 = [](double x, double y, double) { return example2_f2(x, y); };
  pr.u0 = [](double x, double y) { return 0.5 * (1.0 + example2_f2(x, y)); };
  pr.bc.g_u = [](double, double y, double) { return y < 0.5 ? 0.9 : 0.1; };
  pr.bc.g_phi = [](double, double y, double) { return y < 0.5 ? 1.1 : -1.1; };
  return pr;
}

BoundaryTag example2_boundary(const Point& midpoint, const Point&, const Point&) {
  constexpr double tol = 1e-12;
  if (std::abs(midpoint.y) < tol) {
    return BoundaryTag::dirichlet;
  }
  if (std::abs(midpoint.y - 1.0) < tol && midpoint.x <= 0.25 + tol) {
    return BoundaryTag::dirichlet;
  }
  return BoundaryTag::neumann;
}

Problem zero_problem() {
  Problem pr;
  pr.u0 = [](double, double) { return 0.0; };
  pr.bc.g_u = [](double, double, double) { return 0.0; };
  pr.bc.g_phi = [](double, double, double) { return 0.0; };
  return pr;
}

namespace {

template <class Diff>
double integrate_error(const CoefficientField& field, const Mesh& mesh, Diff&& diff) {
  const int ex = std::min(2 * field.degree() + 8, max_quadrature_exactness);
  const auto& rule = triangle_quadrature(ex);
  const auto& table = volume_table(field.degree(), ex);
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& g = mesh.geometry(e);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& pt = rule.points[static_cast<std::size_t>(q)];
      const Eigen::Vector2d x = g.map(pt[0], pt[1]);
      sum += g.det * rule.weights[static_cast<std::size_t>(q)] * diff(e, table.values.row(q), x);
    }
  }
  return std::sqrt(sum);
}

} // namespace

double l2_error(const CoefficientField& field, const SpaceTimeFunction& exact, double t, const Mesh& mesh) {
  return integrate_error(field, mesh, [&](int e, const auto& row, const Eigen::Vector2d& x) {
    const double d = row.dot(field.component(e, 0)) - exact(x.x(), x.y(), t);
    return d * d;
  });
}

double l2_error(const CoefficientField& field, const std::function<Eigen::Vector2d(double, double, double)>& exact,
                double t, const Mesh& mesh) {
  return integrate_error(field, mesh, [&](int e, const auto& row, const Eigen::Vector2d& x) {
    const Eigen::Vector2d ex = exact(x.x(), x.y(), t);
    const double dx = row.dot(field.component(e, 0)) - ex.x();
    const double dy = row.dot(field.component(e, 1)) - ex.y();
    return dx * dx + dy * dy;
  });
}

double face_error(const TraceField& trace, const SpaceTimeFunction& exact, double t, const Mesh& mesh) {
  const auto& rule = segment_quadrature(std::min(2 * trace.degree() + 8, max_quadrature_exactness));
  const SegmentBasis basis(trace.degree());
  double sum = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const Point& a = mesh.vertices()[static_cast<std::size_t>(face.vertices[0])];
    const Point& b = mesh.vertices()[static_cast<std::size_t>(face.vertices[1])];
    const double len = mesh.face_length(f);
    double local = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      const double s = rule.points[static_cast<std::size_t>(q)];
      const double d =
          basis.values(s).dot(trace.face(f)) - exact(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y), t);
      local += rule.weights[static_cast<std::size_t>(q)] * d * d;
    }
    sum += len * len * local;
  }
  return std::sqrt(sum);
}

} // namespace hdgdd
