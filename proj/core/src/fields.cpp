#include "hdgdd/fields.hpp"

#include <fmt/format.h>

#include "hdgdd/error.hpp"

namespace hdgdd {

CoefficientField::CoefficientField(int degree, int components, int num_elements)
    : degree_(degree), components_(components), num_elements_(num_elements), dim_(triangle_dim(degree)) {
  if (degree < 0 || components < 1 || num_elements < 0) {
    throw InputError("invalid coefficient field layout");
  }
  data_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_elements) * components * dim_);
}

double CoefficientField::value(int e, double xi, double eta, int c) const {
  return triangle_basis(degree_).values(xi, eta).dot(component(e, c));
}

TraceField::TraceField(int degree, int num_faces) : degree_(degree), num_faces_(num_faces) {
  if (degree < 0 || num_faces < 0) {
    throw InputError("invalid trace field layout");
  }
  data_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_faces) * (degree + 1));
}

double TraceField::value(int f, double s) const {
  return SegmentBasis(degree_).values(s).dot(face(f));
}

double evaluate_at(const CoefficientField& field, const Mesh& mesh, const Point& p, int c) {
  double xi = 0.0;
  double eta = 0.0;
  const int e = locate_point(mesh, p, xi, eta);
  if (e < 0) {
    throw MeshError(fmt::format("point ({}, {}) outside mesh", p.x, p.y));
  }
  return field.value(e, xi, eta, c);
}

} // namespace hdgdd
