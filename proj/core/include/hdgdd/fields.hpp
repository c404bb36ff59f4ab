#pragma once

#include <Eigen/Dense>

#include "hdgdd/basis.hpp"
#include "hdgdd/mesh.hpp"

namespace hdgdd {

/// Element-wise polynomial field: per element `components` consecutive
/// blocks of dim(P^degree) coefficients in the orthonormal triangle basis.
class CoefficientField {
public:
  CoefficientField() = default;
  CoefficientField(int degree, int components, int num_elements);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int components() const { return components_; }
  [[nodiscard]] int num_elements() const { return num_elements_; }
  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int element_size() const { return components_ * dim_; }

  [[nodiscard]] Eigen::VectorXd& data() { return data_; }
  [[nodiscard]] const Eigen::VectorXd& data() const { return data_; }

  [[nodiscard]] auto element(int e) { return data_.segment(e * element_size(), element_size()); }
  [[nodiscard]] auto element(int e) const { return data_.segment(e * element_size(), element_size()); }
  [[nodiscard]] auto component(int e, int c) { return data_.segment(e * element_size() + c * dim_, dim_); }
  [[nodiscard]] auto component(int e, int c) const {
    return data_.segment(e * element_size() + c * dim_, dim_);
  }

  /// Value of component c at reference coordinates of element e.
  [[nodiscard]] double value(int e, double xi, double eta, int c = 0) const;
  /// Cell mean of component c (coefficient 0 of the orthonormal basis).
  [[nodiscard]] double mean(int e, int c = 0) const { return data_[e * element_size() + c * dim_]; }

  /// Shape-compatibility check used by arithmetic on fields.
  [[nodiscard]] bool same_layout(const CoefficientField& other) const {
    return degree_ == other.degree_ && components_ == other.components_ && num_elements_ == other.num_elements_;
  }

private:
  int degree_ = 0;
  int components_ = 1;
  int num_elements_ = 0;
  int dim_ = 1;
  Eigen::VectorXd data_;
};

/// Face-wise polynomial field of degree k, one record per face in the
/// orthonormal Legendre basis of the global face parameter.
class TraceField {
public:
  TraceField() = default;
  TraceField(int degree, int num_faces);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int num_faces() const { return num_faces_; }
  [[nodiscard]] int face_size() const { return degree_ + 1; }
  [[nodiscard]] Eigen::VectorXd& data() { return data_; }
  [[nodiscard]] const Eigen::VectorXd& data() const { return data_; }
  [[nodiscard]] auto face(int f) { return data_.segment(f * face_size(), face_size()); }
  [[nodiscard]] auto face(int f) const { return data_.segment(f * face_size(), face_size()); }

  /// Value at global face parameter s in [0,1].
  [[nodiscard]] double value(int f, double s) const;

private:
  int degree_ = 0;
  int num_faces_ = 0;
  Eigen::VectorXd data_;
};

/// Evaluates a field at a physical point (brute-force location). Throws
/// MeshError if the point is outside the mesh.
[[nodiscard]] double evaluate_at(const CoefficientField& field, const Mesh& mesh, const Point& p, int c = 0);

} // namespace hdgdd
