#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hdgdd {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class BoundaryTag : std::uint8_t { interior, dirichlet, neumann };

/// Triangle with counterclockwise vertex ordering. Local face f joins
/// vertices f and (f+1)%3.
struct Element {
  std::array<int, 3> vertices{};
};

struct FaceNeighbor {
  int element = -1;
  int local_face = -1;
};

/// Edge of the triangulation. The global orientation runs from vertices[0]
/// to vertices[1] and coincides with the local orientation of neighbors[0].
struct Face {
  std::array<int, 2> vertices{};
  std::array<FaceNeighbor, 2> neighbors{};
  int neighbor_count = 0;
  BoundaryTag tag = BoundaryTag::interior;

  [[nodiscard]] bool is_boundary() const { return neighbor_count == 1; }
};

/// Affine map x = origin + jacobian * xi from the reference triangle
/// {(0,0),(1,0),(0,1)} plus the per-face data HDG assembly needs.
struct ElementGeometry {
  Eigen::Vector2d origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse_jacobian;
  double det = 0.0;  ///< |det J| = 2 * area
  std::array<Eigen::Vector2d, 3> normals;  ///< outward unit normals
  std::array<double, 3> face_lengths{};
  double diameter = 0.0;  ///< h_K, longest edge

  [[nodiscard]] double area() const { return 0.5 * det; }
  [[nodiscard]] Eigen::Vector2d map(double xi, double eta) const {
    return origin + jacobian * Eigen::Vector2d(xi, eta);
  }
};

/// Immutable conforming triangulation with face topology and boundary tags.
class Mesh {
public:
  /// Builds faces and geometry. Clockwise elements are rejected; boundary
  /// faces are tagged dirichlet.
  Mesh(std::vector<Point> vertices, std::vector<Element> elements);

  [[nodiscard]] std::span<const Point> vertices() const { return vertices_; }
  [[nodiscard]] std::span<const Element> elements() const { return elements_; }
  [[nodiscard]] std::span<const Face> faces() const { return faces_; }
  [[nodiscard]] int num_vertices() const { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_elements() const { return static_cast<int>(elements_.size()); }
  [[nodiscard]] int num_faces() const { return static_cast<int>(faces_.size()); }

  [[nodiscard]] const Face& face(int id) const { return faces_[static_cast<std::size_t>(id)]; }
  [[nodiscard]] const std::array<int, 3>& element_faces(int element) const {
    return element_faces_[static_cast<std::size_t>(element)];
  }
  /// True when the element traverses local face f against the global orientation.
  [[nodiscard]] bool face_reversed(int element, int local_face) const {
    return reversed_[static_cast<std::size_t>(element)][static_cast<std::size_t>(local_face)];
  }
  [[nodiscard]] const ElementGeometry& geometry(int element) const {
    return geometry_[static_cast<std::size_t>(element)];
  }

  [[nodiscard]] double h_max() const { return h_max_; }
  [[nodiscard]] double h_min() const { return h_min_; }
  [[nodiscard]] double quasi_uniformity() const { return h_max_ / h_min_; }
  [[nodiscard]] double total_area() const;
  [[nodiscard]] Point face_midpoint(int face_id) const;
  [[nodiscard]] double face_length(int face_id) const;

  /// Overrides the tag of every boundary face. Used by tag_boundary and
  /// refine_uniform; interior faces are never touched.
  void set_boundary_tags(std::span<const BoundaryTag> tags_by_face);

private:
  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<Face> faces_;
  std::vector<std::array<int, 3>> element_faces_;
  std::vector<std::array<bool, 3>> reversed_;
  std::vector<ElementGeometry> geometry_;
  double h_max_ = 0.0;
  double h_min_ = 0.0;
};

/// n x n cells on [0,1]^2, each split along the lower-left to upper-right
/// diagonal. All boundary faces dirichlet.
[[nodiscard]] Mesh build_structured_unit_square(int n);
[[nodiscard]] Mesh build_structured_rectangle(int nx, int ny, double x0, double y0, double x1, double y1);

/// Splits every triangle into four through edge midpoints; child boundary
/// faces inherit the parent tag.
[[nodiscard]] Mesh refine_uniform(const Mesh& mesh);

/// Throws MeshError for a zero-area element.
[[nodiscard]] ElementGeometry compute_geometry(const Mesh& mesh, int element);

using BoundaryPredicate = std::function<BoundaryTag(const Point& midpoint, const Point& a, const Point& b)>;

/// Retags boundary faces. A predicate answer of `interior` is an error.
[[nodiscard]] Mesh tag_boundary(const Mesh& mesh, const BoundaryPredicate& predicate);

/// Plain-text import: "nv ne", nv lines "x y", ne lines "v0 v1 v2" (0-based).
[[nodiscard]] Mesh read_mesh(std::istream& in);
void write_mesh(const Mesh& mesh, std::ostream& out);

/// Locates the element containing a point (brute force); returns -1 if none.
/// Also writes reference coordinates of the point.
[[nodiscard]] int locate_point(const Mesh& mesh, const Point& p, double& xi, double& eta);

} // namespace hdgdd
