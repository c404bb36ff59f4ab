#include "hdgdd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "hdgdd/error.hpp"

namespace hdgdd {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

ElementGeometry geometry_from_vertices(const Point& a, const Point& b, const Point& c, int element) {
  ElementGeometry g;
  g.origin = Eigen::Vector2d(a.x, a.y);
  g.jacobian << b.x - a.x, c.x - a.x,
                b.y - a.y, c.y - a.y;
  const double det = g.jacobian.determinant();
  const double scale = std::max({std::abs(b.x - a.x), std::abs(b.y - a.y),
                                 std::abs(c.x - a.x), std::abs(c.y - a.y)});
  if (!(std::abs(det) > 1e-14 * scale * scale) || !std::isfinite(det)) {
    throw MeshError(fmt::format("element {} is degenerate (det J = {:.3e})", element, det));
  }
  g.det = std::abs(det);
  g.inverse_jacobian = g.jacobian.inverse();

  const std::array<Point, 3> v{a, b, c};
  g.diameter = 0.0;
  for (int f = 0; f < 3; ++f) {
    const Point& p = v[static_cast<std::size_t>(f)];
    const Point& q = v[static_cast<std::size_t>((f + 1) % 3)];
    const Eigen::Vector2d t(q.x - p.x, q.y - p.y);
    const double len = t.norm();
    g.face_lengths[static_cast<std::size_t>(f)] = len;
    // Outward for counterclockwise ordering; flipped for clockwise input.
    Eigen::Vector2d n(t.y(), -t.x());
    if (det < 0) {
      n = -n;
    }
    g.normals[static_cast<std::size_t>(f)] = n / len;
    g.diameter = std::max(g.diameter, len);
  }
  return g;
}

} // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<Element> elements)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw MeshError("mesh has no elements");
  }
  for (const Point& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw MeshError("mesh vertex with non-finite coordinate");
    }
  }

  const int nv = num_vertices();
  geometry_.reserve(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    const auto& vid = elements_[e].vertices;
    for (int i = 0; i < 3; ++i) {
      if (vid[static_cast<std::size_t>(i)] < 0 || vid[static_cast<std::size_t>(i)] >= nv) {
        throw MeshError(fmt::format("element {} references vertex out of range", e));
      }
    }
    if (vid[0] == vid[1] || vid[1] == vid[2] || vid[0] == vid[2]) {
      throw MeshError(fmt::format("element {} has repeated vertices", e));
    }
    const Point& a = vertices_[static_cast<std::size_t>(vid[0])];
    const Point& b = vertices_[static_cast<std::size_t>(vid[1])];
    const Point& c = vertices_[static_cast<std::size_t>(vid[2])];
    geometry_.push_back(geometry_from_vertices(a, b, c, static_cast<int>(e)));
    if (signed_area(a, b, c) <= 0.0) {
      throw MeshError(fmt::format("element {} is not counterclockwise", e));
    }
  }

  std::map<std::pair<int, int>, int> edge_to_face;
  element_faces_.resize(elements_.size());
  reversed_.resize(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    for (int f = 0; f < 3; ++f) {
      const int a = elements_[e].vertices[static_cast<std::size_t>(f)];
      const int b = elements_[e].vertices[static_cast<std::size_t>((f + 1) % 3)];
      const auto key = std::minmax(a, b);
      auto it = edge_to_face.find(key);
      if (it == edge_to_face.end()) {
        Face face;
        face.vertices = {a, b};
        face.neighbors[0] = {static_cast<int>(e), f};
        face.neighbor_count = 1;
        const int id = static_cast<int>(faces_.size());
        faces_.push_back(face);
        edge_to_face.emplace(key, id);
        element_faces_[e][static_cast<std::size_t>(f)] = id;
        reversed_[e][static_cast<std::size_t>(f)] = false;
      } else {
        Face& face = faces_[static_cast<std::size_t>(it->second)];
        if (face.neighbor_count == 2) {
          throw MeshError(fmt::format("edge ({}, {}) shared by more than two elements", a, b));
        }
        face.neighbors[1] = {static_cast<int>(e), f};
        face.neighbor_count = 2;
        element_faces_[e][static_cast<std::size_t>(f)] = it->second;
        reversed_[e][static_cast<std::size_t>(f)] = (face.vertices[0] != a);
      }
    }
  }
  for (Face& face : faces_) {
    face.tag = face.is_boundary() ? BoundaryTag::dirichlet : BoundaryTag::interior;
  }

  h_max_ = 0.0;
  h_min_ = std::numeric_limits<double>::infinity();
  for (const auto& g : geometry_) {
    h_max_ = std::max(h_max_, g.diameter);
    h_min_ = std::min(h_min_, g.diameter);
  }
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (const auto& g : geometry_) {
    sum += g.area();
  }
  return sum;
}

Point Mesh::face_midpoint(int face_id) const {
  const Face& f = face(face_id);
  const Point& a = vertices_[static_cast<std::size_t>(f.vertices[0])];
  const Point& b = vertices_[static_cast<std::size_t>(f.vertices[1])];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

double Mesh::face_length(int face_id) const {
  const Face& f = face(face_id);
  const Point& a = vertices_[static_cast<std::size_t>(f.vertices[0])];
  const Point& b = vertices_[static_cast<std::size_t>(f.vertices[1])];
  return std::hypot(b.x - a.x, b.y - a.y);
}

void Mesh::set_boundary_tags(std::span<const BoundaryTag> tags_by_face) {
  if (tags_by_face.size() != faces_.size()) {
    throw MeshError("boundary tag list does not match face count");
  }
  for (std::size_t i = 0; i < faces_.size(); ++i) {
    if (!faces_[i].is_boundary()) {
      continue;
    }
    if (tags_by_face[i] == BoundaryTag::interior) {
      throw MeshError(fmt::format("boundary face {} tagged interior", i));
    }
    faces_[i].tag = tags_by_face[i];
  }
}

Mesh build_structured_rectangle(int nx, int ny, double x0, double y0, double x1, double y1) {
  if (nx < 1 || ny < 1) {
    throw MeshError("structured mesh needs at least one cell per direction");
  }
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Exact endpoints so boundary predicates can compare coordinates.
      const double x = (i == nx) ? x1 : x0 + (x1 - x0) * i / nx;
      const double y = (j == ny) ? y1 : y0 + (y1 - y0) * j / ny;
      vertices.push_back({x, y});
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<Element> elements;
  elements.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j);
      const int v10 = id(i + 1, j);
      const int v01 = id(i, j + 1);
      const int v11 = id(i + 1, j + 1);
      elements.push_back({{v00, v10, v11}});
      elements.push_back({{v00, v11, v01}});
    }
  }
  return Mesh(std::move(vertices), std::move(elements));
}

Mesh build_structured_unit_square(int n) {
  return build_structured_rectangle(n, n, 0.0, 0.0, 1.0, 1.0);
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point> vertices(mesh.vertices().begin(), mesh.vertices().end());
  std::vector<int> midpoint_of_face(static_cast<std::size_t>(mesh.num_faces()));
  for (int f = 0; f < mesh.num_faces(); ++f) {
    midpoint_of_face[static_cast<std::size_t>(f)] = static_cast<int>(vertices.size());
    vertices.push_back(mesh.face_midpoint(f));
  }

  std::vector<Element> elements;
  elements.reserve(static_cast<std::size_t>(4 * mesh.num_elements()));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& v = mesh.elements()[static_cast<std::size_t>(e)].vertices;
    const auto& fid = mesh.element_faces(e);
    const int m0 = midpoint_of_face[static_cast<std::size_t>(fid[0])];  // between v0, v1
    const int m1 = midpoint_of_face[static_cast<std::size_t>(fid[1])];  // between v1, v2
    const int m2 = midpoint_of_face[static_cast<std::size_t>(fid[2])];  // between v2, v0
    elements.push_back({{v[0], m0, m2}});
    elements.push_back({{m0, v[1], m1}});
    elements.push_back({{m2, m1, v[2]}});
    elements.push_back({{m0, m1, m2}});
  }
  Mesh fine(std::move(vertices), std::move(elements));

  std::map<std::pair<int, int>, BoundaryTag> child_tags;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (!face.is_boundary()) {
      continue;
    }
    const int m = midpoint_of_face[static_cast<std::size_t>(f)];
    child_tags[std::minmax(face.vertices[0], m)] = face.tag;
    child_tags[std::minmax(face.vertices[1], m)] = face.tag;
  }
  std::vector<BoundaryTag> tags(static_cast<std::size_t>(fine.num_faces()), BoundaryTag::interior);
  for (int f = 0; f < fine.num_faces(); ++f) {
    const Face& face = fine.face(f);
    if (face.is_boundary()) {
      tags[static_cast<std::size_t>(f)] = child_tags.at(std::minmax(face.vertices[0], face.vertices[1]));
    }
  }
  fine.set_boundary_tags(tags);
  return fine;
}

ElementGeometry compute_geometry(const Mesh& mesh, int element) {
  if (element < 0 || element >= mesh.num_elements()) {
    throw MeshError(fmt::format("element id {} out of range", element));
  }
  const auto& v = mesh.elements()[static_cast<std::size_t>(element)].vertices;
  return geometry_from_vertices(mesh.vertices()[static_cast<std::size_t>(v[0])],
                                mesh.vertices()[static_cast<std::size_t>(v[1])],
                                mesh.vertices()[static_cast<std::size_t>(v[2])], element);
}

Mesh tag_boundary(const Mesh& mesh, const BoundaryPredicate& predicate) {
  Mesh out = mesh;
  std::vector<BoundaryTag> tags(static_cast<std::size_t>(mesh.num_faces()), BoundaryTag::interior);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (!face.is_boundary()) {
      continue;
    }
    const BoundaryTag tag = predicate(mesh.face_midpoint(f),
                                      mesh.vertices()[static_cast<std::size_t>(face.vertices[0])],
                                      mesh.vertices()[static_cast<std::size_t>(face.vertices[1])]);
    if (tag == BoundaryTag::interior) {
      throw MeshError(fmt::format("boundary predicate returned interior for boundary face {}", f));
    }
    tags[static_cast<std::size_t>(f)] = tag;
  }
  out.set_boundary_tags(tags);
  return out;
}

Mesh read_mesh(std::istream& in) {
  long nv = -1;
  long ne = -1;
  if (!(in >> nv >> ne) || nv < 3 || ne < 1) {
    throw MeshError("mesh file: bad header, expected \"nv ne\"");
  }
  std::vector<Point> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices) {
    if (!(in >> p.x >> p.y)) {
      throw MeshError("mesh file: truncated vertex list");
    }
  }
  std::vector<Element> elements(static_cast<std::size_t>(ne));
  for (auto& e : elements) {
    auto& v = e.vertices;
    if (!(in >> v[0] >> v[1] >> v[2])) {
      throw MeshError("mesh file: truncated element list");
    }
    for (int id : v) {
      if (id < 0 || id >= nv) {
        throw MeshError(fmt::format("mesh file: vertex index {} out of range", id));
      }
    }
    // Imported triangles may come in either orientation.
    if (signed_area(vertices[static_cast<std::size_t>(v[0])], vertices[static_cast<std::size_t>(v[1])],
                    vertices[static_cast<std::size_t>(v[2])]) < 0.0) {
      std::swap(v[1], v[2]);
    }
  }
  return Mesh(std::move(vertices), std::move(elements));
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  for (const Point& p : mesh.vertices()) {
    out << fmt::format("{:.17g} {:.17g}\n", p.x, p.y);
  }
  for (const Element& e : mesh.elements()) {
    out << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.vertices[2] << '\n';
  }
}

int locate_point(const Mesh& mesh, const Point& p, double& xi, double& eta) {
  constexpr double tol = 1e-12;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementGeometry& g = mesh.geometry(e);
    const Eigen::Vector2d ref = g.inverse_jacobian * (Eigen::Vector2d(p.x, p.y) - g.origin);
    if (ref.x() >= -tol && ref.y() >= -tol && ref.x() + ref.y() <= 1.0 + tol) {
      xi = ref.x();
      eta = ref.y();
      return e;
    }
  }
  return -1;
}

} // namespace hdgdd
