#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <hdgdd/error.hpp>
#include <hdgdd/manufactured.hpp>
#include <hdgdd/mesh.hpp>

#include "oracle.hpp"

using namespace hdgdd;

namespace {

int count_tag(const Mesh& m, BoundaryTag tag) {
  int c = 0;
  for (const Face& f : m.faces()) {
    c += (f.is_boundary() && f.tag == tag) ? 1 : 0;
  }
  return c;
}

int count_boundary(const Mesh& m) {
  int c = 0;
  for (const Face& f : m.faces()) {
    c += f.is_boundary() ? 1 : 0;
  }
  return c;
}

} // namespace

TEST(StructuredMesh, SingleCell) {
  const Mesh m = build_structured_unit_square(1);
  EXPECT_EQ(m.num_elements(), 2);
  EXPECT_EQ(m.num_faces(), 5);
  EXPECT_EQ(count_boundary(m), 4);
  EXPECT_EQ(count_tag(m, BoundaryTag::dirichlet), 4);
}

TEST(StructuredMesh, TwoByTwo) {
  const Mesh m = build_structured_unit_square(2);
  EXPECT_EQ(m.num_elements(), 8);
  EXPECT_EQ(m.num_faces(), 16);
  EXPECT_EQ(count_boundary(m), 8);
}

TEST(StructuredMesh, DeviceResolution) {
  const Mesh m = build_structured_unit_square(100);
  EXPECT_EQ(m.num_elements(), 20000);
  EXPECT_NEAR(m.h_max(), std::sqrt(2.0) / 100, 1e-15);
}

TEST(StructuredMesh, SizesAndDiagonal) {
  for (int n : {1, 3, 8}) {
    const Mesh m = build_structured_unit_square(n);
    EXPECT_NEAR(m.h_max(), std::sqrt(2.0) / n, 1e-14);
    EXPECT_DOUBLE_EQ(m.quasi_uniformity(), 1.0);
    EXPECT_NEAR(m.total_area(), 1.0, 1e-12);
  }
  // Every cell is split along the lower-left to upper-right diagonal, so the
  // hypotenuse of every element has slope +1.
  const Mesh m = build_structured_unit_square(3);
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto& g = m.geometry(e);
    int longest = 0;
    for (int f = 1; f < 3; ++f) {
      if (g.face_lengths[static_cast<std::size_t>(f)] > g.face_lengths[static_cast<std::size_t>(longest)]) {
        longest = f;
      }
    }
    const auto pts = oracle::face_points(m, e, longest);
    EXPECT_NEAR((pts[1].y - pts[0].y) / (pts[1].x - pts[0].x), 1.0, 1e-14);
  }
}

TEST(StructuredMesh, Topology) {
  const Mesh m = build_structured_unit_square(5);
  std::vector<int> seen(static_cast<std::size_t>(m.num_faces()), 0);
  for (int e = 0; e < m.num_elements(); ++e) {
    for (int f : m.element_faces(e)) {
      ++seen[static_cast<std::size_t>(f)];
    }
  }
  for (int f = 0; f < m.num_faces(); ++f) {
    const Face& face = m.face(f);
    EXPECT_EQ(seen[static_cast<std::size_t>(f)], face.neighbor_count);
    if (face.is_boundary()) {
      EXPECT_NE(face.tag, BoundaryTag::interior);
    } else {
      EXPECT_EQ(face.tag, BoundaryTag::interior);
      const auto& a = face.neighbors[0];
      const auto& b = face.neighbors[1];
      const Eigen::Vector2d na = m.geometry(a.element).normals[static_cast<std::size_t>(a.local_face)];
      const Eigen::Vector2d nb = m.geometry(b.element).normals[static_cast<std::size_t>(b.local_face)];
      EXPECT_NEAR(na.dot(nb), -1.0, 1e-12);
      // The two sides traverse the face in opposite directions.
      EXPECT_NE(m.face_reversed(a.element, a.local_face), m.face_reversed(b.element, b.local_face));
    }
  }
}

TEST(Refinement, CountsSizesArea) {
  const Mesh m = build_structured_unit_square(1);
  const Mesh r = refine_uniform(m);
  EXPECT_EQ(r.num_elements(), 8);
  EXPECT_NEAR(m.h_max(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.h_max(), std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(r.total_area(), m.total_area(), 1e-14);
}

TEST(Refinement, MatchesStructuredLadder) {
  Mesh m = build_structured_unit_square(2);
  for (int level = 0; level < 3; ++level) {
    m = refine_uniform(m);
  }
  const Mesh s = build_structured_unit_square(16);
  EXPECT_EQ(m.num_elements(), s.num_elements());
  EXPECT_EQ(m.num_faces(), s.num_faces());
  EXPECT_NEAR(m.h_max(), s.h_max(), 1e-15);
  EXPECT_DOUBLE_EQ(m.quasi_uniformity(), 1.0);
}

TEST(Refinement, InheritsTags) {
  const Mesh m = tag_boundary(build_structured_unit_square(2), example2_boundary);
  const Mesh r = refine_uniform(m);
  int checked = 0;
  for (int f = 0; f < r.num_faces(); ++f) {
    if (!r.face(f).is_boundary()) {
      continue;
    }
    const Point mid = r.face_midpoint(f);
    int parent = -1;
    for (int g = 0; g < m.num_faces(); ++g) {
      const Face& pf = m.face(g);
      if (!pf.is_boundary()) {
        continue;
      }
      const Point& a = m.vertices()[static_cast<std::size_t>(pf.vertices[0])];
      const Point& b = m.vertices()[static_cast<std::size_t>(pf.vertices[1])];
      const double cross = (b.x - a.x) * (mid.y - a.y) - (b.y - a.y) * (mid.x - a.x);
      const double t = ((mid.x - a.x) * (b.x - a.x) + (mid.y - a.y) * (b.y - a.y)) / m.face_length(g) / m.face_length(g);
      if (std::abs(cross) < 1e-14 && t > 0 && t < 1) {
        parent = g;
      }
    }
    ASSERT_GE(parent, 0);
    EXPECT_EQ(r.face(f).tag, m.face(parent).tag) << "face " << f;
    ++checked;
  }
  EXPECT_EQ(checked, 16);
  // (0.25,1)-(0.5,1) lies under a Dirichlet parent although its own midpoint
  // would be classified Neumann.
  int top_dirichlet = 0;
  for (const Face& f : r.faces()) {
    const Point& a = r.vertices()[static_cast<std::size_t>(f.vertices[0])];
    const Point& b = r.vertices()[static_cast<std::size_t>(f.vertices[1])];
    if (f.is_boundary() && a.y == 1.0 && b.y == 1.0 && f.tag == BoundaryTag::dirichlet) {
      ++top_dirichlet;
    }
  }
  EXPECT_EQ(top_dirichlet, 2);
}

TEST(Geometry, ReferenceElement) {
  const Mesh m({{0, 0}, {1, 0}, {0, 1}}, {Element{{0, 1, 2}}});
  const auto& g = m.geometry(0);
  EXPECT_DOUBLE_EQ(g.det, 1.0);
  EXPECT_NEAR(g.normals[0].x(), 0.0, 1e-15);
  EXPECT_NEAR(g.normals[0].y(), -1.0, 1e-15);
  EXPECT_NEAR(g.normals[1].x(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.normals[1].y(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(g.normals[2].x(), -1.0, 1e-15);
  EXPECT_NEAR(g.normals[2].y(), 0.0, 1e-15);
  EXPECT_NEAR(g.diameter, std::sqrt(2.0), 1e-15);
}

TEST(Geometry, ScaledElement) {
  const Mesh m({{0, 0}, {0.5, 0}, {0, 0.5}}, {Element{{0, 1, 2}}});
  EXPECT_DOUBLE_EQ(compute_geometry(m, 0).det, 0.25);
}

TEST(Geometry, ClosedPolygonAndMap) {
  const Mesh m = oracle::perturbed_unit_square(4, 0.2, 11);
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto& g = m.geometry(e);
    Eigen::Vector2d s = Eigen::Vector2d::Zero();
    for (int f = 0; f < 3; ++f) {
      s += g.face_lengths[static_cast<std::size_t>(f)] * g.normals[static_cast<std::size_t>(f)];
      EXPECT_NEAR(g.normals[static_cast<std::size_t>(f)].norm(), 1.0, 1e-14);
      // outward: normal points away from the opposite vertex
      const auto pts = oracle::face_points(m, e, f);
      const Point opp = oracle::vertex(m, e, (f + 2) % 3);
      const Eigen::Vector2d d(opp.x - pts[0].x, opp.y - pts[0].y);
      EXPECT_LT(d.dot(g.normals[static_cast<std::size_t>(f)]), 0.0);
    }
    EXPECT_LT(s.norm(), 1e-14);
    for (int i = 0; i < 3; ++i) {
      const double xi = i == 1 ? 1.0 : 0.0;
      const double eta = i == 2 ? 1.0 : 0.0;
      const Eigen::Vector2d x = g.map(xi, eta);
      const Point v = oracle::vertex(m, e, i);
      EXPECT_NEAR(x.x(), v.x, 1e-15);
      EXPECT_NEAR(x.y(), v.y, 1e-15);
    }
  }
  EXPECT_NEAR(m.total_area(), 1.0, 1e-12);
}

TEST(Geometry, Errors) {
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {2, 0}}, {Element{{0, 1, 2}}}), MeshError);
  EXPECT_THROW(Mesh({{0, 0}, {0, 1}, {1, 0}}, {Element{{0, 1, 2}}}), MeshError);  // clockwise
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}}, {Element{{0, 1, 1}}}), MeshError);
  EXPECT_THROW((void)compute_geometry(build_structured_unit_square(1), 7), MeshError);
}

TEST(Tagging, AllDirichletUnchanged) {
  const Mesh m = build_structured_unit_square(3);
  const Mesh t = tag_boundary(m, [](const Point&, const Point&, const Point&) { return BoundaryTag::dirichlet; });
  for (int f = 0; f < m.num_faces(); ++f) {
    EXPECT_EQ(m.face(f).tag, t.face(f).tag);
  }
}

TEST(Tagging, BottomOnly) {
  const Mesh t = tag_boundary(build_structured_unit_square(1), [](const Point& mid, const Point&, const Point&) {
    return std::abs(mid.y) < 1e-12 ? BoundaryTag::dirichlet : BoundaryTag::neumann;
  });
  EXPECT_EQ(count_tag(t, BoundaryTag::dirichlet), 1);
  EXPECT_EQ(count_tag(t, BoundaryTag::neumann), 3);
  for (const Face& f : t.faces()) {
    if (!f.is_boundary()) {
      EXPECT_EQ(f.tag, BoundaryTag::interior);
    }
  }
}

TEST(Tagging, DevicePredicate) {
  const Mesh t = tag_boundary(build_structured_unit_square(100), example2_boundary);
  EXPECT_EQ(count_tag(t, BoundaryTag::dirichlet), 125);
  EXPECT_EQ(count_tag(t, BoundaryTag::neumann), 400 - 125);
}

TEST(Tagging, InteriorAnswerRejected) {
  EXPECT_THROW((void)tag_boundary(build_structured_unit_square(1),
                                  [](const Point&, const Point&, const Point&) { return BoundaryTag::interior; }),
               MeshError);
}

TEST(MeshIo, RoundTripAndReorientation) {
  std::stringstream in("4 2\n0 0\n1 0\n1 1\n0 1\n0 2 1\n0 2 3\n");  // first triangle clockwise
  const Mesh m = read_mesh(in);
  EXPECT_EQ(m.num_elements(), 2);
  EXPECT_NEAR(m.total_area(), 1.0, 1e-15);
  std::stringstream out;
  write_mesh(m, out);
  const Mesh again = read_mesh(out);
  EXPECT_EQ(again.num_faces(), m.num_faces());
  for (int e = 0; e < m.num_elements(); ++e) {
    EXPECT_EQ(again.elements()[static_cast<std::size_t>(e)].vertices, m.elements()[static_cast<std::size_t>(e)].vertices);
  }
  std::stringstream bad("3 1\n0 0\n1 0\n0 1\n0 1 5\n");
  EXPECT_THROW((void)read_mesh(bad), MeshError);
  std::stringstream truncated("3 1\n0 0\n1 0\n");
  EXPECT_THROW((void)read_mesh(truncated), MeshError);
}

TEST(MeshIo, LocatePoint) {
  const Mesh m = build_structured_unit_square(4);
  double xi = 0;
  double eta = 0;
  const int e = locate_point(m, {0.3, 0.6}, xi, eta);
  ASSERT_GE(e, 0);
  const Eigen::Vector2d x = m.geometry(e).map(xi, eta);
  EXPECT_NEAR(x.x(), 0.3, 1e-14);
  EXPECT_NEAR(x.y(), 0.6, 1e-14);
  EXPECT_EQ(locate_point(m, {1.5, 0.5}, xi, eta), -1);
}
