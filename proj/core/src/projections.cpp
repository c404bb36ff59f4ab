#include "hdgdd/projections.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "hdgdd/error.hpp"
#include "hdgdd/quadrature.hpp"

namespace hdgdd {

namespace {

// Projected data is generally not polynomial; the extra margin keeps the
// quadrature error of the moments near round-off on coarse meshes.
int projection_exactness(int degree) { return std::min(2 * degree + 12, max_quadrature_exactness); }

} // namespace

FaceStabilization uniform_stabilization(const Mesh& mesh, double tau) {
  return FaceStabilization(static_cast<std::size_t>(mesh.num_elements()), {tau, tau, tau});
}

CoefficientField l2_project_element(const ScalarFunction& f, int degree, const Mesh& mesh) {
  const int exactness = projection_exactness(degree);
  const auto& rule = triangle_quadrature(exactness);
  const auto& table = volume_table(degree, exactness);
  CoefficientField out(degree, 1, mesh.num_elements());
  Eigen::VectorXd fw(rule.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& g = mesh.geometry(e);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& p = rule.points[static_cast<std::size_t>(q)];
      const Eigen::Vector2d x = g.map(p[0], p[1]);
      fw[q] = 2.0 * rule.weights[static_cast<std::size_t>(q)] * f(x.x(), x.y());
    }
    // Mass matrix is |K| I, so the coefficient is the scaled moment.
    out.component(e, 0) = table.values.transpose() * fw;
  }
  return out;
}

CoefficientField l2_project_element(const VectorFunction& f, int degree, const Mesh& mesh) {
  const int exactness = projection_exactness(degree);
  const auto& rule = triangle_quadrature(exactness);
  const auto& table = volume_table(degree, exactness);
  CoefficientField out(degree, 2, mesh.num_elements());
  Eigen::MatrixX2d fw(rule.size(), 2);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& g = mesh.geometry(e);
    for (int q = 0; q < rule.size(); ++q) {
      const auto& p = rule.points[static_cast<std::size_t>(q)];
      const Eigen::Vector2d x = g.map(p[0], p[1]);
      fw.row(q) = 2.0 * rule.weights[static_cast<std::size_t>(q)] * f(x.x(), x.y()).transpose();
    }
    out.component(e, 0) = table.values.transpose() * fw.col(0);
    out.component(e, 1) = table.values.transpose() * fw.col(1);
  }
  return out;
}

TraceField l2_project_face(const ScalarFunction& g, int degree, const Mesh& mesh) {
  const auto& rule = segment_quadrature(projection_exactness(degree));
  const SegmentBasis basis(degree);
  TraceField out(degree, mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    const Point& a = mesh.vertices()[static_cast<std::size_t>(face.vertices[0])];
    const Point& b = mesh.vertices()[static_cast<std::size_t>(face.vertices[1])];
    Eigen::VectorXd c = Eigen::VectorXd::Zero(basis.dim());
    for (int q = 0; q < rule.size(); ++q) {
      const double s = rule.points[static_cast<std::size_t>(q)];
      const double x = a.x + s * (b.x - a.x);
      const double y = a.y + s * (b.y - a.y);
      c += rule.weights[static_cast<std::size_t>(q)] * g(x, y) * basis.values(s);
    }
    out.face(f) = c;
  }
  return out;
}

double FaceRestriction::operator()(double s) const {
  const auto p = reference_face_point(local_face_, reversed_ ? 1.0 - s : s);
  return triangle_basis(degree_).values(p[0], p[1]).dot(coefficients_);
}

FaceRestriction restrict_to_face(const CoefficientField& field, const Mesh& mesh, int element, int face_id,
                                 int component) {
  if (element < 0 || element >= mesh.num_elements()) {
    throw MeshError(fmt::format("element {} out of range", element));
  }
  const auto& faces = mesh.element_faces(element);
  const auto it = std::find(faces.begin(), faces.end(), face_id);
  if (it == faces.end()) {
    throw MeshError(fmt::format("face {} is not adjacent to element {}", face_id, element));
  }
  const int local = static_cast<int>(it - faces.begin());
  return FaceRestriction(field.component(element, component), field.degree(), local,
                         mesh.face_reversed(element, local));
}

HdgProjection hdg_project(const VectorFunction& p, const ScalarFunction& phi, int degree,
                          const FaceStabilization& tau, const Mesh& mesh) {
  if (degree < 0) {
    throw InputError("projection degree must be non-negative");
  }
  if (tau.size() != static_cast<std::size_t>(mesh.num_elements())) {
    throw InputError("stabilization must provide three values per element");
  }
  const int dm = triangle_dim(degree);
  const int dlow = degree > 0 ? triangle_dim(degree - 1) : 0;
  const int n = 3 * dm;
  const int exactness = projection_exactness(degree);
  const auto& vrule = triangle_quadrature(exactness);
  const auto& vtab = volume_table(degree, exactness);
  const auto& frule = segment_quadrature(exactness);
  const auto& ftab = face_table(degree, degree, exactness);

  HdgProjection out{CoefficientField(degree, 2, mesh.num_elements()),
                    CoefficientField(degree, 1, mesh.num_elements())};

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& g = mesh.geometry(e);
    const auto& t = tau[static_cast<std::size_t>(e)];
    if (*std::min_element(t.begin(), t.end()) < 0.0 || *std::max_element(t.begin(), t.end()) <= 0.0) {
      throw SolverError(fmt::format("HDG projection on element {}: stabilization must be non-negative "
                                    "with a positive maximum",
                                    e));
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);

    // Interior moments. With the orthonormal basis the unknown-side mass is
    // |K| I restricted to the first dlow functions (hierarchical basis).
    for (int i = 0; i < dlow; ++i) {
      a(i, i) = g.area();
      a(dlow + i, dm + i) = g.area();
      a(2 * dlow + i, 2 * dm + i) = g.area();
    }
    for (int q = 0; q < vrule.size(); ++q) {
      const auto& pt = vrule.points[static_cast<std::size_t>(q)];
      const Eigen::Vector2d x = g.map(pt[0], pt[1]);
      const double w = vrule.weights[static_cast<std::size_t>(q)] * g.det;
      const Eigen::Vector2d pv = p(x.x(), x.y());
      const double fv = phi(x.x(), x.y());
      for (int i = 0; i < dlow; ++i) {
        const double v = vtab.values(q, i) * w;
        b[i] += pv.x() * v;
        b[dlow + i] += pv.y() * v;
        b[2 * dlow + i] += fv * v;
      }
    }

    // Face moments against P^degree(e).
    int row = 3 * dlow;
    for (int f = 0; f < 3; ++f) {
      const auto uf = static_cast<std::size_t>(f);
      const Eigen::Vector2d nrm = g.normals[uf];
      const double len = g.face_lengths[uf];
      const auto& vv = ftab.volume_values[uf];
      for (int q = 0; q < frule.size(); ++q) {
        const double s = frule.points[static_cast<std::size_t>(q)];
        const double w = frule.weights[static_cast<std::size_t>(q)] * len;
        const auto rp = reference_face_point(f, s);
        const Eigen::Vector2d x = g.map(rp[0], rp[1]);
        const double data = p(x.x(), x.y()).dot(nrm) + t[uf] * phi(x.x(), x.y());
        for (int a_idx = 0; a_idx <= degree; ++a_idx) {
          const double mu = ftab.trace_values(q, a_idx) * w;
          for (int j = 0; j < dm; ++j) {
            a(row + a_idx, j) += nrm.x() * vv(q, j) * mu;
            a(row + a_idx, dm + j) += nrm.y() * vv(q, j) * mu;
            a(row + a_idx, 2 * dm + j) += t[uf] * vv(q, j) * mu;
          }
          b[row + a_idx] += data * mu;
        }
      }
      row += degree + 1;
    }

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
      throw SolverError(fmt::format("HDG projection system singular on element {}", e));
    }
    const Eigen::VectorXd x = lu.solve(b);
    out.flux.component(e, 0) = x.segment(0, dm);
    out.flux.component(e, 1) = x.segment(dm, dm);
    out.scalar.component(e, 0) = x.segment(2 * dm, dm);
  }
  return out;
}

HdgProjection hdg_project(const VectorFunction& p, const ScalarFunction& phi, int degree, double tau,
                          const Mesh& mesh) {
  return hdg_project(p, phi, degree, uniform_stabilization(mesh, tau), mesh);
}

} // namespace hdgdd
