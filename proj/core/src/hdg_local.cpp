#include "hdgdd/hdg_local.hpp"

#include <fmt/format.h>

#include "hdgdd/basis.hpp"
#include "hdgdd/error.hpp"
#include "hdgdd/quadrature.hpp"

namespace hdgdd {

namespace {

struct PhysicalTable {
  Eigen::MatrixXd values;
  Eigen::MatrixXd dx;
  Eigen::MatrixXd dy;
};

PhysicalTable physical_table(const VolumeTable& ref, const Eigen::Matrix2d& inverse_jacobian) {
  // grad_x = J^{-T} grad_xi
  const double a = inverse_jacobian(0, 0);
  const double b = inverse_jacobian(1, 0);
  const double c = inverse_jacobian(0, 1);
  const double d = inverse_jacobian(1, 1);
  return {ref.values, a * ref.d_xi + b * ref.d_eta, c * ref.d_xi + d * ref.d_eta};
}

} // namespace

double NormalFlux::operator()(double s) const {
  if (coefficients.size() == 0) {
    return 0.0;
  }
  return SegmentBasis(static_cast<int>(coefficients.size()) - 1).values(s).dot(coefficients);
}

LocalSystem local_transport_blocks(const Mesh& mesh, int element, int k, const CoefficientField* drift,
                                   const ElementNormalFlux* p_hat_normal, double mass_scale) {
  const ElementGeometry& g = mesh.geometry(element);
  if (!(g.det > 0.0)) {
    throw MeshError(fmt::format("element {} is degenerate", element));
  }
  if (drift != nullptr && drift->degree() != k + 1) {
    throw InputError(fmt::format("drift field must have degree {}, got {}", k + 1, drift->degree()));
  }
  const int ex = transport_exactness(k);
  const auto& vrule = triangle_quadrature(ex);
  const auto& frule = segment_quadrature(ex);
  const PhysicalTable tq = physical_table(volume_table(k, ex), g.inverse_jacobian);
  const PhysicalTable tu = physical_table(volume_table(k + 1, ex), g.inverse_jacobian);
  const auto& fq = face_table(k, k, ex);
  const auto& fu = face_table(k + 1, k, ex);

  LocalSystem sys;
  sys.flux_dim = triangle_dim(k);
  sys.scalar_dim = triangle_dim(k + 1);
  sys.face_dofs = k + 1;
  const int dq = sys.flux_dim;
  const int du = sys.scalar_dim;
  const int nt = sys.face_dofs;
  const int qx = 0;
  const int qy = dq;
  const int u = 2 * dq;
  sys.matrix = Eigen::MatrixXd::Zero(sys.size(), sys.size());
  sys.rhs = Eigen::VectorXd::Zero(sys.size());
  auto& a = sys.matrix;

  const Eigen::VectorXd w =
      g.det * Eigen::Map<const Eigen::VectorXd>(vrule.weights.data(), vrule.size());

  const Eigen::MatrixXd mass_q = tq.values.transpose() * w.asDiagonal() * tq.values;
  a.block(qx, qx, dq, dq) = mass_q;
  a.block(qy, qy, dq, dq) = mass_q;
  const Eigen::MatrixXd div_x = tq.dx.transpose() * w.asDiagonal() * tu.values;  // (d_x r, u)
  const Eigen::MatrixXd div_y = tq.dy.transpose() * w.asDiagonal() * tu.values;
  a.block(qx, u, dq, du) = -div_x;
  a.block(qy, u, dq, du) = -div_y;
  a.block(u, qx, du, dq) = div_x.transpose();
  a.block(u, qy, du, dq) = div_y.transpose();

  Eigen::MatrixXd uu = mass_scale * (tu.values.transpose() * w.asDiagonal() * tu.values);
  if (drift != nullptr) {
    const auto& pref = volume_table(k + 1, ex).values;
    const Eigen::VectorXd px = pref * drift->component(element, 0);
    const Eigen::VectorXd py = pref * drift->component(element, 1);
    const Eigen::VectorXd wx = w.cwiseProduct(px);
    const Eigen::VectorXd wy = w.cwiseProduct(py);
    uu.noalias() += tu.dx.transpose() * wx.asDiagonal() * tu.values;
    uu.noalias() += tu.dy.transpose() * wy.asDiagonal() * tu.values;
  }

  const double inv_h = 1.0 / g.diameter;
  for (int f = 0; f < 3; ++f) {
    const auto uf = static_cast<std::size_t>(f);
    const int t = sys.trace_offset(f);
    const Eigen::Vector2d n = g.normals[uf];
    const double len = g.face_lengths[uf];
    const Eigen::MatrixXd& psi = mesh.face_reversed(element, f) ? fq.trace_values_reversed : fq.trace_values;
    const Eigen::MatrixXd& vq = fq.volume_values[uf];
    const Eigen::MatrixXd& vu = fu.volume_values[uf];
    const Eigen::VectorXd wf = len * Eigen::Map<const Eigen::VectorXd>(frule.weights.data(), frule.size());

    const Eigen::MatrixXd face_mass = psi.transpose() * wf.asDiagonal() * psi;         // nt x nt
    const Eigen::MatrixXd trace_u = psi.transpose() * wf.asDiagonal() * vu;            // nt x du
    const Eigen::MatrixXd trace_q = psi.transpose() * wf.asDiagonal() * vq;            // nt x dq
    const Eigen::MatrixXd face_mass_inv = face_mass.inverse();

    a.block(qx, t, dq, nt) += n.x() * trace_q.transpose();
    a.block(qy, t, dq, nt) += n.y() * trace_q.transpose();

    uu.noalias() += inv_h * trace_u.transpose() * face_mass_inv * trace_u;
    a.block(u, t, du, nt) += -inv_h * trace_u.transpose();

    if (p_hat_normal != nullptr) {
      const NormalFlux& flux = (*p_hat_normal)[uf];
      Eigen::VectorXd wp(frule.size());
      for (int q = 0; q < frule.size(); ++q) {
        wp[q] = wf[q] * flux(frule.points[static_cast<std::size_t>(q)]);
      }
      a.block(u, t, du, nt) -= vu.transpose() * wp.asDiagonal() * psi;
    }

    a.block(t, qx, nt, dq) += -n.x() * trace_q;
    a.block(t, qy, nt, dq) += -n.y() * trace_q;
    a.block(t, u, nt, du) += -inv_h * trace_u;
    a.block(t, t, nt, nt) += inv_h * face_mass;
  }
  a.block(u, u, du, du) = uu;
  return sys;
}

LocalSystem local_poisson_blocks(const Mesh& mesh, int element, int k, const std::array<double, 3>& tau, double eps) {
  const ElementGeometry& g = mesh.geometry(element);
  if (!(g.det > 0.0)) {
    throw MeshError(fmt::format("element {} is degenerate", element));
  }
  for (double t : tau) {
    if (!(t > 0.0)) {
      throw InputError(fmt::format("Poisson stabilization must be positive on every face (element {})", element));
    }
  }
  const int m = k + 1;
  const int ex = poisson_exactness(k);
  const auto& vrule = triangle_quadrature(ex);
  const auto& frule = segment_quadrature(ex);
  const PhysicalTable tv = physical_table(volume_table(m, ex), g.inverse_jacobian);
  const auto& ft = face_table(m, m, ex);

  LocalSystem sys;
  sys.flux_dim = triangle_dim(m);
  sys.scalar_dim = sys.flux_dim;
  sys.face_dofs = m + 1;
  const int d = sys.flux_dim;
  const int nt = sys.face_dofs;
  const int px = 0;
  const int py = d;
  const int phi = 2 * d;
  sys.matrix = Eigen::MatrixXd::Zero(sys.size(), sys.size());
  sys.rhs = Eigen::VectorXd::Zero(sys.size());
  auto& a = sys.matrix;

  const Eigen::VectorXd w = g.det * Eigen::Map<const Eigen::VectorXd>(vrule.weights.data(), vrule.size());
  const Eigen::MatrixXd mass = tv.values.transpose() * w.asDiagonal() * tv.values;
  const Eigen::MatrixXd div_x = tv.dx.transpose() * w.asDiagonal() * tv.values;
  const Eigen::MatrixXd div_y = tv.dy.transpose() * w.asDiagonal() * tv.values;
  a.block(px, px, d, d) = mass;
  a.block(py, py, d, d) = mass;
  a.block(px, phi, d, d) = -div_x;
  a.block(py, phi, d, d) = -div_y;
  a.block(phi, px, d, d) = div_x.transpose();
  a.block(phi, py, d, d) = div_y.transpose();

  for (int f = 0; f < 3; ++f) {
    const auto uf = static_cast<std::size_t>(f);
    const int t = sys.trace_offset(f);
    const Eigen::Vector2d n = g.normals[uf];
    const double len = g.face_lengths[uf];
    const Eigen::MatrixXd& psi = mesh.face_reversed(element, f) ? ft.trace_values_reversed : ft.trace_values;
    const Eigen::MatrixXd& vv = ft.volume_values[uf];
    const Eigen::VectorXd wf = len * Eigen::Map<const Eigen::VectorXd>(frule.weights.data(), frule.size());

    const Eigen::MatrixXd face_mass = psi.transpose() * wf.asDiagonal() * psi;
    const Eigen::MatrixXd trace_v = psi.transpose() * wf.asDiagonal() * vv;  // nt x d
    const Eigen::MatrixXd vol_face = vv.transpose() * wf.asDiagonal() * vv;  // d x d
    const double tf = tau[uf];

    a.block(px, t, d, nt) += n.x() * trace_v.transpose();
    a.block(py, t, d, nt) += n.y() * trace_v.transpose();
    a.block(phi, phi, d, d) += tf * vol_face;
    a.block(phi, t, d, nt) += -tf * trace_v.transpose();
    a.block(t, px, nt, d) += -n.x() * trace_v;
    a.block(t, py, nt, d) += -n.y() * trace_v;
    a.block(t, phi, nt, d) += -tf * trace_v;
    a.block(t, t, nt, nt) += tf * face_mass;
  }
  a *= eps;
  return sys;
}

NormalFlux evaluate_p_hat_normal(const Mesh& mesh, int element, int local_face, const CoefficientField& p,
                                 const CoefficientField& phi, const TraceField& phi_hat, double tau) {
  const int m = phi.degree();
  if (p.degree() != m || phi_hat.degree() != m) {
    throw InputError("p, phi and phi_hat must share one degree");
  }
  const ElementGeometry& g = mesh.geometry(element);
  const auto uf = static_cast<std::size_t>(local_face);
  const Eigen::Vector2d n = g.normals.at(uf);
  const int face_id = mesh.element_faces(element)[uf];
  const bool reversed = mesh.face_reversed(element, local_face);
  const int ex = 2 * m + 2;
  const auto& rule = segment_quadrature(ex);
  const auto& ft = face_table(m, m, ex);
  const Eigen::MatrixXd& vv = ft.volume_values[uf];
  const Eigen::MatrixXd& psi_local = ft.trace_values;
  const Eigen::MatrixXd& psi_hat = reversed ? ft.trace_values_reversed : ft.trace_values;

  const Eigen::VectorXd pn = n.x() * (vv * p.component(element, 0)) + n.y() * (vv * p.component(element, 1));
  const Eigen::VectorXd jump = vv * phi.component(element, 0) - psi_hat * phi_hat.face(face_id);
  const Eigen::VectorXd values = pn + tau * jump;
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.size());
  // Exact L2 projection on [0,1] (values are degree m in s).
  return NormalFlux{psi_local.transpose() * w.cwiseProduct(values)};
}

std::vector<ElementNormalFlux> evaluate_p_hat_normal(const Mesh& mesh, const CoefficientField& p,
                                                     const CoefficientField& phi, const TraceField& phi_hat,
                                                     const std::vector<std::array<double, 3>>& tau) {
  std::vector<ElementNormalFlux> out(static_cast<std::size_t>(mesh.num_elements()));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int f = 0; f < 3; ++f) {
      out[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)] =
          evaluate_p_hat_normal(mesh, e, f, p, phi, phi_hat, tau[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)]);
    }
  }
  return out;
}

} // namespace hdgdd
