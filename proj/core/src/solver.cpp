#include "hdgdd/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hdgdd/basis.hpp"
#include "hdgdd/error.hpp"
#include "hdgdd/quadrature.hpp"
#include "parallel.hpp"

namespace hdgdd {

namespace {

// integral over K of f * phi_i for the degree-m basis.
Eigen::VectorXd volume_moments(const Mesh& mesh, int element, int m, const SpaceTimeFunction& f, double t) {
  if (!f) {
    return Eigen::VectorXd::Zero(triangle_dim(m));
  }
  const int ex = 2 * m + 4;
  const auto& rule = triangle_quadrature(ex);
  const auto& table = volume_table(m, ex);
  const auto& g = mesh.geometry(element);
  Eigen::VectorXd fw(rule.size());
  for (int q = 0; q < rule.size(); ++q) {
    const auto& p = rule.points[static_cast<std::size_t>(q)];
    const Eigen::Vector2d x = g.map(p[0], p[1]);
    fw[q] = g.det * rule.weights[static_cast<std::size_t>(q)] * f(x.x(), x.y(), t);
  }
  return table.values.transpose() * fw;
}

// <g, mu_a> on local face f, mu in the global face orientation.
Eigen::VectorXd face_moments(const Mesh& mesh, int element, int local_face, int degree, const SpaceTimeFunction& g,
                             double t) {
  const auto& rule = segment_quadrature(2 * degree + 4);
  const SegmentBasis basis(degree);
  const auto& geo = mesh.geometry(element);
  const bool reversed = mesh.face_reversed(element, local_face);
  const double len = geo.face_lengths[static_cast<std::size_t>(local_face)];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(degree + 1);
  for (int q = 0; q < rule.size(); ++q) {
    const double s = rule.points[static_cast<std::size_t>(q)];
    const auto r = reference_face_point(local_face, s);
    const Eigen::Vector2d x = geo.map(r[0], r[1]);
    out += len * rule.weights[static_cast<std::size_t>(q)] * g(x.x(), x.y(), t) *
           basis.values(reversed ? 1.0 - s : s);
  }
  return out;
}

void add_neumann_load(const Mesh& mesh, int element, int degree, const SpaceTimeFunction& g, double scale,
                      const LocalSystem& layout, Eigen::VectorXd& rhs) {
  if (!g) {
    return;
  }
  for (int f = 0; f < 3; ++f) {
    const int face = mesh.element_faces(element)[static_cast<std::size_t>(f)];
    if (mesh.face(face).tag == BoundaryTag::neumann) {
      rhs.segment(layout.trace_offset(f), layout.face_dofs) -= scale * face_moments(mesh, element, f, degree, g, 0.0);
    }
  }
}

void check_tags(const Mesh& mesh) {
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.is_boundary() && face.tag == BoundaryTag::interior) {
      throw InputError(fmt::format("boundary face {} has no boundary condition tag", f));
    }
  }
}

LocalSystem poisson_layout(int k) {
  LocalSystem s;
  s.flux_dim = triangle_dim(k + 1);
  s.scalar_dim = s.flux_dim;
  s.face_dofs = k + 2;
  return s;
}

LocalSystem transport_layout(int k) {
  LocalSystem s;
  s.flux_dim = triangle_dim(k);
  s.scalar_dim = triangle_dim(k + 1);
  s.face_dofs = k + 1;
  return s;
}

// Neumann data evaluated at a fixed time.
SpaceTimeFunction at_time(const SpaceTimeFunction& g, double t) {
  if (!g) {
    return {};
  }
  return [g, t](double x, double y, double) { return g(x, y, t); };
}

std::vector<CondensedBlock> condense_all(std::vector<LocalSystem>& locals, int threads) {
  std::vector<std::unique_ptr<CondensedBlock>> slots(locals.size());
  detail::parallel_for(static_cast<int>(locals.size()), threads, [&](int e) {
    slots[static_cast<std::size_t>(e)] = std::make_unique<CondensedBlock>(locals[static_cast<std::size_t>(e)], e);
  });
  std::vector<CondensedBlock> out;
  out.reserve(locals.size());
  for (auto& s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

void split_solution(const Eigen::VectorXd& x, int e, int flux_dim, CoefficientField& flux, CoefficientField& scalar) {
  flux.component(e, 0) = x.segment(0, flux_dim);
  flux.component(e, 1) = x.segment(flux_dim, flux_dim);
  scalar.component(e, 0) = x.segment(2 * flux_dim, scalar.dim());
}

} // namespace

TraceField dirichlet_trace_values(const Mesh& mesh, int degree, const SpaceTimeFunction& g, double t) {
  TraceField out(degree, mesh.num_faces());
  bool any = false;
  for (const Face& face : mesh.faces()) {
    any = any || face.tag == BoundaryTag::dirichlet;
  }
  if (!any) {
    return out;
  }
  if (!g) {
    throw InputError("mesh has dirichlet faces but no boundary data was given");
  }
  const TraceField all = l2_project_face([&](double x, double y) { return g(x, y, t); }, degree, mesh);
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(f).tag == BoundaryTag::dirichlet) {
      out.face(f) = all.face(f);
    }
  }
  return out;
}

Eigen::VectorXd poisson_element_load(const Mesh& mesh, int element, const SolverConfig& config,
                                     const CoefficientField& u, const SpaceTimeFunction& f2, const BoundaryData& bc,
                                     double t) {
  const int m = config.k + 1;
  if (u.degree() != m) {
    throw InputError(fmt::format("Poisson coupling field must have degree {}, got {}", m, u.degree()));
  }
  const LocalSystem layout = poisson_layout(config.k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(layout.size());
  auto w = rhs.segment(layout.scalar_offset(), layout.scalar_dim);
  w = volume_moments(mesh, element, m, f2, t);
  w -= mesh.geometry(element).area() * u.component(element, 0);
  add_neumann_load(mesh, element, m, at_time(bc.neumann_phi, t), config.eps, layout, rhs);
  return rhs;
}

Eigen::VectorXd transport_element_load(const Mesh& mesh, int element, const SolverConfig& config,
                                       const SpaceTimeFunction& f1, const CoefficientField* mass_load,
                                       const BoundaryData& bc, double t) {
  const int m = config.k + 1;
  const LocalSystem layout = transport_layout(config.k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(layout.size());
  auto w = rhs.segment(layout.scalar_offset(), layout.scalar_dim);
  w = volume_moments(mesh, element, m, f1, t);
  if (mass_load != nullptr) {
    if (mass_load->degree() != m) {
      throw InputError(fmt::format("transport mass load must have degree {}, got {}", m, mass_load->degree()));
    }
    w += mesh.geometry(element).area() * mass_load->component(element, 0);
  }
  add_neumann_load(mesh, element, config.k, at_time(bc.neumann_u, t), 1.0, layout, rhs);
  return rhs;
}

CondensedProblem assemble_poisson(const Mesh& mesh, const SolverConfig& config, const CoefficientField& u,
                                  const SpaceTimeFunction& f2, const BoundaryData& bc, double t) {
  check_tags(mesh);
  const FaceStabilization tau = uniform_stabilization(mesh, config.tau);
  CondensedProblem out;
  out.locals.resize(static_cast<std::size_t>(mesh.num_elements()));
  detail::parallel_for(mesh.num_elements(), config.threads, [&](int e) {
    LocalSystem local = local_poisson_blocks(mesh, e, config.k, tau[static_cast<std::size_t>(e)], config.eps);
    local.rhs = poisson_element_load(mesh, e, config, u, f2, bc, t);
    out.locals[static_cast<std::size_t>(e)] = std::move(local);
  });
  out.blocks = condense_all(out.locals, config.threads);
  out.system = assemble_trace_system(mesh, out.blocks, TraceDofMap(mesh, config.k + 2),
                                     dirichlet_trace_values(mesh, config.k + 1, bc.g_phi, t));
  return out;
}

CondensedProblem assemble_transport(const Mesh& mesh, const SolverConfig& config, const CoefficientField* p,
                                    const std::vector<ElementNormalFlux>* p_hat, double alpha,
                                    const SpaceTimeFunction& f1, const CoefficientField* mass_load,
                                    const BoundaryData& bc, double t) {
  check_tags(mesh);
  if ((p == nullptr) != (p_hat == nullptr)) {
    throw InputError("drift field and its normal flux must be given together");
  }
  CondensedProblem out;
  out.locals.resize(static_cast<std::size_t>(mesh.num_elements()));
  detail::parallel_for(mesh.num_elements(), config.threads, [&](int e) {
    LocalSystem local = local_transport_blocks(mesh, e, config.k, p,
                                               p_hat != nullptr ? &(*p_hat)[static_cast<std::size_t>(e)] : nullptr,
                                               alpha);
    local.rhs = transport_element_load(mesh, e, config, f1, mass_load, bc, t);
    out.locals[static_cast<std::size_t>(e)] = std::move(local);
  });
  out.blocks = condense_all(out.locals, config.threads);
  out.system = assemble_trace_system(mesh, out.blocks, TraceDofMap(mesh, config.k + 1),
                                     dirichlet_trace_values(mesh, config.k, bc.g_u, t));
  return out;
}

PoissonSolution recover_poisson(const Mesh& mesh, int k, const std::vector<CondensedBlock>& blocks,
                                TraceField phi_hat) {
  const int m = k + 1;
  PoissonSolution s{CoefficientField(m, 2, mesh.num_elements()), CoefficientField(m, 1, mesh.num_elements()),
                    std::move(phi_hat)};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Eigen::VectorXd x = blocks[static_cast<std::size_t>(e)].recover(gather_trace(mesh, e, s.phi_hat));
    split_solution(x, e, triangle_dim(m), s.p, s.phi);
  }
  return s;
}

TransportSolution recover_transport(const Mesh& mesh, int k, const std::vector<CondensedBlock>& blocks,
                                    TraceField u_hat) {
  TransportSolution s{CoefficientField(k, 2, mesh.num_elements()), CoefficientField(k + 1, 1, mesh.num_elements()),
                      std::move(u_hat)};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Eigen::VectorXd x = blocks[static_cast<std::size_t>(e)].recover(gather_trace(mesh, e, s.u_hat));
    split_solution(x, e, triangle_dim(k), s.q, s.u);
  }
  return s;
}

PoissonSolver::PoissonSolver(const Mesh& mesh, SolverConfig config, BoundaryData bc, SpaceTimeFunction f2)
    : mesh_(&mesh), config_(config), bc_(std::move(bc)), f2_(std::move(f2)),
      tau_(uniform_stabilization(mesh, config.tau)), dofs_(mesh, config.k + 2) {
  check_tags(mesh);
  std::vector<LocalSystem> locals(static_cast<std::size_t>(mesh.num_elements()));
  detail::parallel_for(mesh.num_elements(), config_.threads, [&](int e) {
    locals[static_cast<std::size_t>(e)] =
        local_poisson_blocks(mesh, e, config_.k, tau_[static_cast<std::size_t>(e)], config_.eps);
  });
  blocks_ = condense_all(locals, config_.threads);
  const TraceSystem system = assemble_trace_system(mesh, blocks_, dofs_, TraceField(config_.k + 1, mesh.num_faces()));
  solver_.factorize(system.matrix);
}

PoissonSolution PoissonSolver::solve(const CoefficientField& u, double t) const {
  const Mesh& mesh = *mesh_;
  const int ne = mesh.num_elements();
  std::vector<Eigen::VectorXd> loads(static_cast<std::size_t>(ne));
  std::vector<Eigen::VectorXd> reduced(static_cast<std::size_t>(ne));
  const LocalSystem layout = poisson_layout(config_.k);
  detail::parallel_for(ne, config_.threads, [&](int e) {
    const auto ue = static_cast<std::size_t>(e);
    loads[ue] = poisson_element_load(mesh, e, config_, u, f2_, bc_, t);
    reduced[ue] = blocks_[ue].reduce(loads[ue].head(layout.interior_size()), loads[ue].tail(layout.trace_size()));
  });
  const TraceField constrained = dirichlet_trace_values(mesh, config_.k + 1, bc_.g_phi, t);
  const Eigen::VectorXd rhs = assemble_trace_rhs(mesh, reduced, blocks_, dofs_, constrained);
  const Eigen::VectorXd active = solver_.solve(rhs);

  const int m = config_.k + 1;
  PoissonSolution s{CoefficientField(m, 2, ne), CoefficientField(m, 1, ne), expand_trace(dofs_, constrained, active)};
  detail::parallel_for(ne, config_.threads, [&](int e) {
    const auto ue = static_cast<std::size_t>(e);
    const Eigen::VectorXd x =
        blocks_[ue].recover(gather_trace(mesh, e, s.phi_hat), loads[ue].head(layout.interior_size()));
    split_solution(x, e, layout.flux_dim, s.p, s.phi);
  });
  return s;
}

TransportSolver::TransportSolver(const Mesh& mesh, SolverConfig config, BoundaryData bc, SpaceTimeFunction f1)
    : mesh_(&mesh), config_(config), bc_(std::move(bc)), f1_(std::move(f1)) {}

TransportSolution TransportSolver::solve(const CoefficientField* p, const std::vector<ElementNormalFlux>* p_hat,
                                         double alpha, const CoefficientField* mass_load, double t) {
  CondensedProblem problem = assemble_transport(*mesh_, config_, p, p_hat, alpha, f1_, mass_load, bc_, t);
  solver_.factorize(problem.system.matrix);
  const Eigen::VectorXd active = solver_.solve(problem.system.rhs);
  return recover_transport(*mesh_, config_.k, problem.blocks, expand_trace(problem.system, active));
}

PoissonSolution solve_poisson(const Mesh& mesh, const SolverConfig& config, const CoefficientField& u,
                              const SpaceTimeFunction& f2, const BoundaryData& bc, double t) {
  const CondensedProblem problem = assemble_poisson(mesh, config, u, f2, bc, t);
  const Eigen::VectorXd active = solve_trace(problem.system);
  return recover_poisson(mesh, config.k, problem.blocks, expand_trace(problem.system, active));
}

TransportSolution solve_transport_step(const Mesh& mesh, const SolverConfig& config, const CoefficientField* p,
                                       const std::vector<ElementNormalFlux>* p_hat, double alpha,
                                       const SpaceTimeFunction& f1, const CoefficientField* mass_load,
                                       const BoundaryData& bc, double t) {
  const CondensedProblem problem = assemble_transport(mesh, config, p, p_hat, alpha, f1, mass_load, bc, t);
  const Eigen::VectorXd active = solve_trace(problem.system);
  return recover_transport(mesh, config.k, problem.blocks, expand_trace(problem.system, active));
}

namespace {

// Accumulates per-face functionals from both sides; returns the max over
// interior faces. `side` fills the nt moments for (element, local_face).
template <class Side>
double transmission_max(const Mesh& mesh, int nt, Side&& side) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(nt, mesh.num_faces());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int f = 0; f < 3; ++f) {
      sums.col(mesh.element_faces(e)[static_cast<std::size_t>(f)]) += side(e, f);
    }
  }
  double worst = 0.0;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!mesh.face(f).is_boundary()) {
      worst = std::max(worst, sums.col(f).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

} // namespace

double transport_transmission_residual(const Mesh& mesh, const TransportSolution& s) {
  const int k = s.q.degree();
  const int nt = k + 1;
  const auto& rule = segment_quadrature(2 * (k + 1) + 2);
  const TriangleBasis& bq = triangle_basis(k);
  const TriangleBasis& bu = triangle_basis(k + 1);
  const SegmentBasis psi(k);
  return transmission_max(mesh, nt, [&](int e, int f) {
    const auto& g = mesh.geometry(e);
    const Eigen::Vector2d n = g.normals[static_cast<std::size_t>(f)];
    const double len = g.face_lengths[static_cast<std::size_t>(f)];
    const bool rev = mesh.face_reversed(e, f);
    const int face = mesh.element_faces(e)[static_cast<std::size_t>(f)];
    // P_k of u on the face, global parameter.
    Eigen::VectorXd pu = Eigen::VectorXd::Zero(nt);
    for (int q = 0; q < rule.size(); ++q) {
      const double sl = rule.points[static_cast<std::size_t>(q)];
      const auto r = reference_face_point(f, sl);
      pu += rule.weights[static_cast<std::size_t>(q)] * bu.values(r[0], r[1]).dot(s.u.component(e, 0)) *
            psi.values(rev ? 1.0 - sl : sl);
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nt);
    for (int q = 0; q < rule.size(); ++q) {
      const double sl = rule.points[static_cast<std::size_t>(q)];
      const auto r = reference_face_point(f, sl);
      const Eigen::VectorXd vq = bq.values(r[0], r[1]);
      const Eigen::VectorXd mu = psi.values(rev ? 1.0 - sl : sl);
      const double qn = n.x() * vq.dot(s.q.component(e, 0)) + n.y() * vq.dot(s.q.component(e, 1));
      const double jump = mu.dot(pu - s.u_hat.face(face)) / g.diameter;
      out += len * rule.weights[static_cast<std::size_t>(q)] * (qn + jump) * mu;
    }
    return out;
  });
}

double poisson_transmission_residual(const Mesh& mesh, const PoissonSolution& s, const FaceStabilization& tau) {
  const int m = s.phi.degree();
  const int nt = m + 1;
  const auto& rule = segment_quadrature(2 * m + 2);
  const TriangleBasis& b = triangle_basis(m);
  const SegmentBasis psi(m);
  return transmission_max(mesh, nt, [&](int e, int f) {
    const auto& g = mesh.geometry(e);
    const Eigen::Vector2d n = g.normals[static_cast<std::size_t>(f)];
    const double len = g.face_lengths[static_cast<std::size_t>(f)];
    const bool rev = mesh.face_reversed(e, f);
    const int face = mesh.element_faces(e)[static_cast<std::size_t>(f)];
    const double tf = tau[static_cast<std::size_t>(e)][static_cast<std::size_t>(f)];
    Eigen::VectorXd out = Eigen::VectorXd::Zero(nt);
    for (int q = 0; q < rule.size(); ++q) {
      const double sl = rule.points[static_cast<std::size_t>(q)];
      const auto r = reference_face_point(f, sl);
      const Eigen::VectorXd v = b.values(r[0], r[1]);
      const Eigen::VectorXd mu = psi.values(rev ? 1.0 - sl : sl);
      const double pn = n.x() * v.dot(s.p.component(e, 0)) + n.y() * v.dot(s.p.component(e, 1));
      const double jump = v.dot(s.phi.component(e, 0)) - mu.dot(s.phi_hat.face(face));
      out += len * rule.weights[static_cast<std::size_t>(q)] * (pn + tf * jump) * mu;
    }
    return out;
  });
}

} // namespace hdgdd
