#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hdgdd/condensation.hpp"
#include "hdgdd/fields.hpp"
#include "hdgdd/hdg_local.hpp"
#include "hdgdd/mesh.hpp"
#include "hdgdd/projections.hpp"
#include "hdgdd/trace_system.hpp"

namespace hdgdd {

using SpaceTimeFunction = std::function<double(double x, double y, double t)>;

/// Dirichlet data for u and phi plus normal-flux data on neumann faces
/// (q_hat.n = neumann_u, p_hat.n = neumann_phi). Empty functions mean zero.
struct BoundaryData {
  SpaceTimeFunction g_u;
  SpaceTimeFunction g_phi;
  SpaceTimeFunction neumann_u;
  SpaceTimeFunction neumann_phi;
};

struct SolverConfig {
  int k = 0;
  double eps = 1.0;
  double tau = 1.0;
  int threads = 1;
};

struct PoissonSolution {
  CoefficientField p;    ///< degree k+1, two components
  CoefficientField phi;  ///< degree k+1
  TraceField phi_hat;    ///< degree k+1
};

struct TransportSolution {
  CoefficientField q;  ///< degree k, two components
  CoefficientField u;  ///< degree k+1
  TraceField u_hat;    ///< degree k
};

/// Element systems with loads, the condensed blocks and the global trace
/// system built from them.
struct CondensedProblem {
  std::vector<LocalSystem> locals;
  std::vector<CondensedBlock> blocks;
  TraceSystem system;
};

/// Trace values on dirichlet faces: face L2 projection of g at time t onto
/// P^degree, zero elsewhere. Throws InputError if g is empty and the mesh has
/// dirichlet faces.
[[nodiscard]] TraceField dirichlet_trace_values(const Mesh& mesh, int degree, const SpaceTimeFunction& g, double t);

/// Poisson element loads: w rows (f2 - u, w), mu rows -eps<g_N, mu> on
/// neumann faces.
[[nodiscard]] Eigen::VectorXd poisson_element_load(const Mesh& mesh, int element, const SolverConfig& config,
                                                   const CoefficientField& u, const SpaceTimeFunction& f2,
                                                   const BoundaryData& bc, double t);

/// Transport element loads: w rows (f1, w) + (mass_load, w), mu rows
/// -<g_N, mu> on neumann faces. `mass_load` (degree k+1) may be null.
[[nodiscard]] Eigen::VectorXd transport_element_load(const Mesh& mesh, int element, const SolverConfig& config,
                                                     const SpaceTimeFunction& f1, const CoefficientField* mass_load,
                                                     const BoundaryData& bc, double t);

[[nodiscard]] CondensedProblem assemble_poisson(const Mesh& mesh, const SolverConfig& config,
                                                const CoefficientField& u, const SpaceTimeFunction& f2,
                                                const BoundaryData& bc, double t);

/// `alpha` scales the (u,w) block. p and p_hat may be null (no drift).
[[nodiscard]] CondensedProblem assemble_transport(const Mesh& mesh, const SolverConfig& config,
                                                  const CoefficientField* p,
                                                  const std::vector<ElementNormalFlux>* p_hat, double alpha,
                                                  const SpaceTimeFunction& f1, const CoefficientField* mass_load,
                                                  const BoundaryData& bc, double t);

/// Recovers element unknowns from a full trace field.
[[nodiscard]] PoissonSolution recover_poisson(const Mesh& mesh, int k, const std::vector<CondensedBlock>& blocks,
                                              TraceField phi_hat);
[[nodiscard]] TransportSolution recover_transport(const Mesh& mesh, int k,
                                                  const std::vector<CondensedBlock>& blocks, TraceField u_hat);

/// Poisson operator with a cached factorization: the matrix depends on
/// neither u nor t, so `solve` only rebuilds loads.
class PoissonSolver {
public:
  PoissonSolver(const Mesh& mesh, SolverConfig config, BoundaryData bc, SpaceTimeFunction f2);

  [[nodiscard]] PoissonSolution solve(const CoefficientField& u, double t) const;
  [[nodiscard]] const SolverConfig& config() const { return config_; }
  [[nodiscard]] const FaceStabilization& tau() const { return tau_; }
  [[nodiscard]] int num_trace_dofs() const { return dofs_.num_active(); }

private:
  const Mesh* mesh_;
  SolverConfig config_;
  BoundaryData bc_;
  SpaceTimeFunction f2_;
  FaceStabilization tau_;
  std::vector<CondensedBlock> blocks_;
  TraceDofMap dofs_;
  TraceSolver solver_;
};

/// Transport operator. The matrix changes with the drift, so every solve
/// reassembles and refactorizes; the symbolic analysis is reused.
class TransportSolver {
public:
  TransportSolver(const Mesh& mesh, SolverConfig config, BoundaryData bc, SpaceTimeFunction f1);

  [[nodiscard]] TransportSolution solve(const CoefficientField* p, const std::vector<ElementNormalFlux>* p_hat,
                                        double alpha, const CoefficientField* mass_load, double t);
  [[nodiscard]] const SolverConfig& config() const { return config_; }

private:
  const Mesh* mesh_;
  SolverConfig config_;
  BoundaryData bc_;
  SpaceTimeFunction f1_;
  TraceSolver solver_;
};

/// One-shot convenience wrappers.
[[nodiscard]] PoissonSolution solve_poisson(const Mesh& mesh, const SolverConfig& config, const CoefficientField& u,
                                            const SpaceTimeFunction& f2, const BoundaryData& bc, double t);
[[nodiscard]] TransportSolution solve_transport_step(const Mesh& mesh, const SolverConfig& config,
                                                     const CoefficientField* p,
                                                     const std::vector<ElementNormalFlux>* p_hat, double alpha,
                                                     const SpaceTimeFunction& f1, const CoefficientField* mass_load,
                                                     const BoundaryData& bc, double t);

/// Largest |sum over both sides of <q_hat.n, mu>| over interior faces and
/// trace test functions, by direct quadrature (q_hat.n = q.n + h^{-1}(P u - u_hat)).
[[nodiscard]] double transport_transmission_residual(const Mesh& mesh, const TransportSolution& s);
/// Same for p_hat.n = p.n + tau (phi - phi_hat).
[[nodiscard]] double poisson_transmission_residual(const Mesh& mesh, const PoissonSolution& s,
                                                   const FaceStabilization& tau);

} // namespace hdgdd
