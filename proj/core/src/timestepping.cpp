#include "hdgdd/timestepping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hdgdd/basis.hpp"
#include "hdgdd/error.hpp"
#include "hdgdd/hdg_local.hpp"
#include "hdgdd/quadrature.hpp"

namespace hdgdd {

TimeGrid::TimeGrid(double t_final, double dt) : t_final_(t_final), dt_(dt) {
  if (!(dt > 0.0) || !(t_final > 0.0)) {
    throw InputError(fmt::format("time grid needs T > 0 and dt > 0 (T = {}, dt = {})", t_final, dt));
  }
  const double n = std::round(t_final / dt);
  if (n < 1.0 || std::abs(n * dt - t_final) > 1e-12) {
    throw InputError(fmt::format("dt = {} does not divide T = {}", dt, t_final));
  }
  steps_ = static_cast<int>(n);
}

int TimeGrid::step_of(double t) const {
  const double n = std::round(t / dt_);
  if (n < 0.0 || n > steps_ || std::abs(n * dt_ - t) > 1e-10) {
    return -1;
  }
  return static_cast<int>(n);
}

double TimeGrid::divisor_step(double t_final, double dt) {
  const double n = std::ceil(t_final / dt - 1e-9);
  return t_final / std::max(1.0, n);
}

double l2_norm(const Mesh& mesh, const CoefficientField& field) {
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    s += mesh.geometry(e).area() * field.element(e).squaredNorm();
  }
  return std::sqrt(s);
}

BDFState initialize(const ScalarFunction& u0, const Mesh& mesh, int k) {
  BDFState state;
  state.u = l2_project_element(u0, k + 1, mesh);
  return state;
}

CoupledStepper::CoupledStepper(const Mesh& mesh, SolverConfig config, Problem problem, CouplingConfig coupling)
    : mesh_(&mesh), config_(config), problem_(std::move(problem)), coupling_(coupling),
      poisson_(mesh, config, problem_.bc, problem_.f2), transport_(mesh, config, problem_.bc, problem_.f1) {
  if (!(coupling_.rel_tol > 0.0) || !(coupling_.abs_tol > 0.0) || coupling_.max_iter < 1 || coupling_.anderson_depth < 0) {
    throw InputError("coupling tolerances must be positive and max_iter >= 1");
  }
}

StepResult CoupledStepper::step(BDFState& state, double dt) {
  const Mesh& mesh = *mesh_;
  const BdfScheme scheme = state.next_scheme();
  const double t = state.time + dt;

  CoefficientField history = state.u;
  CoefficientField guess = state.u;
  double alpha = 1.0 / dt;
  if (scheme == BdfScheme::bdf1) {
    history.data() = state.u.data() / dt;
  } else {
    alpha = 1.5 / dt;
    history.data() = (2.0 * state.u.data() - 0.5 * state.u_prev.data()) / dt;
    guess.data() = 2.0 * state.u.data() - state.u_prev.data();
  }

  // Anderson mixing works on sqrt(|K|)-weighted coefficients so that the
  // Euclidean norm is the L2 norm.
  Eigen::VectorXd weight(guess.data().size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    weight.segment(e * guess.element_size(), guess.element_size()).setConstant(std::sqrt(mesh.geometry(e).area()));
  }
  std::vector<Eigen::VectorXd> g_hist;
  std::vector<Eigen::VectorXd> f_hist;

  StepResult result;
  for (int it = 1; it <= coupling_.max_iter; ++it) {
    PoissonSolution pois = poisson_.solve(guess, t);
    const auto p_hat = evaluate_p_hat_normal(mesh, pois.p, pois.phi, pois.phi_hat, poisson_.tau());
    TransportSolution tr = transport_.solve(&pois.p, &p_hat, alpha, &history, t);

    const Eigen::VectorXd g_val = tr.u.data().cwiseProduct(weight);
    const Eigen::VectorXd f_val = g_val - guess.data().cwiseProduct(weight);
    const double inc = f_val.norm();
    const double norm = g_val.norm();
    result.increments.push_back(inc);
    result.iterations = it;
    if (inc <= coupling_.rel_tol * norm + coupling_.abs_tol) {
      state.u_prev = std::move(state.u);
      state.u = tr.u;
      state.time = t;
      ++state.steps_taken;
      result.transport = std::move(tr);
      result.poisson = std::move(pois);
      return result;
    }

    g_hist.push_back(g_val);
    f_hist.push_back(f_val);
    if (static_cast<int>(g_hist.size()) > coupling_.anderson_depth + 1) {
      g_hist.erase(g_hist.begin());
      f_hist.erase(f_hist.begin());
    }
    Eigen::VectorXd next = g_val;
    const int m = static_cast<int>(g_hist.size()) - 1;
    if (m > 0) {
      Eigen::MatrixXd df(f_val.size(), m);
      Eigen::MatrixXd dg(g_val.size(), m);
      for (int j = 0; j < m; ++j) {
        df.col(j) = f_hist[static_cast<std::size_t>(j + 1)] - f_hist[static_cast<std::size_t>(j)];
        dg.col(j) = g_hist[static_cast<std::size_t>(j + 1)] - g_hist[static_cast<std::size_t>(j)];
      }
      const Eigen::VectorXd gamma = df.colPivHouseholderQr().solve(f_val);
      if (gamma.allFinite()) {
        next -= dg * gamma;
      }
    }
    guess.data() = next.cwiseQuotient(weight);
  }
  throw SolverError(fmt::format("coupling did not converge at t = {} after {} iterations (last increment {:.3e})", t,
                                coupling_.max_iter, result.increments.back()));
}

std::pair<double, double> field_range(const CoefficientField& u, int exactness) {
  const auto& rule = triangle_quadrature(exactness);
  const TriangleBasis& basis = triangle_basis(u.degree());
  std::vector<std::array<double, 2>> pts = rule.points;
  pts.push_back({0.0, 0.0});
  pts.push_back({1.0, 0.0});
  pts.push_back({0.0, 1.0});
  Eigen::MatrixXd table(static_cast<Eigen::Index>(pts.size()), basis.dim());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    table.row(static_cast<Eigen::Index>(i)) = basis.values(pts[i][0], pts[i][1]).transpose();
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int e = 0; e < u.num_elements(); ++e) {
    const Eigen::VectorXd v = table * u.component(e, 0);
    lo = std::min(lo, v.minCoeff());
    hi = std::max(hi, v.maxCoeff());
  }
  return {lo, hi};
}

Trajectory run(CoupledStepper& stepper, BDFState initial, const TimeGrid& grid,
               const std::vector<double>& snapshot_times, const StepObserver& observer) {
  std::vector<int> snap_steps;
  for (double ts : snapshot_times) {
    const int s = grid.step_of(ts);
    if (s < 1) {
      throw InputError(fmt::format("snapshot time {} is not a positive grid point (dt = {})", ts, grid.dt()));
    }
    snap_steps.push_back(s);
  }
  Trajectory traj;
  traj.final_state = std::move(initial);
  const int k = traj.final_state.u.degree() - 1;
  for (int n = 1; n <= grid.steps(); ++n) {
    StepResult r = stepper.step(traj.final_state, grid.dt());
    traj.final_state.time = grid.time(n);
    const auto [lo, hi] = field_range(r.transport.u, transport_exactness(k));
    const StepLog entry{traj.final_state.time, lo, hi, r.iterations};
    traj.log.push_back(entry);
    if (observer) {
      observer(entry, r);
    }
    for (std::size_t i = 0; i < snap_steps.size(); ++i) {
      if (snap_steps[i] == n) {
        traj.snapshots.push_back(Snapshot{snapshot_times[i], n, r.transport, r.poisson});
      }
    }
    traj.final_step = std::move(r);
  }
  return traj;
}

} // namespace hdgdd
