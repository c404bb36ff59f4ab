#include "hdgdd/drivers.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "hdgdd/error.hpp"
#include "hdgdd/manufactured.hpp"
#include "hdgdd/projections.hpp"
#include "hdgdd/vtk.hpp"

namespace hdgdd {

namespace {

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(fmt::format("cannot write '{}'", path));
  }
  out << text;
}

CouplingConfig coupling_config(const RunConfig& c) {
  return {c.coupling_rel_tol, c.coupling_abs_tol, c.coupling_max_iter, c.coupling_anderson_depth};
}

} // namespace

Mesh level_mesh(int level) { return build_structured_unit_square(1 << level); }

Problem make_problem(const RunConfig& config) {
  switch (config.problem) {
  case ProblemKind::example1: return example1_problem(config.resolved_eps());
  case ProblemKind::example2: return example2_problem();
  case ProblemKind::zero: return zero_problem();
  }
  return zero_problem();
}

Mesh simulation_mesh(const RunConfig& config) {
  Mesh mesh = [&] {
    if (config.mesh_file.empty()) {
      return build_structured_unit_square(config.mesh_n);
    }
    std::ifstream in(config.mesh_file);
    if (!in) {
      throw ConfigError(fmt::format("cannot read mesh file '{}'", config.mesh_file));
    }
    return read_mesh(in);
  }();
  if (config.problem == ProblemKind::example2) {
    return tag_boundary(mesh, example2_boundary);
  }
  return mesh;
}

LevelResult run_example1_level(const RunConfig& config, int level, std::ostream& log) {
  if (config.problem != ProblemKind::example1) {
    throw ConfigError("convergence studies need problem = example1");
  }
  const Mesh mesh = level_mesh(level);
  const SolverConfig sc{config.k, config.resolved_eps(), config.tau, config.threads};
  const ResolvedStep step = resolve_dt(config, mesh.h_max());
  if (step.adjusted) {
    fmt::print(log, "level {}: dt {:.6g} reduced to {:.6g} so that it divides T\n", level, step.requested, step.dt);
  }
  const TimeGrid grid(config.t_final, step.dt);
  Problem problem = make_problem(config);
  const ScalarFunction u0 = problem.u0;
  CoupledStepper stepper(mesh, sc, std::move(problem),
                         coupling_config(config));
  LevelResult res;
  res.dt = step.dt;
  res.steps = grid.steps();
  Trajectory traj;
  try {
    traj = run(stepper, initialize(u0, mesh, config.k), grid);
  } catch (const SolverError& e) {
    throw SolverError(fmt::format("level {}: {}", level, e.what()));
  }
  for (const auto& s : traj.log) {
    res.max_iterations = std::max(res.max_iterations, s.iterations);
  }
  const double t = config.t_final;
  const StepResult& fin = *traj.final_step;
  res.report.level = level;
  res.report.h = mesh.h_max();
  res.report.err_u = l2_error(fin.transport.u, &Example1::u, t, mesh);
  res.report.err_phi = l2_error(fin.poisson.phi, &Example1::phi, t, mesh);
  res.report.err_q = l2_error(fin.transport.q, &Example1::q, t, mesh);
  res.report.err_p = l2_error(fin.poisson.p, &Example1::p, t, mesh);
  fmt::print(log, "level {} (n = {}, dt = {:.6g}, {} steps, max coupling iterations {}): u {:.4e} phi {:.4e} "
                  "q {:.4e} p {:.4e}\n",
             level, 1 << level, res.dt, res.steps, res.max_iterations, res.report.err_u, res.report.err_phi,
             res.report.err_q, res.report.err_p);
  return res;
}

ConvergenceResult run_convergence(const RunConfig& config, std::ostream& log) {
  validate(config);
  ConvergenceResult out;
  std::vector<ErrorReport> reports;
  for (int level : config.levels) {
    out.levels.push_back(run_example1_level(config, level, log));
    reports.push_back(out.levels.back().report);
  }
  out.rows = eoc_table(reports);
  const std::string csv = eoc_csv(out.rows);
  if (!config.output_dir.empty()) {
    write_text(config.output_dir, "convergence.csv", csv);
  }
  fmt::print(log, "{}", csv);
  return out;
}

SimulateResult run_simulate(const RunConfig& config, std::ostream& log) {
  validate(config);
  const Mesh mesh = simulation_mesh(config);
  const SolverConfig sc{config.k, config.resolved_eps(), config.tau, config.threads};
  const ResolvedStep step = resolve_dt(config, mesh.h_max());
  if (step.adjusted) {
    fmt::print(log, "dt {:.6g} reduced to {:.6g} so that it divides T\n", step.requested, step.dt);
  }
  const TimeGrid grid(config.t_final, step.dt);
  std::vector<double> snaps = config.snapshots;
  if (snaps.empty()) {
    snaps.push_back(config.t_final);
  }
  for (double s : snaps) {
    if (grid.step_of(s) < 1) {
      throw ConfigError(fmt::format("snapshot time {} is not on the time grid (dt = {})", s, grid.dt()));
    }
  }
  Problem problem = make_problem(config);
  const ScalarFunction u0 = problem.u0;
  CoupledStepper stepper(mesh, sc, std::move(problem),
                         coupling_config(config));

  SimulateResult res;
  res.u_min = std::numeric_limits<double>::infinity();
  res.u_max = -res.u_min;
  std::filesystem::create_directories(config.output_dir);
  const auto ne = static_cast<std::size_t>(mesh.num_elements());
  int snap_index = 0;
  const auto observer = [&](const StepLog& entry, const StepResult& r) {
    res.u_min = std::min(res.u_min, entry.u_min);
    res.u_max = std::max(res.u_max, entry.u_max);
    const int n = grid.step_of(entry.time);
    for (double s : snaps) {
      if (grid.step_of(s) != n) {
        continue;
      }
      CellScalar u{"u", std::vector<double>(ne)};
      CellScalar phi{"phi", std::vector<double>(ne)};
      CellVector p{"p", std::vector<Eigen::Vector2d>(ne)};
      for (std::size_t e = 0; e < ne; ++e) {
        const int ei = static_cast<int>(e);
        u.values[e] = r.transport.u.mean(ei);
        phi.values[e] = r.poisson.phi.mean(ei);
        p.values[e] = {r.poisson.p.mean(ei, 0), r.poisson.p.mean(ei, 1)};
      }
      const std::string path =
          (std::filesystem::path(config.output_dir) / fmt::format("snapshot_{:02d}_step{:06d}.vtk", snap_index++, n))
              .string();
      write_vtk(mesh, {u, phi}, {p}, path);
      res.vtk_files.push_back(path);
      fmt::print(log, "t = {:.6g}: wrote {}\n", entry.time, path);
    }
  };
  Trajectory traj = run(stepper, initialize(u0, mesh, config.k), grid, {}, observer);
  res.log = traj.log;

  std::string csv = "t,u_min,u_max,iterations\n";
  for (const auto& s : traj.log) {
    csv += fmt::format("{},{},{},{}\n", format_number(s.time), format_number(s.u_min), format_number(s.u_max),
                       s.iterations);
  }
  write_text(config.output_dir, "timeseries.csv", csv);
  fmt::print(log, "{} steps, u range [{:.6g}, {:.6g}]\n", grid.steps(), res.u_min, res.u_max);
  return res;
}

std::vector<ProjectionRow> run_project_check(const RunConfig& config, std::ostream& log) {
  validate(config);
  const int k = config.k;
  const double t = config.project_time;
  const ScalarFunction u = [t](double x, double y) { return Example1::u(x, y, t); };
  const ScalarFunction phi = [t](double x, double y) { return Example1::phi(x, y, t); };
  const VectorFunction p = [t](double x, double y) { return Example1::p(x, y, t); };
  const SpaceTimeFunction u_st = &Example1::u;
  const SpaceTimeFunction phi_st = &Example1::phi;
  const std::function<Eigen::Vector2d(double, double, double)> p_st = &Example1::p;

  std::vector<ProjectionRow> rows;
  const auto add = [&](const std::string& name, int order, int level, double h, double err) {
    std::optional<double> rate;
    if (!rows.empty() && rows.back().name == name) {
      rate = observed_rate(rows.back().error, err);
    }
    rows.push_back({name, order, level, h, err, rate});
  };
  // Rows are grouped by projection, so collect per level first.
  struct LevelErrors {
    int level;
    double h;
    std::vector<std::pair<std::string, std::pair<int, double>>> errs;
  };
  std::vector<LevelErrors> all;
  for (int level : config.levels) {
    const Mesh mesh = level_mesh(level);
    LevelErrors le{level, mesh.h_max(), {}};
    le.errs.push_back({"Pi_k_interior", {k + 1, l2_error(l2_project_element(u, k, mesh), u_st, t, mesh)}});
    le.errs.push_back({"Pi_k+1_interior", {k + 2, l2_error(l2_project_element(u, k + 1, mesh), u_st, t, mesh)}});
    le.errs.push_back({"Pi_k_face", {k + 1, face_error(l2_project_face(u, k, mesh), u_st, t, mesh)}});
    const HdgProjection hi = hdg_project(p, phi, k + 1, config.tau, mesh);
    le.errs.push_back({"Pi_V", {k + 2, l2_error(hi.flux, p_st, t, mesh)}});
    le.errs.push_back({"Pi_W", {k + 2, l2_error(hi.scalar, phi_st, t, mesh)}});
    const HdgProjection lo = hdg_project(p, phi, k, config.tau, mesh);
    le.errs.push_back({"Pi_V_degree_k", {k + 1, l2_error(lo.flux, p_st, t, mesh)}});
    le.errs.push_back({"Pi_W_degree_k", {k + 1, l2_error(lo.scalar, phi_st, t, mesh)}});
    all.push_back(std::move(le));
  }
  for (std::size_t j = 0; j < all.front().errs.size(); ++j) {
    for (const auto& le : all) {
      const auto& [name, v] = le.errs[j];
      add(name, v.first, le.level, le.h, v.second);
    }
  }
  const std::string csv = projection_csv(rows);
  if (!config.output_dir.empty()) {
    write_text(config.output_dir, "projection.csv", csv);
  }
  fmt::print(log, "{}", csv);
  return rows;
}

std::string projection_csv(const std::vector<ProjectionRow>& rows) {
  std::string out = "projection,expected_order,level,h,error,rate,status\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.name, r.expected_order, r.level, format_number(r.h),
                       format_number(r.error), r.rate ? format_number(*r.rate) : std::string(),
                       r.error <= 1e-12 ? "exact" : "");
  }
  return out;
}

} // namespace hdgdd
