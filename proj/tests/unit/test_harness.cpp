#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "hdgdd/config.hpp"
#include "hdgdd/drivers.hpp"
#include "hdgdd/eoc.hpp"
#include "hdgdd/error.hpp"
#include "hdgdd/mesh.hpp"
#include "hdgdd/vtk.hpp"

namespace hdgdd {
namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hdgdd_harness_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    out.push_back(line);
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

// Two triangles touching at one vertex: 5 points, 2 cells.
Mesh bowtie() {
  return Mesh({{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}, {0.0, 1.0}}, {Element{{0, 1, 2}}, Element{{2, 3, 4}}});
}

// ---- config ----

TEST(Config, DefaultsMatchDocumentedValues) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.k, 0);
  EXPECT_EQ(c.levels, (std::vector<int>{1, 2, 3, 4, 5}));
  EXPECT_EQ(c.dt, "auto");
  EXPECT_DOUBLE_EQ(c.t_final, 1.0);
  EXPECT_DOUBLE_EQ(c.resolved_eps(), 0.1);
  EXPECT_EQ(c.problem, ProblemKind::example1);
}

TEST(Config, ParsesEveryKeyWithCommentsAndBlankLines) {
  const std::string text = "# example run\n"
                           "problem = example2\n"
                           "\n"
                           "k = 1   # degree\n"
                           "levels = 2,3,4\n"
                           "eps = 0.05\n"
                           "tau = 2\n"
                           "dt = h^1.5\n"
                           "t_final = 0.5\n"
                           "coupling_rel_tol = 1e-9\n"
                           "coupling_abs_tol = 1e-13\n"
                           "coupling_max_iter = 30\n"
                           "coupling_anderson_depth = 0\n"
                           "snapshots = 0.1, 0.5\n"
                           "output_dir = results\n"
                           "threads = 3\n"
                           "mesh_n = 20\n"
                           "mesh_file = grid.txt\n"
                           "project_time = 0.25\n";
  const RunConfig c = parse_config(text);
  EXPECT_EQ(c.problem, ProblemKind::example2);
  EXPECT_EQ(c.k, 1);
  EXPECT_EQ(c.levels, (std::vector<int>{2, 3, 4}));
  ASSERT_TRUE(c.eps.has_value());
  EXPECT_DOUBLE_EQ(*c.eps, 0.05);
  EXPECT_DOUBLE_EQ(c.tau, 2.0);
  EXPECT_EQ(c.dt, "h^1.5");
  EXPECT_DOUBLE_EQ(c.t_final, 0.5);
  EXPECT_DOUBLE_EQ(c.coupling_rel_tol, 1e-9);
  EXPECT_DOUBLE_EQ(c.coupling_abs_tol, 1e-13);
  EXPECT_EQ(c.coupling_max_iter, 30);
  EXPECT_EQ(c.coupling_anderson_depth, 0);
  EXPECT_EQ(c.snapshots, (std::vector<double>{0.1, 0.5}));
  EXPECT_EQ(c.output_dir, "results");
  EXPECT_EQ(c.threads, 3);
  EXPECT_EQ(c.mesh_n, 20);
  EXPECT_EQ(c.mesh_file, "grid.txt");
  EXPECT_DOUBLE_EQ(c.project_time, 0.25);
}

TEST(Config, ProblemDefaultEps) {
  EXPECT_DOUBLE_EQ(parse_config("problem = example2").resolved_eps(), 1e-2);
  EXPECT_DOUBLE_EQ(parse_config("problem = zero").resolved_eps(), 1.0);
  EXPECT_DOUBLE_EQ(parse_config("problem = example2\neps = 0.3").resolved_eps(), 0.3);
}

TEST(Config, SerializeParseIsIdempotent) {
  const std::vector<std::string> inputs = {
      "",
      "problem = example2\nk = 2\nlevels = 0,1\neps = 0.01\ndt = 0.002\nsnapshots = 0.01,0.4,0.7,1\nmesh_n = 50\n",
      "problem = zero\ndt = h\nmesh_file = a b.txt\nthreads = 4\ncoupling_rel_tol = 3.5e-11\n",
  };
  for (const auto& text : inputs) {
    const std::string once = serialize_config(parse_config(text));
    const std::string twice = serialize_config(parse_config(once));
    EXPECT_EQ(once, twice) << text;
  }
}

TEST(Config, SerializeRoundTripsNonTrivialDoubles) {
  RunConfig c;
  c.eps = 0.1 + 0.2;
  c.t_final = 1.0 / 3.0;
  c.snapshots = {1.0 / 7.0};
  const RunConfig back = parse_config(serialize_config(c));
  ASSERT_TRUE(back.eps.has_value());
  EXPECT_EQ(*back.eps, *c.eps);
  EXPECT_EQ(back.t_final, c.t_final);
  EXPECT_EQ(back.snapshots, c.snapshots);
}

TEST(Config, MalformedInputReportsLine) {
  const auto expect_line = [](const std::string& text, const std::string& needle) {
    try {
      (void)parse_config(text);
      FAIL() << "accepted: " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_line("k = 0\nbogus = 1\n", "line 2");
  expect_line("k = 0\nbogus = 1\n", "bogus");
  expect_line("k\n", "line 1");
  expect_line("k = one\n", "not an integer");
  expect_line("tau = 1x\n", "not a number");
  expect_line("dt = fast\n", "line 1");
  expect_line("problem = example3\n", "example3");
  expect_line("k = 1.5\n", "line 1");
}

TEST(Config, ValidateRejectsOutOfRange) {
  const std::vector<std::string> bad = {
      "k = 3",          "k = -1",           "levels = 3,2",  "levels = 2,4",     "eps = 0",
      "tau = -1",       "t_final = 0",      "dt = -0.1",     "threads = 0",      "mesh_n = 0",
      "snapshots = 2",  "snapshots = 0",    "coupling_max_iter = 0",             "coupling_rel_tol = 0",
      "coupling_anderson_depth = 11",
  };
  for (const auto& text : bad) {
    EXPECT_THROW(validate(parse_config(text)), ConfigError) << text;
  }
  EXPECT_NO_THROW(validate(parse_config("")));
  EXPECT_NO_THROW(validate(parse_config("k = 2\nlevels = 1\nsnapshots = 0.5,1")));
}

TEST(Config, LoadMissingFileIsConfigError) {
  EXPECT_THROW((void)load_config("/nonexistent/dir/run.cfg"), ConfigError);
}

TEST(Config, LoadReadsFile) {
  const auto dir = scratch_dir("load");
  const auto path = (dir / "run.cfg").string();
  std::ofstream(path) << "k = 1\nlevels = 1,2\n";
  const RunConfig c = load_config(path);
  EXPECT_EQ(c.k, 1);
  EXPECT_EQ(c.levels, (std::vector<int>{1, 2}));
}

// ---- dt rule ----

TEST(ResolveDt, RulesAndDivisorAdjustment) {
  RunConfig c;
  c.dt = "h";
  auto s = resolve_dt(c, 0.25);
  EXPECT_DOUBLE_EQ(s.dt, 0.25);
  EXPECT_FALSE(s.adjusted);

  // sqrt(2)/4 does not divide 1: ceil(1/0.3536) = 3 steps.
  s = resolve_dt(c, std::sqrt(2.0) / 4.0);
  EXPECT_TRUE(s.adjusted);
  EXPECT_NEAR(s.dt, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.requested, std::sqrt(2.0) / 4.0, 1e-15);
  EXPECT_LE(s.dt, s.requested);

  c.dt = "h^1.5";
  s = resolve_dt(c, 0.25);
  EXPECT_DOUBLE_EQ(s.dt, 0.125);

  c.dt = "auto";
  c.k = 0;
  EXPECT_DOUBLE_EQ(resolve_dt(c, 0.25).dt, 0.25);
  c.k = 1;
  EXPECT_DOUBLE_EQ(resolve_dt(c, 0.25).dt, 0.125);

  c.dt = "0.002";
  s = resolve_dt(c, 1.0);
  EXPECT_NEAR(s.dt, 0.002, 1e-15);
  EXPECT_NEAR(1.0 / s.dt, 500.0, 1e-9);

  c.dt = "0.3";
  c.t_final = 1.0;
  s = resolve_dt(c, 1.0);
  EXPECT_NEAR(s.dt, 0.25, 1e-15);
  EXPECT_TRUE(s.adjusted);
}

TEST(ResolveDt, AlwaysDividesFinalTime) {
  RunConfig c;
  c.t_final = 0.7;
  for (int level = 1; level <= 6; ++level) {
    for (const char* rule : {"h", "h^1.5"}) {
      c.dt = rule;
      const double h = std::sqrt(2.0) * std::pow(2.0, -level);
      const auto s = resolve_dt(c, h);
      const double steps = c.t_final / s.dt;
      EXPECT_NEAR(steps, std::round(steps), 1e-9) << rule << " level " << level;
      EXPECT_LE(s.dt, s.requested * (1.0 + 1e-14));
    }
  }
}

// ---- VTK ----

TEST(Vtk, TwoTriangleFileHasFivePointsTwoCells) {
  const Mesh mesh = bowtie();
  const std::string text = vtk_string(mesh, {{"u", {1.5, -2.0}}}, {});
  const auto lines = split_lines(text);
  ASSERT_GE(lines.size(), 4u);
  EXPECT_EQ(lines[0], "# vtk DataFile Version 3.0");
  EXPECT_EQ(lines[2], "ASCII");
  EXPECT_EQ(lines[3], "DATASET UNSTRUCTURED_GRID");
  EXPECT_NE(text.find("POINTS 5 double\n"), std::string::npos);
  EXPECT_NE(text.find("CELLS 2 8\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_TYPES 2\n5\n5\n"), std::string::npos);
  EXPECT_NE(text.find("CELL_DATA 2\n"), std::string::npos);
  EXPECT_EQ(text.find("POINT_DATA"), std::string::npos);

  const VtkData d = parse_vtk(text);
  EXPECT_EQ(d.points.size(), 5u);
  ASSERT_EQ(d.cells.size(), 2u);
  EXPECT_EQ(d.cells[1], (std::array<int, 3>{2, 3, 4}));
  ASSERT_EQ(d.scalars.count("u"), 1u);
  EXPECT_EQ(d.scalars.at("u"), (std::vector<double>{1.5, -2.0}));
}

TEST(Vtk, VectorsAreThreeComponentWithZeroZ) {
  const Mesh mesh = bowtie();
  const std::string text = vtk_string(mesh, {}, {{"p", {{0.25, -1.0}, {3.0, 4.0}}}});
  EXPECT_NE(text.find("VECTORS p double\n0.25 -1 0\n3 4 0\n"), std::string::npos);
  const VtkData d = parse_vtk(text);
  ASSERT_EQ(d.vectors.count("p"), 1u);
  EXPECT_EQ(d.vectors.at("p")[0], Eigen::Vector3d(0.25, -1.0, 0.0));
  EXPECT_EQ(d.vectors.at("p")[1], Eigen::Vector3d(3.0, 4.0, 0.0));
}

TEST(Vtk, RoundTripRecoversValuesExactly) {
  const Mesh mesh = build_structured_unit_square(3);
  const auto ne = static_cast<std::size_t>(mesh.num_elements());
  CellScalar a{"a", {}};
  CellScalar b{"b", {}};
  CellVector v{"v", {}};
  for (std::size_t e = 0; e < ne; ++e) {
    const double t = static_cast<double>(e) + 1.0;
    a.values.push_back(1.0 / t);
    b.values.push_back(std::sqrt(t) * 1e-300);
    v.values.emplace_back(std::exp(-t), -std::cos(t) * 1e17);
  }
  const auto dir = scratch_dir("vtk");
  const auto path = (dir / "field.vtk").string();
  write_vtk(mesh, {a, b}, {v}, path);
  const VtkData d = read_vtk(path);
  ASSERT_EQ(d.points.size(), static_cast<std::size_t>(mesh.num_vertices()));
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    EXPECT_EQ(d.points[static_cast<std::size_t>(i)].x, mesh.vertices()[static_cast<std::size_t>(i)].x);
    EXPECT_EQ(d.points[static_cast<std::size_t>(i)].y, mesh.vertices()[static_cast<std::size_t>(i)].y);
  }
  EXPECT_EQ(d.scalars.at("a"), a.values);
  EXPECT_EQ(d.scalars.at("b"), b.values);
  for (std::size_t e = 0; e < ne; ++e) {
    EXPECT_EQ(d.vectors.at("v")[e].head<2>(), v.values[e]);
  }
}

TEST(Vtk, ByteStableAcrossWrites) {
  const Mesh mesh = build_structured_unit_square(4);
  std::vector<double> vals(static_cast<std::size_t>(mesh.num_elements()));
  for (std::size_t e = 0; e < vals.size(); ++e) {
    vals[e] = std::sin(static_cast<double>(e));
  }
  const auto dir = scratch_dir("stable");
  write_vtk(mesh, {{"s", vals}}, {}, (dir / "a.vtk").string());
  write_vtk(mesh, {{"s", vals}}, {}, (dir / "b.vtk").string());
  EXPECT_EQ(slurp((dir / "a.vtk").string()), slurp((dir / "b.vtk").string()));
}

TEST(Vtk, Errors) {
  const Mesh mesh = bowtie();
  EXPECT_THROW((void)vtk_string(mesh, {{"u", {1.0}}}, {}), InputError);
  EXPECT_THROW((void)vtk_string(mesh, {}, {{"p", {Eigen::Vector2d::Zero()}}}), InputError);
  EXPECT_THROW(write_vtk(mesh, {{"u", {1.0, 2.0}}}, {}, "/nonexistent/dir/x.vtk"), std::runtime_error);
  EXPECT_THROW((void)parse_vtk("# vtk DataFile Version 3.0\n"), InputError);
}

// ---- CSV ----

TEST(Csv, ConvergenceSchemaAndBlankRates) {
  const std::vector<ErrorReport> reports = {{1, 0.5, 4e-2, 1e-2, 3e-1, 2e-2}, {2, 0.25, 1e-2, 2.5e-3, 1.5e-1, 5e-3}};
  const std::string csv = eoc_csv(eoc_table(reports));
  const auto lines = split_lines(csv);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "level,h,err_u,rate_u,err_phi,rate_phi,err_q,rate_q,err_p,rate_p");
  const auto first = split_csv(lines[1]);
  ASSERT_EQ(first.size(), 10u);
  for (int col : {3, 5, 7, 9}) {
    EXPECT_EQ(first[static_cast<std::size_t>(col)], "") << col;
  }
  EXPECT_EQ(first[2], format_number(4e-2));
  const auto second = split_csv(lines[2]);
  ASSERT_EQ(second.size(), 10u);
  EXPECT_EQ(second[3], format_number(2.0));
  EXPECT_EQ(second[7], format_number(1.0));
}

TEST(Csv, NumberFormatSixSignificantDigits) {
  EXPECT_EQ(format_number(4.2730e-02), "4.27300e-02");
  EXPECT_EQ(format_number(1.0), "1.00000e+00");
  EXPECT_EQ(format_number(1234567.0), "1.23457e+06");
}

TEST(Csv, ProjectionRowsFlagExactZeros) {
  const std::vector<ProjectionRow> rows = {{"Pi_k_interior", 1, 1, 0.5, 0.0, std::nullopt},
                                           {"Pi_k_interior", 1, 2, 0.25, 1e-14, std::nullopt},
                                           {"Pi_W", 2, 1, 0.5, 3e-3, std::nullopt},
                                           {"Pi_W", 2, 2, 0.25, 7.5e-4, 2.0}};
  const auto lines = split_lines(projection_csv(rows));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "projection,expected_order,level,h,error,rate,status");
  EXPECT_EQ(split_csv(lines[1]).back(), "exact");
  EXPECT_EQ(split_csv(lines[2]).back(), "exact");
  EXPECT_EQ(split_csv(lines[3]).back(), "");
  EXPECT_EQ(split_csv(lines[3])[5], "");
  EXPECT_EQ(split_csv(lines[4])[5], format_number(2.0));
}

// ---- drivers ----

TEST(Drivers, LevelMeshSize) {
  for (int level = 0; level <= 4; ++level) {
    const Mesh m = level_mesh(level);
    const int n = 1 << level;
    EXPECT_EQ(m.num_elements(), 2 * n * n);
    EXPECT_NEAR(m.h_max() / std::sqrt(2.0), std::pow(2.0, -level), 1e-14);
  }
}

TEST(Drivers, SingleLevelConvergenceHasEmptyRates) {
  RunConfig c;
  c.levels = {1};
  c.output_dir = scratch_dir("conv1").string();
  std::ostringstream log;
  const ConvergenceResult r = run_convergence(c, log);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_FALSE(r.rows[0].rate_u.has_value());
  EXPECT_FALSE(r.rows[0].rate_p.has_value());
  EXPECT_GT(r.rows[0].report.err_u, 0.0);
  const auto lines = split_lines(slurp(c.output_dir + "/convergence.csv"));
  ASSERT_EQ(lines.size(), 2u);
  const auto cells = split_csv(lines[1]);
  ASSERT_EQ(cells.size(), 10u);
  EXPECT_EQ(cells[0], "1");
  for (int col : {3, 5, 7, 9}) {
    EXPECT_EQ(cells[static_cast<std::size_t>(col)], "");
  }
  EXPECT_EQ(r.levels[0].steps, 2);  // dt = sqrt(2)/2 rounded down to 1/2
}

TEST(Drivers, ConvergenceIsDeterministic) {
  RunConfig c;
  c.levels = {1, 2};
  c.output_dir = "";
  std::ostringstream l1;
  std::ostringstream l2;
  const auto a = run_convergence(c, l1);
  const auto b = run_convergence(c, l2);
  EXPECT_EQ(eoc_csv(a.rows), eoc_csv(b.rows));
}

TEST(Drivers, ZeroProblemGivesAllZeroFields) {
  RunConfig c = parse_config("problem = zero\nk = 1\nmesh_n = 3\ndt = 0.25\nsnapshots = 0.5,1\n");
  c.output_dir = scratch_dir("zero").string();
  std::ostringstream log;
  const SimulateResult r = run_simulate(c, log);
  ASSERT_EQ(r.vtk_files.size(), 2u);
  EXPECT_EQ(r.log.size(), 4u);
  for (const auto& f : r.vtk_files) {
    const VtkData d = read_vtk(f);
    ASSERT_EQ(d.cells.size(), 18u);
    for (const char* name : {"u", "phi"}) {
      for (double v : d.scalars.at(name)) {
        EXPECT_EQ(v, 0.0) << name;
      }
    }
    for (const auto& v : d.vectors.at("p")) {
      EXPECT_EQ(v.norm(), 0.0);
    }
  }
  const auto ts = split_lines(slurp(c.output_dir + "/timeseries.csv"));
  ASSERT_EQ(ts.size(), 5u);
  EXPECT_EQ(ts[0], "t,u_min,u_max,iterations");
}

TEST(Drivers, SnapshotOffGridIsConfigError) {
  RunConfig c = parse_config("problem = zero\nmesh_n = 2\ndt = 0.25\nsnapshots = 0.3\n");
  c.output_dir = scratch_dir("offgrid").string();
  std::ostringstream log;
  EXPECT_THROW((void)run_simulate(c, log), ConfigError);
}

TEST(Drivers, SnapshotStepIndexInFileName) {
  RunConfig c = parse_config("problem = zero\nmesh_n = 1\ndt = 0.001\nt_final = 0.01\nsnapshots = 0.01\n");
  c.output_dir = scratch_dir("step10").string();
  std::ostringstream log;
  const SimulateResult r = run_simulate(c, log);
  ASSERT_EQ(r.vtk_files.size(), 1u);
  EXPECT_NE(r.vtk_files[0].find("step000010"), std::string::npos) << r.vtk_files[0];
}

TEST(Drivers, ProjectCheckOrders) {
  RunConfig c;
  c.k = 1;
  c.levels = {2, 3, 4};
  c.output_dir = "";
  std::ostringstream log;
  const auto rows = run_project_check(c, log);
  int checked = 0;
  for (const auto& r : rows) {
    if (r.level == 4 && (r.name == "Pi_k+1_interior" || r.name == "Pi_k_interior" || r.name == "Pi_W")) {
      ASSERT_TRUE(r.rate.has_value()) << r.name;
      EXPECT_NEAR(*r.rate, r.expected_order, 0.15) << r.name;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 3);
}

TEST(Drivers, MeshFileIsUsedForSimulation) {
  const auto dir = scratch_dir("meshfile");
  const auto path = (dir / "mesh.txt").string();
  {
    std::ofstream out(path);
    write_mesh(build_structured_unit_square(2), out);
  }
  RunConfig c = parse_config("problem = zero\n");
  c.mesh_file = path;
  EXPECT_EQ(simulation_mesh(c).num_elements(), 8);
  c.mesh_file = (dir / "missing.txt").string();
  EXPECT_THROW((void)simulation_mesh(c), ConfigError);
}

} // namespace
} // namespace hdgdd
