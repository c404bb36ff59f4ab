// hdgdd convergence | simulate | project-check
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <hdgdd/config.hpp>
#include <hdgdd/drivers.hpp>
#include <hdgdd/error.hpp>

namespace {

constexpr int exit_config = 1;
constexpr int exit_solver = 2;

struct Overrides {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<int> threads;
  std::optional<int> k;
  std::vector<int> levels;
};

hdgdd::RunConfig resolve(const Overrides& o, const std::string& command) {
  hdgdd::RunConfig c = o.config_path.empty() ? hdgdd::RunConfig{} : hdgdd::load_config(o.config_path);
  if (o.out) {
    c.output_dir = *o.out;
  }
  if (o.threads) {
    c.threads = *o.threads;
  }
  if (o.k) {
    c.k = *o.k;
  }
  if (!o.levels.empty()) {
    c.levels = o.levels;
    if (command == "simulate") {
      if (o.levels.size() != 1 || o.levels.front() < 0 || o.levels.front() > 12) {
        throw hdgdd::ConfigError("simulate takes a single --level-override in 0..12");
      }
      c.mesh_n = 1 << o.levels.front();
      c.mesh_file.clear();
    }
  }
  if (command == "convergence" && c.k > 1) {
    throw hdgdd::ConfigError(fmt::format("convergence runs support k = 0 or 1 (got {})", c.k));
  }
  hdgdd::validate(c);
  return c;
}

int run(const std::string& command, const hdgdd::RunConfig& c) {
  if (command == "convergence") {
    (void)hdgdd::run_convergence(c, std::cout);
  } else if (command == "simulate") {
    const auto r = hdgdd::run_simulate(c, std::cout);
    fmt::print("{} snapshot(s) in {}\n", r.vtk_files.size(), c.output_dir);
  } else {
    (void)hdgdd::run_project_check(c, std::cout);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"HDG drift-diffusion solver"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "key = value run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory");
  app.add_option("--threads", o.threads, "assembly threads")->check(CLI::PositiveNumber);
  app.add_option("--k", o.k, "polynomial degree");
  app.add_option("--level-override", o.levels,
                 "mesh levels (n = 2^level); simulate takes one level")
      ->delimiter(',');

  app.add_subcommand("convergence", "Example 1 error table over mesh levels");
  app.add_subcommand("simulate", "time integration with VTK snapshots");
  app.add_subcommand("project-check", "projection error orders on the Example 1 fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);
    return exit_config;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  hdgdd::RunConfig config;
  try {
    config = resolve(o, command);
  } catch (const std::exception& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return exit_config;
  }

  try {
    return run(command, config);
  } catch (const hdgdd::ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    fmt::print(stderr, "{} failed: {}\n", command, e.what());
    return exit_solver;
  }
}
