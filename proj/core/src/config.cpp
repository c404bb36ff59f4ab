#include "hdgdd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "hdgdd/error.hpp"
#include "hdgdd/timestepping.hpp"

namespace hdgdd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

double parse_double(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(d)) {
      throw std::invalid_argument(v);
    }
    return d;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("line {}: '{}' is not a number", line, v));
  }
}

int parse_int(const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    const long i = std::stol(v, &pos);
    if (pos != v.size()) {
      throw std::invalid_argument(v);
    }
    return static_cast<int>(i);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("line {}: '{}' is not an integer", line, v));
  }
}

ProblemKind parse_problem(const std::string& v, int line) {
  if (v == "example1") {
    return ProblemKind::example1;
  }
  if (v == "example2") {
    return ProblemKind::example2;
  }
  if (v == "zero") {
    return ProblemKind::zero;
  }
  throw ConfigError(fmt::format("line {}: unknown problem '{}'", line, v));
}

std::string join_numbers(const auto& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? "," : "") + fmt::format("{}", values[i]);
  }
  return out;
}

} // namespace

std::string to_string(ProblemKind kind) {
  switch (kind) {
  case ProblemKind::example1: return "example1";
  case ProblemKind::example2: return "example2";
  case ProblemKind::zero: return "zero";
  }
  return "example1";
}

double RunConfig::resolved_eps() const {
  if (eps) {
    return *eps;
  }
  switch (problem) {
  case ProblemKind::example1: return 0.1;
  case ProblemKind::example2: return 1e-2;
  case ProblemKind::zero: return 1.0;
  }
  return 1.0;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::stringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) {
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected key = value", line));
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key == "k") {
      c.k = parse_int(value, line);
    } else if (key == "levels") {
      c.levels.clear();
      for (const auto& v : split(value, ',')) {
        c.levels.push_back(parse_int(v, line));
      }
    } else if (key == "eps") {
      c.eps = parse_double(value, line);
    } else if (key == "tau") {
      c.tau = parse_double(value, line);
    } else if (key == "dt") {
      if (value != "auto" && value != "h" && value != "h^1.5") {
        parse_double(value, line);
      }
      c.dt = value;
    } else if (key == "t_final") {
      c.t_final = parse_double(value, line);
    } else if (key == "coupling_rel_tol") {
      c.coupling_rel_tol = parse_double(value, line);
    } else if (key == "coupling_abs_tol") {
      c.coupling_abs_tol = parse_double(value, line);
    } else if (key == "coupling_max_iter") {
      c.coupling_max_iter = parse_int(value, line);
    } else if (key == "coupling_anderson_depth") {
      c.coupling_anderson_depth = parse_int(value, line);
    } else if (key == "snapshots") {
      c.snapshots.clear();
      for (const auto& v : split(value, ',')) {
        c.snapshots.push_back(parse_double(v, line));
      }
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "threads") {
      c.threads = parse_int(value, line);
    } else if (key == "problem") {
      c.problem = parse_problem(value, line);
    } else if (key == "mesh_n") {
      c.mesh_n = parse_int(value, line);
    } else if (key == "mesh_file") {
      c.mesh_file = value;
    } else if (key == "project_time") {
      c.project_time = parse_double(value, line);
    } else {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", line, key));
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot read config file '{}'", path));
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  out += fmt::format("problem = {}\n", to_string(c.problem));
  out += fmt::format("k = {}\n", c.k);
  out += fmt::format("levels = {}\n", join_numbers(c.levels));
  if (c.eps) {
    out += fmt::format("eps = {}\n", *c.eps);
  }
  out += fmt::format("tau = {}\n", c.tau);
  out += fmt::format("dt = {}\n", c.dt);
  out += fmt::format("t_final = {}\n", c.t_final);
  out += fmt::format("coupling_rel_tol = {}\n", c.coupling_rel_tol);
  out += fmt::format("coupling_abs_tol = {}\n", c.coupling_abs_tol);
  out += fmt::format("coupling_max_iter = {}\n", c.coupling_max_iter);
  out += fmt::format("coupling_anderson_depth = {}\n", c.coupling_anderson_depth);
  if (!c.snapshots.empty()) {
    out += fmt::format("snapshots = {}\n", join_numbers(c.snapshots));
  }
  out += fmt::format("output_dir = {}\n", c.output_dir);
  out += fmt::format("threads = {}\n", c.threads);
  out += fmt::format("mesh_n = {}\n", c.mesh_n);
  if (!c.mesh_file.empty()) {
    out += fmt::format("mesh_file = {}\n", c.mesh_file);
  }
  out += fmt::format("project_time = {}\n", c.project_time);
  return out;
}

void validate(const RunConfig& c) {
  if (c.k < 0 || c.k > 2) {
    throw ConfigError(fmt::format("k must be 0, 1 or 2 (got {})", c.k));
  }
  if (c.levels.empty()) {
    throw ConfigError("levels must not be empty");
  }
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    if (c.levels[i] < 0 || c.levels[i] > 9) {
      throw ConfigError(fmt::format("level {} outside 0..9", c.levels[i]));
    }
    if (i > 0 && c.levels[i] != c.levels[i - 1] + 1) {
      throw ConfigError("levels must be consecutive and increasing");
    }
  }
  if (!(c.resolved_eps() > 0.0)) {
    throw ConfigError("eps must be positive");
  }
  if (!(c.tau > 0.0)) {
    throw ConfigError("tau must be positive");
  }
  if (!(c.t_final > 0.0)) {
    throw ConfigError("t_final must be positive");
  }
  if (c.dt != "auto" && c.dt != "h" && c.dt != "h^1.5" && !(std::stod(c.dt) > 0.0)) {
    throw ConfigError("dt must be positive");
  }
  if (!(c.coupling_rel_tol > 0.0) || !(c.coupling_abs_tol > 0.0) || c.coupling_max_iter < 1) {
    throw ConfigError("coupling tolerances must be positive and coupling_max_iter >= 1");
  }
  if (c.coupling_anderson_depth < 0 || c.coupling_anderson_depth > 10) {
    throw ConfigError("coupling_anderson_depth must be in 0..10");
  }
  if (c.threads < 1) {
    throw ConfigError("threads must be >= 1");
  }
  if (c.mesh_n < 1) {
    throw ConfigError("mesh_n must be >= 1");
  }
  for (double s : c.snapshots) {
    if (!(s > 0.0) || s > c.t_final + 1e-12) {
      throw ConfigError(fmt::format("snapshot time {} outside (0, t_final]", s));
    }
  }
}

ResolvedStep resolve_dt(const RunConfig& c, double h) {
  double requested = 0.0;
  std::string rule = c.dt;
  if (rule == "auto") {
    rule = c.k == 0 ? "h" : "h^1.5";
  }
  if (rule == "h") {
    requested = h;
  } else if (rule == "h^1.5") {
    requested = std::pow(h, 1.5);
  } else {
    requested = std::stod(rule);
  }
  const double dt = TimeGrid::divisor_step(c.t_final, requested);
  return {dt, std::abs(dt - requested) > 1e-14 * requested, requested};
}

} // namespace hdgdd
