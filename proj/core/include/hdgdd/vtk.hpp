#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hdgdd/mesh.hpp"

namespace hdgdd {

struct CellScalar {
  std::string name;
  std::vector<double> values;
};

struct CellVector {
  std::string name;
  std::vector<Eigen::Vector2d> values;
};

/// Legacy VTK 3.0 ASCII unstructured grid with triangle cells and cell data.
/// Values are written with 17 significant digits. Throws InputError on a
/// length mismatch and std::runtime_error if the file cannot be written.
void write_vtk(const Mesh& mesh, const std::vector<CellScalar>& scalars, const std::vector<CellVector>& vectors,
               const std::string& path);
[[nodiscard]] std::string vtk_string(const Mesh& mesh, const std::vector<CellScalar>& scalars,
                                     const std::vector<CellVector>& vectors);

/// Reader for files produced by write_vtk.
struct VtkData {
  std::vector<Point> points;
  std::vector<std::array<int, 3>> cells;
  std::map<std::string, std::vector<double>> scalars;
  std::map<std::string, std::vector<Eigen::Vector3d>> vectors;
};

[[nodiscard]] VtkData read_vtk(const std::string& path);
[[nodiscard]] VtkData parse_vtk(const std::string& text);

} // namespace hdgdd
