#include "hdgdd/vtk.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "hdgdd/error.hpp"

namespace hdgdd {

std::string vtk_string(const Mesh& mesh, const std::vector<CellScalar>& scalars,
                       const std::vector<CellVector>& vectors) {
  const auto ne = static_cast<std::size_t>(mesh.num_elements());
  for (const auto& s : scalars) {
    if (s.values.size() != ne) {
      throw InputError(fmt::format("cell field '{}' has {} values for {} cells", s.name, s.values.size(), ne));
    }
  }
  for (const auto& v : vectors) {
    if (v.values.size() != ne) {
      throw InputError(fmt::format("cell field '{}' has {} values for {} cells", v.name, v.values.size(), ne));
    }
  }
  fmt::memory_buffer out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "# vtk DataFile Version 3.0\nhdgdd\nASCII\nDATASET UNSTRUCTURED_GRID\n");
  fmt::format_to(it, "POINTS {} double\n", mesh.num_vertices());
  for (const Point& p : mesh.vertices()) {
    fmt::format_to(it, "{:.17g} {:.17g} 0\n", p.x, p.y);
  }
  fmt::format_to(it, "CELLS {} {}\n", ne, 4 * ne);
  for (const Element& el : mesh.elements()) {
    fmt::format_to(it, "3 {} {} {}\n", el.vertices[0], el.vertices[1], el.vertices[2]);
  }
  fmt::format_to(it, "CELL_TYPES {}\n", ne);
  for (std::size_t e = 0; e < ne; ++e) {
    fmt::format_to(it, "5\n");
  }
  if (!scalars.empty() || !vectors.empty()) {
    fmt::format_to(it, "CELL_DATA {}\n", ne);
  }
  for (const auto& s : scalars) {
    fmt::format_to(it, "SCALARS {} double 1\nLOOKUP_TABLE default\n", s.name);
    for (double v : s.values) {
      fmt::format_to(it, "{:.17g}\n", v);
    }
  }
  for (const auto& v : vectors) {
    fmt::format_to(it, "VECTORS {} double\n", v.name);
    for (const auto& x : v.values) {
      fmt::format_to(it, "{:.17g} {:.17g} 0\n", x.x(), x.y());
    }
  }
  return fmt::to_string(out);
}

void write_vtk(const Mesh& mesh, const std::vector<CellScalar>& scalars, const std::vector<CellVector>& vectors,
               const std::string& path) {
  const std::string text = vtk_string(mesh, scalars, vectors);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(fmt::format("cannot write '{}'", path));
  }
  out << text;
  if (!out) {
    throw std::runtime_error(fmt::format("write to '{}' failed", path));
  }
}

VtkData parse_vtk(const std::string& text) {
  std::istringstream in(text);
  VtkData d;
  std::string word;
  const auto fail = [](const std::string& what) { throw InputError("malformed VTK: " + what); };
  std::string line;
  for (int i = 0; i < 4; ++i) {
    if (!std::getline(in, line)) {
      fail("truncated header");
    }
  }
  std::size_t ncells = 0;
  while (in >> word) {
    if (word == "POINTS") {
      std::size_t n = 0;
      in >> n >> word;
      d.points.resize(n);
      double z = 0.0;
      for (auto& p : d.points) {
        in >> p.x >> p.y >> z;
      }
    } else if (word == "CELLS") {
      std::size_t size = 0;
      in >> ncells >> size;
      d.cells.resize(ncells);
      for (auto& c : d.cells) {
        int nv = 0;
        in >> nv >> c[0] >> c[1] >> c[2];
        if (nv != 3) {
          fail("non-triangle cell");
        }
      }
    } else if (word == "CELL_TYPES") {
      std::size_t n = 0;
      in >> n;
      for (std::size_t i = 0; i < n; ++i) {
        int type = 0;
        in >> type;
        if (type != 5) {
          fail("cell type other than 5");
        }
      }
    } else if (word == "CELL_DATA") {
      in >> ncells;
    } else if (word == "SCALARS") {
      std::string name;
      std::string type;
      int comps = 1;
      in >> name >> type >> comps >> word >> word;  // LOOKUP_TABLE default
      auto& v = d.scalars[name];
      v.resize(ncells);
      for (auto& x : v) {
        in >> x;
      }
    } else if (word == "VECTORS") {
      std::string name;
      std::string type;
      in >> name >> type;
      auto& v = d.vectors[name];
      v.resize(ncells);
      for (auto& x : v) {
        in >> x.x() >> x.y() >> x.z();
      }
    } else {
      fail("unexpected token '" + word + "'");
    }
    if (!in) {
      fail("truncated section " + word);
    }
  }
  return d;
}

VtkData read_vtk(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(fmt::format("cannot read '{}'", path));
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_vtk(ss.str());
}

} // namespace hdgdd
