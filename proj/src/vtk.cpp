#include "dgelast/vtk.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dgelast {

void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<std::pair<std::string, const DgField*>>& fields,
               const std::vector<std::pair<std::string, Vector>>& cell_data) {
  const int nt = mesh.num_triangles();
  for (const auto& [name, f] : fields)
    if (&f->space().mesh() != &mesh) throw IncompatibleError("vtk field '" + name + "' lives on another mesh");
  for (const auto& [name, v] : cell_data)
    if (v.size() != nt) throw IncompatibleError("vtk cell array '" + name + "' has wrong length");

  std::ostringstream s;
  s.precision(12);
  s << "# vtk DataFile Version 3.0\ndgelast output\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  s << "POINTS " << 3 * nt << " double\n";
  for (int k = 0; k < nt; ++k)
    for (int j = 0; j < 3; ++j) {
      const Vec2& p = mesh.vertex(mesh.triangle(k)[j]);
      s << p.x() << " " << p.y() << " 0\n";
    }
  s << "CELLS " << nt << " " << 4 * nt << "\n";
  for (int k = 0; k < nt; ++k) s << "3 " << 3 * k << " " << 3 * k + 1 << " " << 3 * k + 2 << "\n";
  s << "CELL_TYPES " << nt << "\n";
  for (int k = 0; k < nt; ++k) s << "5\n";
  if (!fields.empty()) {
    s << "POINT_DATA " << 3 * nt << "\n";
    for (const auto& [name, f] : fields) {
      s << "VECTORS " << name << " double\n";
      for (int k = 0; k < nt; ++k)
        for (int j = 0; j < 3; ++j) {
          const Vec2 v = f->value(k, mesh.vertex(mesh.triangle(k)[j]));
          s << v.x() << " " << v.y() << " 0\n";
        }
    }
  }
  if (!cell_data.empty()) {
    s << "CELL_DATA " << nt << "\n";
    for (const auto& [name, v] : cell_data) {
      s << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (int k = 0; k < nt; ++k) s << v[k] << "\n";
    }
  }
  out << s.str();
}

void write_vtk_file(const std::string& path, const Mesh& mesh,
                    const std::vector<std::pair<std::string, const DgField*>>& fields,
                    const std::vector<std::pair<std::string, Vector>>& cell_data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_vtk(out, mesh, fields, cell_data);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace dgelast
