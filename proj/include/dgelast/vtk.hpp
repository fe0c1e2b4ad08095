#pragma once

#include "dgelast/space.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dgelast {

/// Legacy ASCII unstructured grid. Every triangle gets its own three
/// points so DG jumps stay visible; fields become POINT_DATA vectors and
/// cell arrays (e.g. eta_K) become CELL_DATA scalars.
void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<std::pair<std::string, const DgField*>>& fields,
               const std::vector<std::pair<std::string, Vector>>& cell_data = {});
void write_vtk_file(const std::string& path, const Mesh& mesh,
                    const std::vector<std::pair<std::string, const DgField*>>& fields,
                    const std::vector<std::pair<std::string, Vector>>& cell_data = {});

}  // namespace dgelast
