// VTK legacy ASCII writer and the per-cell CSV export.
//
// Files are "# vtk DataFile Version 2.0" UNSTRUCTURED_GRID with quadratic
// hexahedra (cell type 25). POINT_DATA holds the vector "displacement";
// CELL_DATA holds the scalars "F11", "F12", "detF" and "Ceq" (clamped to
// [0, 1]) in that order. Numbers are printed with %.12e so output is
// byte-stable for identical states.
#pragma once

#include "gpc/experiment.hpp"

#include <iosfwd>
#include <string>

namespace gpc {

void write_vtk(const Mesh& mesh, const FieldSnapshot& snap, std::ostream& os,
               const std::string& title = "gpc");
/// Throws Error naming the path when the file cannot be written.
void export_vtk(const Mesh& mesh, const FieldSnapshot& snap, const std::string& path,
                const std::string& title = "gpc");

/// Header: cell,F11,F12,F13,F21,F22,F23,F31,F32,F33,detF,Ceq,Sm_norm
void write_cell_csv(const FieldSnapshot& snap, std::ostream& os);

/// Counts read back from a legacy VTK file.
struct VtkSummary {
  int points = 0;
  int cells = 0;
  std::vector<int> cell_types;
};
VtkSummary read_vtk_summary(const std::string& path);

}  // namespace gpc
