#include "gpc/vtk.hpp"

#include "gpc/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace gpc {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void scalars(std::ostream& os, const char* name, const std::vector<double>& v) {
  os << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double x : v) os << num(x) << '\n';
}

}  // namespace

void write_vtk(const Mesh& mesh, const FieldSnapshot& snap, std::ostream& os,
               const std::string& title) {
  const std::size_t nn = mesh.nodes.size(), ne = mesh.elements.size();
  if (snap.displacement.size() != nn || snap.F.size() != ne || snap.detF.size() != ne ||
      snap.c_eq.size() != ne)
    throw InvalidParameter("snapshot does not match the mesh");

  os << "# vtk DataFile Version 2.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << nn << " double\n";
  for (const Vec3& x : mesh.nodes) os << num(x[0]) << ' ' << num(x[1]) << ' ' << num(x[2]) << '\n';

  os << "CELLS " << ne << ' ' << ne * (kNodesU + 1) << '\n';
  for (const Hex20& e : mesh.elements) {
    os << kNodesU;
    for (int n : e.nodes) os << ' ' << n;
    os << '\n';
  }
  os << "CELL_TYPES " << ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) os << "25\n";

  os << "POINT_DATA " << nn << "\nVECTORS displacement double\n";
  for (const Vec3& u : snap.displacement)
    os << num(u[0]) << ' ' << num(u[1]) << ' ' << num(u[2]) << '\n';

  std::vector<double> f11, f12, ceq;
  for (std::size_t e = 0; e < ne; ++e) {
    f11.push_back(snap.F[e](0, 0));
    f12.push_back(snap.F[e](0, 1));
    ceq.push_back(std::clamp(snap.c_eq[e], 0.0, 1.0));
  }
  os << "CELL_DATA " << ne << '\n';
  scalars(os, "F11", f11);
  scalars(os, "F12", f12);
  scalars(os, "detF", snap.detF);
  scalars(os, "Ceq", ceq);
}

void export_vtk(const Mesh& mesh, const FieldSnapshot& snap, const std::string& path,
                const std::string& title) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_vtk(mesh, snap, os, title);
  os.flush();
  if (!os) throw Error("write to '" + path + "' failed");
}

void write_cell_csv(const FieldSnapshot& snap, std::ostream& os) {
  os << "cell,F11,F12,F13,F21,F22,F23,F31,F32,F33,detF,Ceq,Sm_norm\n";
  for (std::size_t e = 0; e < snap.F.size(); ++e) {
    os << e;
    for (int k = 0; k < 9; ++k) os << ',' << num(snap.F[e][k]);
    os << ',' << num(snap.detF[e]) << ',' << num(snap.c_eq[e]) << ',' << num(snap.s_m_norm[e])
       << '\n';
  }
}

VtkSummary read_vtk_summary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  VtkSummary s;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "POINTS") {
      ls >> s.points;
    } else if (word == "CELLS") {
      ls >> s.cells;
    } else if (word == "CELL_TYPES") {
      int n = 0;
      ls >> n;
      for (int k = 0; k < n && std::getline(in, line); ++k) s.cell_types.push_back(std::stoi(line));
    }
  }
  return s;
}

}  // namespace gpc
