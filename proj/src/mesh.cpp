#include "gpc/mesh.hpp"

#include "gpc/errors.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace gpc {

std::string to_string(Face f) {
  switch (f) {
    case Face::XMin: return "xmin";
    case Face::XMax: return "xmax";
    case Face::YMin: return "ymin";
    case Face::YMax: return "ymax";
    case Face::ZMin: return "zmin";
    case Face::ZMax: return "zmax";
  }
  return "?";
}

namespace {

// Lattice offsets (in half-element units) of the local nodes.
constexpr int kLatticeOffset[kNodesU][3] = {
    {0, 0, 0}, {2, 0, 0}, {2, 2, 0}, {0, 2, 0}, {0, 0, 2}, {2, 0, 2}, {2, 2, 2},
    {0, 2, 2}, {1, 0, 0}, {2, 1, 0}, {1, 2, 0}, {0, 1, 0}, {1, 0, 2}, {2, 1, 2},
    {1, 2, 2}, {0, 1, 2}, {0, 0, 1}, {2, 0, 1}, {2, 2, 1}, {0, 2, 1}};

}  // namespace

const std::array<Vec3, kNodesU>& reference_nodes() {
  static const std::array<Vec3, kNodesU> nodes = [] {
    std::array<Vec3, kNodesU> r;
    for (int a = 0; a < kNodesU; ++a)
      r[a] = Vec3(kLatticeOffset[a][0] - 1.0, kLatticeOffset[a][1] - 1.0,
                  kLatticeOffset[a][2] - 1.0);
    return r;
  }();
  return nodes;
}

ElementGeometry Mesh::geometry(int element) const {
  ElementGeometry g;
  const auto& e = elements[element];
  for (int a = 0; a < kNodesU; ++a) g.X[a] = nodes[e.nodes[a]];
  return g;
}

double Mesh::element_size() const {
  return std::max({spec.l1 / spec.nx, spec.l2 / spec.ny, spec.l3 / spec.nz});
}

Mesh generate_block(const BlockSpec& s) {
  if (!(s.l1 > 0 && s.l2 > 0 && s.l3 > 0))
    throw InvalidMeshSpec("block lengths must be positive");
  if (s.nx < 1 || s.ny < 1 || s.nz < 1)
    throw InvalidMeshSpec("element counts must be positive");

  const int mx = 2 * s.nx + 1, my = 2 * s.ny + 1, mz = 2 * s.nz + 1;
  std::vector<int> lattice(static_cast<std::size_t>(mx) * my * mz, -1);
  auto lid = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(k) * my + j) * mx + i;
  };

  Mesh mesh;
  mesh.spec = s;
  for (int k = 0; k < mz; ++k)
    for (int j = 0; j < my; ++j)
      for (int i = 0; i < mx; ++i) {
        const int odd = (i & 1) + (j & 1) + (k & 1);
        if (odd > 1) continue;  // face and body centres are not serendipity nodes
        lattice[lid(i, j, k)] = mesh.node_count();
        mesh.nodes.emplace_back(s.l1 * i / (mx - 1), s.l2 * j / (my - 1),
                                s.l3 * k / (mz - 1));
        std::uint8_t mask = 0;
        if (i == 0) mask |= 1u << static_cast<int>(Face::XMin);
        if (i == mx - 1) mask |= 1u << static_cast<int>(Face::XMax);
        if (j == 0) mask |= 1u << static_cast<int>(Face::YMin);
        if (j == my - 1) mask |= 1u << static_cast<int>(Face::YMax);
        if (k == 0) mask |= 1u << static_cast<int>(Face::ZMin);
        if (k == mz - 1) mask |= 1u << static_cast<int>(Face::ZMax);
        mesh.face_mask.push_back(mask);
        mesh.is_corner.push_back(odd == 0);
      }

  mesh.elements.reserve(static_cast<std::size_t>(s.nx) * s.ny * s.nz);
  for (int ez = 0; ez < s.nz; ++ez)
    for (int ey = 0; ey < s.ny; ++ey)
      for (int ex = 0; ex < s.nx; ++ex) {
        Hex20 e;
        for (int a = 0; a < kNodesU; ++a)
          e.nodes[a] = lattice[lid(2 * ex + kLatticeOffset[a][0],
                                   2 * ey + kLatticeOffset[a][1],
                                   2 * ez + kLatticeOffset[a][2])];
        mesh.elements.push_back(e);
      }
  return mesh;
}

ShapeU shape_u(const Vec3& xi) {
  ShapeU s;
  const auto& ref = reference_nodes();
  for (int a = 0; a < kNodesU; ++a) {
    const double xa = ref[a][0], ya = ref[a][1], za = ref[a][2];
    if (a < 8) {
      const double p = 1 + xi[0] * xa, q = 1 + xi[1] * ya, r = 1 + xi[2] * za;
      const double t = xi[0] * xa + xi[1] * ya + xi[2] * za - 2;
      s.N[a] = 0.125 * p * q * r * t;
      s.dN[a] = Vec3(0.125 * xa * q * r * (t + p), 0.125 * ya * p * r * (t + q),
                     0.125 * za * p * q * (t + r));
    } else if (xa == 0.0) {
      const double p = 1 - xi[0] * xi[0], q = 1 + xi[1] * ya, r = 1 + xi[2] * za;
      s.N[a] = 0.25 * p * q * r;
      s.dN[a] = Vec3(-0.5 * xi[0] * q * r, 0.25 * p * ya * r, 0.25 * p * q * za);
    } else if (ya == 0.0) {
      const double p = 1 + xi[0] * xa, q = 1 - xi[1] * xi[1], r = 1 + xi[2] * za;
      s.N[a] = 0.25 * p * q * r;
      s.dN[a] = Vec3(0.25 * xa * q * r, -0.5 * xi[1] * p * r, 0.25 * p * q * za);
    } else {
      const double p = 1 + xi[0] * xa, q = 1 + xi[1] * ya, r = 1 - xi[2] * xi[2];
      s.N[a] = 0.25 * p * q * r;
      s.dN[a] = Vec3(0.25 * xa * q * r, 0.25 * p * ya * r, -0.5 * xi[2] * p * q);
    }
  }
  return s;
}

ShapeChi shape_chi(const Vec3& xi) {
  ShapeChi s;
  const auto& ref = reference_nodes();
  for (int a = 0; a < kNodesChi; ++a) {
    const double xa = ref[a][0], ya = ref[a][1], za = ref[a][2];
    const double p = 1 + xi[0] * xa, q = 1 + xi[1] * ya, r = 1 + xi[2] * za;
    s.N[a] = 0.125 * p * q * r;
    s.dN[a] = Vec3(0.125 * xa * q * r, 0.125 * ya * p * r, 0.125 * za * p * q);
  }
  return s;
}

QuadratureRule gauss_rule(int order) {
  std::vector<double> pts, wts;
  if (order == 2) {
    const double g = 1.0 / std::sqrt(3.0);
    pts = {-g, g};
    wts = {1.0, 1.0};
  } else if (order == 3) {
    const double g = std::sqrt(0.6);
    pts = {-g, 0.0, g};
    wts = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  } else {
    throw InvalidQuadrature("unsupported Gauss order " + std::to_string(order) +
                            " (expected 2 or 3)");
  }
  QuadratureRule rule;
  for (std::size_t k = 0; k < pts.size(); ++k)
    for (std::size_t j = 0; j < pts.size(); ++j)
      for (std::size_t i = 0; i < pts.size(); ++i)
        rule.push_back({Vec3(pts[i], pts[j], pts[k]), wts[i] * wts[j] * wts[k]});
  return rule;
}

MappedPoint isoparametric_map(const ElementGeometry& geom, const Vec3& xi) {
  return isoparametric_map(geom, shape_u(xi), shape_chi(xi));
}

MappedPoint isoparametric_map(const ElementGeometry& geom, const ShapeU& su,
                              const ShapeChi& sc) {
  MappedPoint m;
  m.x.setZero();
  Eigen::Matrix3d jac = Eigen::Matrix3d::Zero();
  for (int a = 0; a < kNodesU; ++a) {
    m.x += su.N[a] * geom.X[a];
    jac += geom.X[a] * su.dN[a].transpose();
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m.jacobian(i, j) = jac(i, j);
  m.detJ = jac.determinant();
  if (!(m.detJ > 0.0))
    throw InvertedElement("non-positive element Jacobian " + std::to_string(m.detJ));

  // dN/dx = J^{-T} dN/dxi
  const Eigen::Matrix3d jinv_t = jac.inverse().transpose();
  m.Nu = su.N;
  for (int a = 0; a < kNodesU; ++a) m.dNu[a] = jinv_t * su.dN[a];
  m.Nchi = sc.N;
  for (int a = 0; a < kNodesChi; ++a) m.dNchi[a] = jinv_t * sc.dN[a];
  return m;
}

DofMap::DofMap(const Mesh& mesh)
    : corner_index_(mesh.nodes.size(), -1),
      u_count_(3 * mesh.node_count()) {
  for (int n = 0; n < mesh.node_count(); ++n)
    if (mesh.is_corner[n]) corner_index_[n] = corner_count_++;
}

std::array<int, kElementDofs> DofMap::element_dofs(const Hex20& e) const {
  std::array<int, kElementDofs> d{};
  for (int a = 0; a < kNodesU; ++a)
    for (int i = 0; i < 3; ++i) d[3 * a + i] = u_dof(e.nodes[a], i);
  for (int c = 0; c < kNodesChi; ++c)
    for (int m = 0; m < 9; ++m) d[kElementDofsU + 9 * c + m] = chi_dof(e.nodes[c], m);
  return d;
}

}  // namespace gpc
