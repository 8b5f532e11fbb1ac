// Structured meshes of 20-node serendipity hexahedra, shape functions,
// Gauss quadrature, the isoparametric map and the degree-of-freedom layout.
//
// Local node order follows the VTK quadratic hexahedron (cell type 25):
//
//   corners   0:(-,-,-) 1:(+,-,-) 2:(+,+,-) 3:(-,+,-)
//             4:(-,-,+) 5:(+,-,+) 6:(+,+,+) 7:(-,+,+)
//   midsides  8:(0-1)  9:(1-2) 10:(2-3) 11:(3-0)
//            12:(4-5) 13:(5-6) 14:(6-7) 15:(7-4)
//            16:(0-4) 17:(1-5) 18:(2-6) 19:(3-7)
//
// Displacements are interpolated quadratically on all 20 nodes, the
// micromorphic field trilinearly on the 8 corners, giving 60 + 72 = 132
// element unknowns.
#pragma once

#include "gpc/tensor.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gpc {

inline constexpr int kNodesU = 20;
inline constexpr int kNodesChi = 8;
inline constexpr int kElementDofsU = 3 * kNodesU;     // 60
inline constexpr int kElementDofsChi = 9 * kNodesChi;  // 72
inline constexpr int kElementDofs = kElementDofsU + kElementDofsChi;

using Vec60 = Eigen::Matrix<double, kElementDofsU, 1>;
using Vec72 = Eigen::Matrix<double, kElementDofsChi, 1>;
using Vec132 = Eigen::Matrix<double, kElementDofs, 1>;
// Heap-allocated: 132 x 132 doubles exceed the fixed-size stack limit.
using Mat132 = Eigen::MatrixXd;

enum class Face : int { XMin = 0, XMax, YMin, YMax, ZMin, ZMax };
inline constexpr int kFaceCount = 6;
std::string to_string(Face f);

/// Reference coordinates of the 20 local nodes.
const std::array<Vec3, kNodesU>& reference_nodes();

struct Hex20 {
  std::array<int, kNodesU> nodes{};
};

/// Node coordinates of one element in local order.
struct ElementGeometry {
  std::array<Vec3, kNodesU> X;
};

struct BlockSpec {
  double l1 = 1.0, l2 = 1.0, l3 = 1.0;
  int nx = 1, ny = 1, nz = 1;
};

class Mesh {
 public:
  std::vector<Vec3> nodes;
  std::vector<Hex20> elements;
  /// Bit f of face_mask[n] is set when node n lies on face f.
  std::vector<std::uint8_t> face_mask;
  /// True for element corner (vertex) nodes, which carry chi unknowns.
  std::vector<bool> is_corner;
  BlockSpec spec;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int element_count() const { return static_cast<int>(elements.size()); }
  bool on_face(int node, Face f) const {
    return (face_mask[node] >> static_cast<int>(f)) & 1u;
  }
  bool on_boundary(int node) const { return face_mask[node] != 0; }
  ElementGeometry geometry(int element) const;
  /// Largest element edge length of the structured block.
  double element_size() const;
};

/// Throws InvalidMeshSpec for non-positive lengths or counts.
Mesh generate_block(const BlockSpec& spec);

struct ShapeU {
  std::array<double, kNodesU> N;
  std::array<Vec3, kNodesU> dN;  // d/dxi
};
struct ShapeChi {
  std::array<double, kNodesChi> N;
  std::array<Vec3, kNodesChi> dN;
};

ShapeU shape_u(const Vec3& xi);
ShapeChi shape_chi(const Vec3& xi);

struct QuadraturePoint {
  Vec3 xi;
  double weight;
};
using QuadratureRule = std::vector<QuadraturePoint>;

/// Tensor-product Gauss-Legendre rule with `order` points per axis.
/// Supported orders: 2 and 3. Throws InvalidQuadrature otherwise.
QuadratureRule gauss_rule(int order);

/// Geometry and physical shape-function data at one reference point.
struct MappedPoint {
  Vec3 x;
  Tensor2 jacobian;  // dx_i / dxi_j
  double detJ = 0.0;
  std::array<double, kNodesU> Nu;
  std::array<Vec3, kNodesU> dNu;  // d/dx
  std::array<double, kNodesChi> Nchi;
  std::array<Vec3, kNodesChi> dNchi;
};

/// Throws InvertedElement when detJ <= 0.
MappedPoint isoparametric_map(const ElementGeometry& geom, const Vec3& xi);
/// Same, reusing precomputed reference shape functions.
MappedPoint isoparametric_map(const ElementGeometry& geom, const ShapeU& su,
                              const ShapeChi& sc);

/// Global numbering: 3 displacement unknowns on every node first, then 9
/// micromorphic unknowns on every corner node.
class DofMap {
 public:
  explicit DofMap(const Mesh& mesh);

  int u_dof(int node, int comp) const { return 3 * node + comp; }
  /// -1 if the node is not a corner.
  int chi_dof(int node, int comp) const {
    const int c = corner_index_[node];
    return c < 0 ? -1 : u_count_ + 9 * c + comp;
  }
  int u_count() const { return u_count_; }
  int chi_count() const { return 9 * corner_count_; }
  int total() const { return u_count_ + 9 * corner_count_; }
  int corner_index(int node) const { return corner_index_[node]; }
  bool is_u_dof(int dof) const { return dof < u_count_; }

  /// Global ids of the 132 element unknowns in local order
  /// (60 displacement, then 72 micromorphic).
  std::array<int, kElementDofs> element_dofs(const Hex20& e) const;

 private:
  std::vector<int> corner_index_;
  int corner_count_ = 0;
  int u_count_ = 0;
};

}  // namespace gpc
