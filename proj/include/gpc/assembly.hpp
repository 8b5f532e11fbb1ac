// Element kernels, global sparse assembly and Dirichlet elimination for the
// mixed displacement / micromorphic discretization.
//
// The global unknown vector holds displacements first and the corner-node
// micromorphic values after them (see DofMap). Residuals are gradients of the
// total potential energy, so the internal-minus-external force balance reads
// R(d) = 0 and the stiffness is the Hessian of the energy.
#pragma once

#include "gpc/materials.hpp"
#include "gpc/mesh.hpp"

#include <Eigen/Sparse>

#include <limits>
#include <map>
#include <utility>
#include <vector>

namespace gpc {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Dead loads. Tractions act on whole block faces.
struct Loading {
  Vec3 body_force = Vec3::Zero();
  std::vector<std::pair<Face, Vec3>> tractions;
};

struct ElementVectors {
  Vec60 f_u;
  Vec72 g_chi;
};

struct ElementOutput {
  double energy = 0.0;
  Vec132 residual;
  Mat132 stiffness;
};

/// Energy, residual and (optionally) stiffness of one element. External work
/// of the body force is included; tractions are handled globally.
/// Throws NonPositiveJacobian with the quadrature point index set.
ElementOutput element_evaluate(const ElementGeometry& geom, const Vec60& d_u,
                               const Vec72& d_chi, const MaterialParams& params,
                               const QuadratureRule& rule, bool with_stiffness,
                               const Vec3& body_force = Vec3::Zero());

ElementVectors element_residual(const ElementGeometry& geom, const Vec60& d_u,
                                const Vec72& d_chi, const MaterialParams& params,
                                const QuadratureRule& rule = gauss_rule(3));
Mat132 element_stiffness(const ElementGeometry& geom, const Vec60& d_u,
                         const Vec72& d_chi, const MaterialParams& params,
                         const QuadratureRule& rule = gauss_rule(3));
double element_energy(const ElementGeometry& geom, const Vec60& d_u,
                      const Vec72& d_chi, const MaterialParams& params,
                      const QuadratureRule& rule = gauss_rule(3));

struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd residual;
  double energy = 0.0;
};

/// Undeformed state: zero displacement and chi = I on every corner node.
Eigen::VectorXd initial_fields(const DofMap& dofs);

class Assembler {
 public:
  Assembler(const Mesh& mesh, const DofMap& dofs, MaterialParams params,
            Loading loading = {}, int quadrature_order = 3);

  /// Global residual (and stiffness if requested) at the state `d`.
  /// NonPositiveJacobian propagates with the element index set.
  SparseSystem assemble(const Eigen::VectorXd& d, bool with_matrix = true) const;

  /// Total potential energy; +infinity if det F <= 0 anywhere.
  double total_energy(const Eigen::VectorXd& d) const;

  const Mesh& mesh() const { return mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const MaterialParams& params() const { return params_; }
  const QuadratureRule& rule() const { return rule_; }

  void gather(const Eigen::VectorXd& d, int element, Vec60& d_u, Vec72& d_chi) const;

 private:
  void build_pattern();
  double traction_terms(const Eigen::VectorXd& d, Eigen::VectorXd* residual) const;

  const Mesh& mesh_;
  const DofMap& dofs_;
  MaterialParams params_;
  Loading loading_;
  QuadratureRule rule_;
  SparseMatrix pattern_;
};

/// Prescribed values for displacement unknowns. Micromorphic unknowns are
/// never constrained.
class Constraints {
 public:
  explicit Constraints(const DofMap& dofs) : u_count_(dofs.u_count()) {}

  /// Throws InconsistentBC on a conflicting duplicate and InvalidParameter
  /// for a non-displacement unknown.
  void set(int dof, double value);
  bool contains(int dof) const { return values_.count(dof) != 0; }
  std::size_t size() const { return values_.size(); }
  const std::map<int, double>& values() const { return values_; }

 private:
  int u_count_;
  std::map<int, double> values_;
};

/// Newton system restricted to the free unknowns:
///   K_ff dx_f = -R_f - K_fc (target_c - d_c)
struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> free_dofs;
  Eigen::VectorXd fixed_increment;  // full length; nonzero only on constrained dofs

  /// Full-length increment from a solution of the reduced system.
  Eigen::VectorXd expand(const Eigen::VectorXd& x_free) const;
};

ReducedSystem apply_dirichlet(const SparseSystem& system, const Constraints& bc,
                              const Eigen::VectorXd& d);

/// Reaction forces (residual entries) at the constrained unknowns, ordered
/// as in bc.values().
Eigen::VectorXd reactions(const SparseSystem& system, const Constraints& bc);

}  // namespace gpc
