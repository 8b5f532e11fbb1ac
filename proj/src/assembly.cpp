#include "gpc/assembly.hpp"

#include "gpc/errors.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gpc {

ElementOutput element_evaluate(const ElementGeometry& geom, const Vec60& d_u,
                               const Vec72& d_chi, const MaterialParams& params,
                               const QuadratureRule& rule, bool with_stiffness,
                               const Vec3& body_force) {
  ElementOutput out;
  out.residual.setZero();
  if (with_stiffness) out.stiffness.setZero(kElementDofs, kElementDofs);

  for (std::size_t q = 0; q < rule.size(); ++q) {
    const MappedPoint mp = isoparametric_map(geom, rule[q].xi);
    const double dv = mp.detJ * rule[q].weight;

    PointState s;
    Vec3 u_here = Vec3::Zero();
    for (int a = 0; a < kNodesU; ++a) {
      for (int i = 0; i < 3; ++i) {
        const double ua = d_u[3 * a + i];
        u_here[i] += mp.Nu[a] * ua;
        for (int j = 0; j < 3; ++j) s.F(i, j) += ua * mp.dNu[a][j];
      }
    }
    s.chi = Tensor2::zero();
    for (int c = 0; c < kNodesChi; ++c)
      for (int m = 0; m < 9; ++m) {
        const double v = d_chi[9 * c + m];
        s.chi[m] += mp.Nchi[c] * v;
        for (int d = 0; d < 3; ++d) s.grad_chi[3 * m + d] += mp.dNchi[c][d] * v;
      }

    PointResponse r;
    try {
      r = evaluate(params, s, with_stiffness);
    } catch (const NonPositiveJacobian& e) {
      throw NonPositiveJacobian(e.what(), e.jacobian, -1, static_cast<int>(q));
    }

    out.energy += (r.energy - body_force.dot(mp.x + u_here)) * dv;

    for (int a = 0; a < kNodesU; ++a)
      for (int i = 0; i < 3; ++i) {
        double v = -mp.Nu[a] * body_force[i];
        for (int j = 0; j < 3; ++j) v += r.P(i, j) * mp.dNu[a][j];
        out.residual[3 * a + i] += v * dv;
      }
    for (int c = 0; c < kNodesChi; ++c)
      for (int m = 0; m < 9; ++m) {
        double v = mp.Nchi[c] * r.S_m[m];
        for (int d = 0; d < 3; ++d) v += mp.dNchi[c][d] * r.mu[3 * m + d];
        out.residual[kElementDofsU + 9 * c + m] += v * dv;
      }

    if (!with_stiffness) continue;

    const Tensor4& D = r.tangent.d_uu;
    const Tensor4& Dc = r.tangent.d_uchi;
    // T[a](i, q) = sum_j dN_a/dx_j D(3i+j, q);  Y[a](i, m) likewise for D_uchi
    double T[kNodesU][3][9];
    double Y[kNodesU][3][9];
    for (int a = 0; a < kNodesU; ++a)
      for (int i = 0; i < 3; ++i)
        for (int p = 0; p < 9; ++p) {
          double t = 0.0, y = 0.0;
          for (int j = 0; j < 3; ++j) {
            t += mp.dNu[a][j] * D.at(3 * i + j, p);
            y += mp.dNu[a][j] * Dc.at(3 * i + j, p);
          }
          T[a][i][p] = t;
          Y[a][i][p] = y;
        }

    auto& K = out.stiffness;
    for (int a = 0; a < kNodesU; ++a)
      for (int i = 0; i < 3; ++i) {
        const int row = 3 * a + i;
        for (int b = 0; b < kNodesU; ++b)
          for (int k = 0; k < 3; ++k) {
            const double* t = &T[a][i][3 * k];
            K(row, 3 * b + k) +=
                (t[0] * mp.dNu[b][0] + t[1] * mp.dNu[b][1] + t[2] * mp.dNu[b][2]) * dv;
          }
        for (int c = 0; c < kNodesChi; ++c) {
          const double nc = mp.Nchi[c] * dv;
          for (int m = 0; m < 9; ++m) {
            const double v = Y[a][i][m] * nc;
            K(row, kElementDofsU + 9 * c + m) += v;
            K(kElementDofsU + 9 * c + m, row) += v;
          }
        }
      }

    const double H = r.tangent.chi_mass, Kg = r.tangent.grad_modulus;
    for (int c = 0; c < kNodesChi; ++c)
      for (int e = 0; e < kNodesChi; ++e) {
        const double v =
            (H * mp.Nchi[c] * mp.Nchi[e] + Kg * mp.dNchi[c].dot(mp.dNchi[e])) * dv;
        for (int m = 0; m < 9; ++m)
          K(kElementDofsU + 9 * c + m, kElementDofsU + 9 * e + m) += v;
      }
  }
  return out;
}

ElementVectors element_residual(const ElementGeometry& geom, const Vec60& d_u,
                                const Vec72& d_chi, const MaterialParams& params,
                                const QuadratureRule& rule) {
  const auto out = element_evaluate(geom, d_u, d_chi, params, rule, false);
  return {out.residual.head<kElementDofsU>(), out.residual.tail<kElementDofsChi>()};
}

Mat132 element_stiffness(const ElementGeometry& geom, const Vec60& d_u,
                         const Vec72& d_chi, const MaterialParams& params,
                         const QuadratureRule& rule) {
  return element_evaluate(geom, d_u, d_chi, params, rule, true).stiffness;
}

double element_energy(const ElementGeometry& geom, const Vec60& d_u,
                      const Vec72& d_chi, const MaterialParams& params,
                      const QuadratureRule& rule) {
  return element_evaluate(geom, d_u, d_chi, params, rule, false).energy;
}

Eigen::VectorXd initial_fields(const DofMap& dofs) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dofs.total());
  for (int c = 0; c < dofs.chi_count() / 9; ++c)
    for (int m : {0, 4, 8}) d[dofs.u_count() + 9 * c + m] = 1.0;
  return d;
}

Assembler::Assembler(const Mesh& mesh, const DofMap& dofs, MaterialParams params,
                     Loading loading, int quadrature_order)
    : mesh_(mesh),
      dofs_(dofs),
      params_(params),
      loading_(std::move(loading)),
      rule_(gauss_rule(quadrature_order)) {
  params_.validate();
  build_pattern();
}

void Assembler::build_pattern() {
  const int n = dofs_.total();
  std::vector<std::vector<int>> cols(n);
  for (const auto& e : mesh_.elements) {
    const auto g = dofs_.element_dofs(e);
    for (int c : g) cols[c].insert(cols[c].end(), g.begin(), g.end());
  }
  std::vector<int> nnz(n);
  for (int c = 0; c < n; ++c) {
    auto& v = cols[c];
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    nnz[c] = static_cast<int>(v.size());
  }
  pattern_.resize(n, n);
  pattern_.reserve(nnz);
  for (int c = 0; c < n; ++c)
    for (int r : cols[c]) pattern_.insert(r, c) = 0.0;
  pattern_.makeCompressed();
}

void Assembler::gather(const Eigen::VectorXd& d, int element, Vec60& d_u,
                       Vec72& d_chi) const {
  const auto g = dofs_.element_dofs(mesh_.elements[element]);
  for (int k = 0; k < kElementDofsU; ++k) d_u[k] = d[g[k]];
  for (int k = 0; k < kElementDofsChi; ++k) d_chi[k] = d[g[kElementDofsU + k]];
}

namespace {

// Local faces of the reference cube: fixed axis and its coordinate.
struct LocalFace {
  int axis;
  double side;
  Face global;
};
constexpr LocalFace kLocalFaces[6] = {
    {0, -1.0, Face::XMin}, {0, 1.0, Face::XMax}, {1, -1.0, Face::YMin},
    {1, 1.0, Face::YMax},  {2, -1.0, Face::ZMin}, {2, 1.0, Face::ZMax}};

}  // namespace

double Assembler::traction_terms(const Eigen::VectorXd& d,
                                 Eigen::VectorXd* residual) const {
  if (loading_.tractions.empty()) return 0.0;
  const double g = std::sqrt(0.6);
  const double pts[3] = {-g, 0.0, g};
  const double wts[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  const auto& ref = reference_nodes();

  double work = 0.0;
  for (int e = 0; e < mesh_.element_count(); ++e) {
    const auto& el = mesh_.elements[e];
    for (const auto& lf : kLocalFaces) {
      bool on_face = true;
      for (int a = 0; a < 8 && on_face; ++a)
        if (ref[a][lf.axis] == lf.side && !mesh_.on_face(el.nodes[a], lf.global))
          on_face = false;
      if (!on_face) continue;
      Vec3 t = Vec3::Zero();
      for (const auto& [face, vec] : loading_.tractions)
        if (face == lf.global) t += vec;
      if (t.isZero(0.0)) continue;

      const ElementGeometry geom = mesh_.geometry(e);
      const int b1 = (lf.axis + 1) % 3, b2 = (lf.axis + 2) % 3;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          Vec3 xi;
          xi[lf.axis] = lf.side;
          xi[b1] = pts[i];
          xi[b2] = pts[j];
          const ShapeU su = shape_u(xi);
          Vec3 x = Vec3::Zero(), t1 = Vec3::Zero(), t2 = Vec3::Zero(), u = Vec3::Zero();
          for (int a = 0; a < kNodesU; ++a) {
            x += su.N[a] * geom.X[a];
            t1 += su.dN[a][b1] * geom.X[a];
            t2 += su.dN[a][b2] * geom.X[a];
            for (int c = 0; c < 3; ++c) u[c] += su.N[a] * d[dofs_.u_dof(el.nodes[a], c)];
          }
          const double da = t1.cross(t2).norm() * wts[i] * wts[j];
          work += t.dot(x + u) * da;
          if (residual)
            for (int a = 0; a < kNodesU; ++a)
              for (int c = 0; c < 3; ++c)
                (*residual)[dofs_.u_dof(el.nodes[a], c)] -= su.N[a] * t[c] * da;
        }
    }
  }
  return -work;
}

SparseSystem Assembler::assemble(const Eigen::VectorXd& d, bool with_matrix) const {
  SparseSystem sys;
  sys.residual = Eigen::VectorXd::Zero(dofs_.total());
  if (with_matrix) sys.matrix = pattern_;

  const int* outer = sys.matrix.outerIndexPtr();
  const int* inner = sys.matrix.innerIndexPtr();
  double* values = with_matrix ? sys.matrix.valuePtr() : nullptr;

  Vec60 du;
  Vec72 dc;
  std::array<int, kElementDofs> order;
  for (int e = 0; e < mesh_.element_count(); ++e) {
    gather(d, e, du, dc);
    ElementOutput out;
    try {
      out = element_evaluate(mesh_.geometry(e), du, dc, params_, rule_, with_matrix,
                             loading_.body_force);
    } catch (const NonPositiveJacobian& ex) {
      throw NonPositiveJacobian(
          "element " + std::to_string(e) + ", quadrature point " +
              std::to_string(ex.qpoint) + ": " + ex.what(),
          ex.jacobian, e, ex.qpoint);
    }
    const auto g = dofs_.element_dofs(mesh_.elements[e]);
    sys.energy += out.energy;
    for (int k = 0; k < kElementDofs; ++k) sys.residual[g[k]] += out.residual[k];
    if (!with_matrix) continue;

    // Scatter column by column, walking the sorted row indices of the
    // element alongside the sorted inner indices of the global column.
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return g[a] < g[b]; });
    for (int j = 0; j < kElementDofs; ++j) {
      int p = outer[g[j]];
      for (int idx : order) {
        while (inner[p] < g[idx]) ++p;
        values[p] += out.stiffness(idx, j);
      }
    }
  }
  sys.energy += traction_terms(d, &sys.residual);
  return sys;
}

double Assembler::total_energy(const Eigen::VectorXd& d) const {
  double energy = 0.0;
  Vec60 du;
  Vec72 dc;
  try {
    for (int e = 0; e < mesh_.element_count(); ++e) {
      gather(d, e, du, dc);
      energy += element_evaluate(mesh_.geometry(e), du, dc, params_, rule_, false,
                                 loading_.body_force)
                    .energy;
    }
  } catch (const NonPositiveJacobian&) {
    return std::numeric_limits<double>::infinity();
  }
  return energy + traction_terms(d, nullptr);
}

void Constraints::set(int dof, double value) {
  if (dof < 0 || dof >= u_count_)
    throw InvalidParameter("only displacement unknowns can be constrained (dof " +
                           std::to_string(dof) + ")");
  auto [it, inserted] = values_.emplace(dof, value);
  if (!inserted && it->second != value)
    throw InconsistentBC("conflicting prescribed values for dof " + std::to_string(dof));
}

Eigen::VectorXd ReducedSystem::expand(const Eigen::VectorXd& x_free) const {
  Eigen::VectorXd dx = fixed_increment;
  for (std::size_t k = 0; k < free_dofs.size(); ++k) dx[free_dofs[k]] = x_free[k];
  return dx;
}

ReducedSystem apply_dirichlet(const SparseSystem& system, const Constraints& bc,
                              const Eigen::VectorXd& d) {
  const int n = static_cast<int>(system.residual.size());
  ReducedSystem red;
  red.fixed_increment = Eigen::VectorXd::Zero(n);
  std::vector<int> to_free(n, -1);
  for (int k = 0; k < n; ++k) {
    auto it = bc.values().find(k);
    if (it == bc.values().end()) {
      to_free[k] = static_cast<int>(red.free_dofs.size());
      red.free_dofs.push_back(k);
    } else {
      red.fixed_increment[k] = it->second - d[k];
    }
  }
  const int nf = static_cast<int>(red.free_dofs.size());
  red.rhs.resize(nf);
  for (int k = 0; k < nf; ++k) red.rhs[k] = -system.residual[red.free_dofs[k]];

  const SparseMatrix& K = system.matrix;
  std::vector<int> nnz(nf, 0);
  for (int c = 0; c < n; ++c) {
    const int fc = to_free[c];
    for (SparseMatrix::InnerIterator it(K, c); it; ++it) {
      const int fr = to_free[it.row()];
      if (fr < 0) continue;
      if (fc >= 0)
        ++nnz[fc];
      else
        red.rhs[fr] -= it.value() * red.fixed_increment[c];
    }
  }
  red.matrix.resize(nf, nf);
  red.matrix.reserve(nnz);
  for (int c = 0; c < n; ++c) {
    const int fc = to_free[c];
    if (fc < 0) continue;
    for (SparseMatrix::InnerIterator it(K, c); it; ++it) {
      const int fr = to_free[it.row()];
      if (fr >= 0) red.matrix.insert(fr, fc) = it.value();
    }
  }
  red.matrix.makeCompressed();
  return red;
}

Eigen::VectorXd reactions(const SparseSystem& system, const Constraints& bc) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(bc.size()));
  Eigen::Index k = 0;
  for (const auto& [dof, value] : bc.values()) r[k++] = system.residual[dof];
  return r;
}

}  // namespace gpc
