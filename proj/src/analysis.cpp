#include "gpc/analysis.hpp"

#include "gpc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace gpc {

ProbeResult rank_one_probe_stvk(const Tensor2& F, const Vec3& a, const Vec3& b) {
  const Tensor2 C = transpose(F) * F;
  const Tensor2 M = Tensor2::outer(transpose(F) * a, b);
  const double aa = a.squaredNorm(), bb = b.squaredNorm();
  ProbeResult r;
  r.curvature = aa * ddot(C, Tensor2::outer(b, b)) + squared_norm(M) +
                ddot(M, transpose(M)) - aa * bb;
  r.violating = r.curvature < 0.0;
  return r;
}

std::pair<Tensor2, Tensor2> stvk_laminate_pair(double eps) {
  // Round-off slack so that eps = sqrt(0.5) in double precision is accepted.
  const double disc = 1.0 - 2.0 * eps * eps;
  if (!(eps > 0.0) || disc < -1e-15)
    throw LaminateUndefined("laminate pair needs 0 < eps <= sqrt(2)/2, got eps = " +
                            std::to_string(eps));
  const double s = std::sqrt(std::max(0.0, disc));
  return {Tensor2(eps, s, 0, 0, eps, 0, 0, 0, 1), Tensor2(eps, -s, 0, 0, eps, 0, 0, 0, 1)};
}

LaminateGap stvk_laminate_gap(double eps) {
  const auto [fp, fm] = stvk_laminate_pair(eps);
  MaterialParams p;
  p.model = Model::StVKNormalized;
  LaminateGap g;
  g.w_hom = w0(p, Tensor2::diagonal(eps, eps, 1.0));
  g.w_lam = 0.5 * (w0(p, fp) + w0(p, fm));
  g.gap = g.w_hom - g.w_lam;
  return g;
}

double c_eq(const Tensor2& F, double eps_well) {
  const auto [C1, C2] = well_metrics(eps_well);
  const Tensor2 C = transpose(F) * F;
  const double d1 = squared_norm(C - C1), d2 = squared_norm(C - C2);
  const double den = d1 + d2;
  if (den == 0.0) return 0.5;
  return d1 / den;
}

namespace {

Tensor2 gradient_at(const MappedPoint& mp, const Vec60& du) {
  Tensor2 F = Tensor2::identity();
  for (int a = 0; a < kNodesU; ++a)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) F(i, j) += du[3 * a + i] * mp.dNu[a][j];
  return F;
}

Vec60 element_displacements(const Mesh& mesh, const DofMap& dofs,
                            const Eigen::VectorXd& d, int e) {
  Vec60 du;
  const auto& el = mesh.elements[e];
  for (int a = 0; a < kNodesU; ++a)
    for (int i = 0; i < 3; ++i) du[3 * a + i] = d[dofs.u_dof(el.nodes[a], i)];
  return du;
}

}  // namespace

std::vector<double> c_eq_field(const Assembler& assembler, const Eigen::VectorXd& d) {
  const Mesh& mesh = assembler.mesh();
  const double eps = assembler.params().eps_well;
  std::vector<double> out;
  out.reserve(mesh.elements.size() * assembler.rule().size());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Vec60 du = element_displacements(mesh, assembler.dofs(), d, e);
    const ElementGeometry geom = mesh.geometry(e);
    for (const auto& qp : assembler.rule())
      out.push_back(c_eq(gradient_at(isoparametric_map(geom, qp.xi), du), eps));
  }
  return out;
}

std::vector<Tensor2> centroid_gradients(const Mesh& mesh, const DofMap& dofs,
                                        const Eigen::VectorXd& d) {
  std::vector<Tensor2> out;
  out.reserve(mesh.elements.size());
  for (int e = 0; e < mesh.element_count(); ++e)
    out.push_back(gradient_at(isoparametric_map(mesh.geometry(e), Vec3::Zero()),
                              element_displacements(mesh, dofs, d, e)));
  return out;
}

double local_energy(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& d,
                    const MaterialParams& params, int quadrature_order) {
  const QuadratureRule rule = gauss_rule(quadrature_order);
  double energy = 0.0;
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Vec60 du = element_displacements(mesh, dofs, d, e);
    const ElementGeometry geom = mesh.geometry(e);
    for (const auto& qp : rule) {
      const MappedPoint mp = isoparametric_map(geom, qp.xi);
      energy += w0(params, gradient_at(mp, du)) * mp.detJ * qp.weight;
    }
  }
  return energy;
}

ProbeLine default_probe_line(const Mesh& mesh) {
  return {1, Vec3(0.5 * mesh.spec.l1, 0.5 * mesh.spec.l2, 0.5 * mesh.spec.l3)};
}

LaminateStats laminate_stats(const std::vector<double>& positions,
                             const std::vector<double>& profile, double threshold,
                             double hysteresis) {
  if (positions.size() != profile.size())
    throw InvalidParameter("laminate_stats: positions and profile differ in length");
  LaminateStats st;
  st.positions = positions;
  st.profile = profile;

  std::vector<double> where;
  int state = 0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    const double v = profile[k];
    int s = 0;
    if (v > threshold + hysteresis)
      s = 1;
    else if (v < threshold - hysteresis)
      s = -1;
    if (s == 0) continue;
    if (state != 0 && s != state) {
      const double v0 = profile[last], x0 = positions[last], x1 = positions[k];
      const double t = (threshold - v0) / (v - v0);
      where.push_back(x0 + std::clamp(t, 0.0, 1.0) * (x1 - x0));
    }
    state = s;
    last = k;
  }

  st.crossings = static_cast<int>(where.size());
  st.band_count = (st.crossings + 1) / 2;
  if (st.crossings >= 2)
    st.mean_band_width = 2.0 * (where.back() - where.front()) / (st.crossings - 1);
  else if (!positions.empty())
    st.mean_band_width = positions.back() - positions.front();
  return st;
}

LaminateStats laminate_stats(const Mesh& mesh, const std::vector<double>& cell_field,
                             const ProbeLine& line, double threshold, double hysteresis) {
  if (static_cast<int>(cell_field.size()) != mesh.element_count())
    throw InvalidParameter("laminate_stats: field size does not match element count");
  if (line.axis < 0 || line.axis > 2) throw InvalidParameter("probe axis must be 0, 1 or 2");
  const BlockSpec& s = mesh.spec;
  const int n[3] = {s.nx, s.ny, s.nz};
  const double len[3] = {s.l1, s.l2, s.l3};
  int idx[3];
  for (int a = 0; a < 3; ++a) {
    if (line.through[a] < 0.0 || line.through[a] > len[a])
      throw InvalidParameter("probe line lies outside the block");
    idx[a] = std::min(static_cast<int>(line.through[a] / len[a] * n[a]), n[a] - 1);
  }
  std::vector<double> pos, prof;
  for (int k = 0; k < n[line.axis]; ++k) {
    idx[line.axis] = k;
    const int e = idx[0] + s.nx * (idx[1] + s.ny * idx[2]);
    pos.push_back((k + 0.5) * len[line.axis] / n[line.axis]);
    prof.push_back(cell_field[e]);
  }
  return laminate_stats(pos, prof, threshold, hysteresis);
}

namespace {
bool same_material(const MaterialParams& a, const MaterialParams& b) {
  return a.model == b.model && a.lambda_lame == b.lambda_lame && a.mu_lame == b.mu_lame &&
         a.alpha == b.alpha && a.eps_well == b.eps_well && a.H_chi == b.H_chi &&
         a.K_grad == b.K_grad && a.K_vol == b.K_vol;
}
}  // namespace

double energy_compare(const RunEnergy& a, const RunEnergy& b) {
  const BlockSpec &x = a.block, &y = b.block;
  if (x.l1 != y.l1 || x.l2 != y.l2 || x.l3 != y.l3 || x.nx != y.nx || x.ny != y.ny ||
      x.nz != y.nz)
    throw IncomparableRuns("runs use different meshes");
  if (!same_material(a.material, b.material))
    throw IncomparableRuns("runs use different material parameters");
  if (a.boundary != b.boundary) throw IncomparableRuns("runs use different boundary data");
  return a.total_energy - b.total_energy;
}

Eigen::VectorXd affine_interpolant(const Mesh& mesh, const DofMap& dofs, const Tensor2& F) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dofs.total());
  const Tensor2 G = F - Tensor2::identity();
  const Tensor2 cof = cofactor(F);
  for (int n = 0; n < mesh.node_count(); ++n) {
    const Vec3 u = G * mesh.nodes[n];
    for (int i = 0; i < 3; ++i) d[dofs.u_dof(n, i)] = u[i];
    if (mesh.is_corner[n])
      for (int m = 0; m < 9; ++m) d[dofs.chi_dof(n, m)] = cof[m];
  }
  return d;
}

Eigen::VectorXd laminate_interpolant(const Mesh& mesh, const DofMap& dofs, double eps,
                                     int periods, bool taper) {
  if (periods < 1) throw InvalidParameter("laminate needs at least one period");
  const double amp = std::sqrt(std::max(0.0, 1.0 - 2.0 * eps * eps));
  stvk_laminate_pair(eps);  // validates eps
  Eigen::VectorXd d = affine_interpolant(mesh, dofs, Tensor2::diagonal(eps, eps, 1.0));
  const double period = mesh.spec.l2 / periods;
  const double hx = mesh.spec.l1 / mesh.spec.nx;
  for (int n = 0; n < mesh.node_count(); ++n) {
    const Vec3& X = mesh.nodes[n];
    double t = std::fmod(X[1], period);
    if (period - t < 1e-12 * period) t = 0.0;
    double g = t <= 0.5 * period ? t : period - t;
    if (taper) g *= std::clamp(std::min(X[0], mesh.spec.l1 - X[0]) / hx, 0.0, 1.0);
    d[dofs.u_dof(n, 0)] += amp * g;
  }
  return d;
}

}  // namespace gpc
