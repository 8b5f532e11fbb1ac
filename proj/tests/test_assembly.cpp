#include "doctest.h"
#include "gpc/assembly.hpp"
#include "gpc/errors.hpp"
#include "support.hpp"

using namespace gpc;
using gpc::test::Rng;

namespace {

MaterialParams stvk_params() {
  MaterialParams p;
  p.model = Model::StVKNormalized;
  p.H_chi = 1.0;
  p.K_grad = 0.3;
  p.K_vol = 0.5;
  return p;
}

MaterialParams dw_params() {
  MaterialParams p;
  p.model = Model::DoubleWell;
  p.alpha = 10.0;
  p.eps_well = 0.2;
  p.H_chi = 2.0;
  p.K_grad = 0.1;
  return p;
}

// Small random displacement plus chi = I + noise on every corner.
Eigen::VectorXd random_state(const DofMap& dofs, Rng& rng, double du = 0.05,
                             double dchi = 0.1) {
  Eigen::VectorXd d = initial_fields(dofs);
  for (int k = 0; k < dofs.u_count(); ++k) d[k] += rng.uniform(-du, du);
  for (int k = dofs.u_count(); k < dofs.total(); ++k) d[k] += rng.uniform(-dchi, dchi);
  return d;
}

// Nodal fields of the homogeneous state u = (F - I) X, chi = Cof F.
Eigen::VectorXd homogeneous_state(const Mesh& m, const DofMap& dofs, const Tensor2& F) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(dofs.total());
  const Tensor2 cof = cofactor(F);
  for (int n = 0; n < m.node_count(); ++n) {
    const Vec3 u = (F - Tensor2::identity()) * m.nodes[n];
    for (int c = 0; c < 3; ++c) d[dofs.u_dof(n, c)] = u[c];
    if (m.is_corner[n])
      for (int c = 0; c < 9; ++c) d[dofs.chi_dof(n, c)] = cof[c];
  }
  return d;
}

Eigen::VectorXd element_vector(const ElementVectors& v) {
  Eigen::VectorXd r(kElementDofs);
  r << v.f_u, v.g_chi;
  return r;
}

}  // namespace

TEST_CASE("element residual is the gradient of the element energy") {
  const Mesh m = generate_block({1.2, 0.9, 0.7, 1, 1, 1});
  const DofMap dofs(m);
  const ElementGeometry geom = m.geometry(0);
  Rng rng(41);
  for (const MaterialParams& p : {stvk_params(), dw_params()}) {
    for (int t = 0; t < 3; ++t) {
      const Eigen::VectorXd d = random_state(dofs, rng);
      const Assembler as(m, dofs, p);
      Vec60 du;
      Vec72 dc;
      as.gather(d, 0, du, dc);
      const Eigen::VectorXd r = element_vector(element_residual(geom, du, dc, p));

      Eigen::VectorXd fd(kElementDofs);
      const double h = 1e-6;
      for (int k = 0; k < kElementDofs; ++k) {
        Vec60 up = du, um = du;
        Vec72 cp = dc, cm = dc;
        if (k < kElementDofsU) {
          up[k] += h;
          um[k] -= h;
        } else {
          cp[k - kElementDofsU] += h;
          cm[k - kElementDofsU] -= h;
        }
        fd[k] = (element_energy(geom, up, cp, p) - element_energy(geom, um, cm, p)) / (2 * h);
      }
      CHECK((r - fd).norm() <= 1e-6 * r.norm());
    }
  }
}

TEST_CASE("element stiffness: derivative of the residual, symmetric, constant chi-chi block") {
  const Mesh m = generate_block({1.0, 1.0, 0.5, 1, 1, 1});
  const DofMap dofs(m);
  const ElementGeometry geom = m.geometry(0);
  Rng rng(42);
  Mat132 chichi_ref;
  for (const MaterialParams& p : {stvk_params(), dw_params()}) {
    for (int t = 0; t < 3; ++t) {
      const Assembler as(m, dofs, p);
      Vec60 du;
      Vec72 dc;
      as.gather(random_state(dofs, rng), 0, du, dc);
      const Mat132 K = element_stiffness(geom, du, dc, p);

      CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff());

      Mat132 fd(kElementDofs, kElementDofs);
      const double h = 1e-6;
      for (int k = 0; k < kElementDofs; ++k) {
        Vec60 up = du, um = du;
        Vec72 cp = dc, cm = dc;
        if (k < kElementDofsU) {
          up[k] += h;
          um[k] -= h;
        } else {
          cp[k - kElementDofsU] += h;
          cm[k - kElementDofsU] -= h;
        }
        fd.col(k) = (element_vector(element_residual(geom, up, cp, p)) -
                     element_vector(element_residual(geom, um, cm, p))) /
                    (2 * h);
      }
      CHECK((K - fd).norm() <= 1e-5 * K.norm());

      // chi-chi block depends only on H_chi, K and the geometry
      if (p.model == Model::StVKNormalized) {
        const Mat132 block = K.bottomRightCorner(kElementDofsChi, kElementDofsChi);
        if (t == 0)
          chichi_ref = block;
        else
          CHECK((block - chichi_ref).norm() <= 1e-14 * chichi_ref.norm());
      }
    }
  }
}

TEST_CASE("undeformed state is stress free") {
  const Mesh m = generate_block({2.0, 1.0, 0.5, 2, 2, 1});
  const DofMap dofs(m);
  for (const MaterialParams& p : {stvk_params()}) {
    const Assembler as(m, dofs, p);
    const SparseSystem sys = as.assemble(initial_fields(dofs));
    CHECK(sys.residual.cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(sys.energy) <= 1e-14);
  }
}

TEST_CASE("homogeneous biaxial state: energy 0.8192 on a unit volume") {
  MaterialParams p = stvk_params();
  p.K_vol = 0.0;
  for (auto [nx, ny, nz] : {std::tuple{1, 1, 1}, {2, 2, 2}}) {
    const Mesh m = generate_block({1, 1, 1, nx, ny, nz});
    const DofMap dofs(m);
    const Assembler as(m, dofs, p);
    const Eigen::VectorXd d = homogeneous_state(m, dofs, Tensor2::diagonal(0.6, 0.6, 1.0));
    CHECK(as.total_energy(d) == doctest::Approx(0.8192).epsilon(1e-12));
    // chi = Cof F exactly, so the chi residual vanishes
    const SparseSystem sys = as.assemble(d, false);
    CHECK(sys.residual.tail(dofs.chi_count()).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("global assembly matches a dense element-by-element scatter") {
  const Mesh m = generate_block({2.0, 1.0, 1.0, 2, 1, 1});
  const DofMap dofs(m);
  const MaterialParams p = dw_params();
  const Assembler as(m, dofs, p);
  Rng rng(43);
  const Eigen::VectorXd d = random_state(dofs, rng);

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dofs.total(), dofs.total());
  Eigen::VectorXd R = Eigen::VectorXd::Zero(dofs.total());
  double E = 0.0;
  for (int e = 0; e < m.element_count(); ++e) {
    Vec60 du;
    Vec72 dc;
    as.gather(d, e, du, dc);
    const auto g = dofs.element_dofs(m.elements[e]);
    const Mat132 Ke = element_stiffness(m.geometry(e), du, dc, p);
    const Eigen::VectorXd Re = element_vector(element_residual(m.geometry(e), du, dc, p));
    for (int i = 0; i < kElementDofs; ++i) {
      R[g[i]] += Re[i];
      for (int j = 0; j < kElementDofs; ++j) K(g[i], g[j]) += Ke(i, j);
    }
    E += element_energy(m.geometry(e), du, dc, p);
  }
  const SparseSystem sys = as.assemble(d);
  CHECK((Eigen::MatrixXd(sys.matrix) - K).norm() <= 1e-13 * K.norm());
  CHECK((sys.residual - R).norm() <= 1e-13 * R.norm());
  CHECK(sys.energy == doctest::Approx(E).epsilon(1e-14));
  CHECK(as.total_energy(d) == doctest::Approx(E).epsilon(1e-14));
}

TEST_CASE("global residual is the gradient of the total energy with external loads") {
  const Mesh m = generate_block({1.0, 2.0, 0.5, 1, 2, 1});
  const DofMap dofs(m);
  Loading load;
  load.body_force = Vec3(0.3, -0.2, 0.1);
  load.tractions = {{Face::XMax, Vec3(0.5, 0.1, 0.0)}, {Face::YMax, Vec3(0.0, -0.4, 0.2)}};
  const Assembler as(m, dofs, stvk_params(), load);
  Rng rng(44);
  const Eigen::VectorXd d = random_state(dofs, rng);
  const SparseSystem sys = as.assemble(d, false);
  const double h = 1e-6;
  Eigen::VectorXd fd(dofs.total());
  for (int k = 0; k < dofs.total(); ++k) {
    Eigen::VectorXd dp = d, dm = d;
    dp[k] += h;
    dm[k] -= h;
    fd[k] = (as.total_energy(dp) - as.total_energy(dm)) / (2 * h);
  }
  CHECK((sys.residual - fd).norm() <= 1e-6 * sys.residual.norm());

  // Shape functions sum to one, so the u-residual components add up to
  // minus the resultant external force, whatever the state.
  const double V = 1.0 * 2.0 * 0.5;
  const Vec3 resultant = V * load.body_force + (2.0 * 0.5) * Vec3(0.5, 0.1, 0.0) +
                         (1.0 * 0.5) * Vec3(0.0, -0.4, 0.2);
  Vec3 sum = Vec3::Zero();
  for (int n = 0; n < m.node_count(); ++n)
    for (int c = 0; c < 3; ++c) sum[c] += sys.residual[dofs.u_dof(n, c)];
  CHECK((sum + resultant).norm() <= 1e-12);
}

TEST_CASE("energy and residual are invariant under rigid motions") {
  const Mesh m = generate_block({1.0, 1.0, 0.5, 2, 1, 1});
  const DofMap dofs(m);
  Rng rng(45);
  for (const MaterialParams& p : {stvk_params(), dw_params()}) {
    const Assembler as(m, dofs, p);
    const Eigen::VectorXd d = random_state(dofs, rng);
    const SparseSystem base = as.assemble(d, false);

    // translation
    Eigen::VectorXd dt = d;
    const Vec3 c = rng.vec();
    for (int n = 0; n < m.node_count(); ++n)
      for (int k = 0; k < 3; ++k) dt[dofs.u_dof(n, k)] += c[k];
    const SparseSystem tr = as.assemble(dt, false);
    CHECK(tr.energy == doctest::Approx(base.energy).epsilon(1e-12));
    CHECK((tr.residual - base.residual).norm() <= 1e-12 * base.residual.norm());

    // rotation: x -> R x, chi -> R chi
    const Tensor2 R = rng.rotation();
    Eigen::VectorXd dr = d;
    for (int n = 0; n < m.node_count(); ++n) {
      Vec3 x;
      for (int k = 0; k < 3; ++k) x[k] = m.nodes[n][k] + d[dofs.u_dof(n, k)];
      const Vec3 u = R * x - m.nodes[n];
      for (int k = 0; k < 3; ++k) dr[dofs.u_dof(n, k)] = u[k];
      if (!m.is_corner[n]) continue;
      Tensor2 chi;
      for (int k = 0; k < 9; ++k) chi[k] = d[dofs.chi_dof(n, k)];
      const Tensor2 rc = R * chi;
      for (int k = 0; k < 9; ++k) dr[dofs.chi_dof(n, k)] = rc[k];
    }
    CHECK(as.total_energy(dr) == doctest::Approx(base.energy).epsilon(1e-11));
  }
}

TEST_CASE("non-positive Jacobian is reported with its element") {
  const Mesh m = generate_block({2.0, 1.0, 1.0, 2, 1, 1});
  const DofMap dofs(m);
  const Assembler as(m, dofs, stvk_params());
  Eigen::VectorXd d = initial_fields(dofs);
  // reflect the second element through the plane x = 1
  for (int n = 0; n < m.node_count(); ++n)
    if (m.nodes[n][0] > 1.0) d[dofs.u_dof(n, 0)] = 2.0 * (1.0 - m.nodes[n][0]);
  try {
    as.assemble(d);
    FAIL("expected NonPositiveJacobian");
  } catch (const NonPositiveJacobian& e) {
    CHECK(e.element == 1);
    CHECK(e.qpoint >= 0);
    CHECK(e.jacobian <= 0.0);
  }
  CHECK(std::isinf(as.total_energy(d)));
}

TEST_CASE("dirichlet elimination") {
  const Mesh m = generate_block({1.0, 1.0, 1.0, 1, 1, 2});
  const DofMap dofs(m);
  const Assembler as(m, dofs, dw_params());
  Rng rng(46);
  const Eigen::VectorXd d = random_state(dofs, rng);
  const SparseSystem sys = as.assemble(d);

  Constraints bc(dofs);
  for (int n = 0; n < m.node_count(); ++n)
    if (m.on_face(n, Face::ZMin))
      for (int c = 0; c < 3; ++c) bc.set(dofs.u_dof(n, c), 0.0);
  const int top = [&] {
    for (int n = 0; n < m.node_count(); ++n)
      if (m.on_face(n, Face::ZMax)) return n;
    return -1;
  }();
  bc.set(dofs.u_dof(top, 2), -0.05);
  bc.set(dofs.u_dof(top, 2), -0.05);  // identical duplicates are fine
  CHECK_THROWS_AS(bc.set(dofs.u_dof(top, 2), 0.1), InconsistentBC);
  CHECK_THROWS_AS(bc.set(dofs.u_count(), 1.0), InvalidParameter);

  const ReducedSystem red = apply_dirichlet(sys, bc, d);
  CHECK(red.free_dofs.size() + bc.size() == static_cast<std::size_t>(dofs.total()));

  // dense oracle: K_ff and -R_f - K_fc (target_c - d_c)
  const Eigen::MatrixXd K(sys.matrix);
  const int nf = static_cast<int>(red.free_dofs.size());
  Eigen::MatrixXd Kff(nf, nf);
  Eigen::VectorXd rhs(nf);
  for (int i = 0; i < nf; ++i) {
    rhs[i] = -sys.residual[red.free_dofs[i]];
    for (const auto& [c, v] : bc.values()) rhs[i] -= K(red.free_dofs[i], c) * (v - d[c]);
    for (int j = 0; j < nf; ++j) Kff(i, j) = K(red.free_dofs[i], red.free_dofs[j]);
  }
  CHECK((Eigen::MatrixXd(red.matrix) - Kff).norm() <= 1e-15 * Kff.norm());
  CHECK((red.rhs - rhs).norm() <= 1e-12 * rhs.norm());

  // expand puts the prescribed increments back
  const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(nf, 1.0, 2.0);
  const Eigen::VectorXd dx = red.expand(x);
  for (const auto& [c, v] : bc.values()) CHECK(d[c] + dx[c] == doctest::Approx(v));
  for (int i = 0; i < nf; ++i) CHECK(dx[red.free_dofs[i]] == x[i]);

  const Eigen::VectorXd r = reactions(sys, bc);
  CHECK(r.size() == static_cast<Eigen::Index>(bc.size()));
  CHECK(r[0] == sys.residual[bc.values().begin()->first]);
}

TEST_CASE("reactions balance when every boundary displacement is fixed") {
  // Undeformed body with all boundary nodes held: interior equilibrium is
  // trivial and the reactions must sum to zero.
  const Mesh m = generate_block({1.0, 1.0, 1.0, 2, 2, 2});
  const DofMap dofs(m);
  const Assembler as(m, dofs, stvk_params());
  const SparseSystem sys = as.assemble(initial_fields(dofs));
  Constraints bc(dofs);
  for (int n = 0; n < m.node_count(); ++n) {
    bool boundary = false;
    for (Face f : {Face::XMin, Face::XMax, Face::YMin, Face::YMax, Face::ZMin, Face::ZMax})
      boundary = boundary || m.on_face(n, f);
    if (boundary)
      for (int c = 0; c < 3; ++c) bc.set(dofs.u_dof(n, c), 0.0);
  }
  const Eigen::VectorXd r = reactions(sys, bc);
  CHECK(std::abs(r.sum()) <= 1e-14);
  const ReducedSystem red = apply_dirichlet(sys, bc, initial_fields(dofs));
  CHECK(red.rhs.cwiseAbs().maxCoeff() <= 1e-14);
}
