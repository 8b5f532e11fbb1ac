#include "doctest.h"
#include "gpc/errors.hpp"
#include "gpc/mesh.hpp"
#include "support.hpp"

#include <set>

using namespace gpc;
using gpc::test::Rng;

namespace {

double mesh_volume(const Mesh& m) {
  double v = 0.0;
  const QuadratureRule rule = gauss_rule(3);
  for (int e = 0; e < m.element_count(); ++e)
    for (const auto& qp : rule) v += isoparametric_map(m.geometry(e), qp.xi).detJ * qp.weight;
  return v;
}

ElementGeometry box_element(double a, double b, double c) {
  ElementGeometry g;
  const auto& ref = reference_nodes();
  for (int k = 0; k < kNodesU; ++k)
    g.X[k] = Vec3(0.5 * a * (ref[k][0] + 1), 0.5 * b * (ref[k][1] + 1), 0.5 * c * (ref[k][2] + 1));
  return g;
}

}  // namespace

TEST_CASE("generate_block: counts, volume and errors") {
  const Mesh one = generate_block({1, 1, 1, 1, 1, 1});
  CHECK(one.element_count() == 1);
  CHECK(one.node_count() == 20);

  const Mesh fig3 = generate_block({5, 5, 0.5, 10, 10, 2});
  CHECK(fig3.element_count() == 200);

  const Mesh m = generate_block({5, 5, 0.5, 20, 20, 2});
  CHECK(m.element_count() == 800);
  CHECK(std::abs(mesh_volume(m) - 12.5) <= 1e-12 * 12.5);

  // serendipity node count: lattice points with at most one odd index
  for (auto [nx, ny, nz] : {std::tuple{1, 1, 1}, {2, 3, 1}, {4, 2, 3}}) {
    const Mesh b = generate_block({1.0, 2.0, 0.7, nx, ny, nz});
    const int corners = (nx + 1) * (ny + 1) * (nz + 1);
    const int edges = nx * (ny + 1) * (nz + 1) + ny * (nx + 1) * (nz + 1) + nz * (nx + 1) * (ny + 1);
    CHECK(b.node_count() == corners + edges);
    CHECK(std::abs(mesh_volume(b) - 1.4) <= 1e-12 * 1.4);
    // connectivity indices valid and distinct per element
    for (const Hex20& e : b.elements) {
      std::set<int> ids(e.nodes.begin(), e.nodes.end());
      CHECK(ids.size() == 20u);
      CHECK(*ids.begin() >= 0);
      CHECK(*ids.rbegin() < b.node_count());
    }
  }

  CHECK_THROWS_AS(generate_block({0, 1, 1, 1, 1, 1}), InvalidMeshSpec);
  CHECK_THROWS_AS(generate_block({1, -1, 1, 1, 1, 1}), InvalidMeshSpec);
  CHECK_THROWS_AS(generate_block({1, 1, 1, 1, 0, 1}), InvalidMeshSpec);
}

TEST_CASE("face tags") {
  const Mesh m = generate_block({2, 1, 1, 2, 1, 1});
  int xmin = 0, xmax = 0;
  for (int n = 0; n < m.node_count(); ++n) {
    CHECK(m.on_face(n, Face::XMin) == (m.nodes[n][0] == 0.0));
    CHECK(m.on_face(n, Face::XMax) == (m.nodes[n][0] == 2.0));
    CHECK(m.on_face(n, Face::ZMax) == (m.nodes[n][2] == 1.0));
    xmin += m.on_face(n, Face::XMin);
    xmax += m.on_face(n, Face::XMax);
  }
  CHECK(xmin == 8);  // one serendipity face
  CHECK(xmax == 8);
}

TEST_CASE("shape functions: partition of unity, Kronecker property, centre values") {
  const auto& ref = reference_nodes();
  for (int k = 0; k < kNodesU; ++k) {
    const ShapeU s = shape_u(ref[k]);
    for (int a = 0; a < kNodesU; ++a) CHECK(s.N[a] == doctest::Approx(a == k ? 1.0 : 0.0));
    if (k < kNodesChi) {
      const ShapeChi c = shape_chi(ref[k]);
      for (int a = 0; a < kNodesChi; ++a) CHECK(c.N[a] == doctest::Approx(a == k ? 1.0 : 0.0));
    }
  }
  const ShapeChi c0 = shape_chi(Vec3::Zero());
  for (double v : c0.N) CHECK(v == 0.125);

  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    const Vec3 xi = rng.vec();
    const ShapeU s = shape_u(xi);
    const ShapeChi c = shape_chi(xi);
    double su = 0.0, sc = 0.0;
    Vec3 gu = Vec3::Zero(), gc = Vec3::Zero();
    for (int a = 0; a < kNodesU; ++a) {
      su += s.N[a];
      gu += s.dN[a];
    }
    for (int a = 0; a < kNodesChi; ++a) {
      sc += c.N[a];
      gc += c.dN[a];
    }
    CHECK(std::abs(su - 1.0) <= 1e-14);
    CHECK(std::abs(sc - 1.0) <= 1e-14);
    CHECK(gu.norm() <= 1e-13);
    CHECK(gc.norm() <= 1e-14);

    // derivative FD check
    for (int d = 0; d < 3; ++d) {
      Vec3 xp = xi, xm = xi;
      xp[d] += 1e-6;
      xm[d] -= 1e-6;
      const ShapeU sp = shape_u(xp), sm = shape_u(xm);
      for (int a = 0; a < kNodesU; ++a)
        CHECK(std::abs((sp.N[a] - sm.N[a]) / 2e-6 - s.dN[a][d]) <= 1e-8);
    }
  }
}

TEST_CASE("gauss rules") {
  const QuadratureRule r3 = gauss_rule(3), r2 = gauss_rule(2);
  CHECK(r3.size() == 27u);
  CHECK(r2.size() == 8u);
  double w3 = 0, w2 = 0, m3 = 0, p5 = 0;
  for (const auto& q : r3) {
    w3 += q.weight;
    m3 += q.weight * q.xi[0] * q.xi[0] * q.xi[1] * q.xi[1] * q.xi[2] * q.xi[2];
    p5 += q.weight * std::pow(q.xi[0], 4) * std::pow(q.xi[1], 5);  // odd -> 0
  }
  for (const auto& q : r2) w2 += q.weight;
  CHECK(w3 == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(w2 == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(m3 == doctest::Approx(8.0 / 27.0).epsilon(1e-14));
  CHECK(std::abs(p5) <= 1e-15);
  double x4 = 0;
  for (const auto& q : r3) x4 += q.weight * std::pow(q.xi[0], 4);
  CHECK(x4 == doctest::Approx(4.0 * 2.0 / 5.0).epsilon(1e-14));  // degree 4 exact
  CHECK_THROWS_AS(gauss_rule(1), InvalidQuadrature);
  CHECK_THROWS_AS(gauss_rule(4), InvalidQuadrature);
}

TEST_CASE("isoparametric map") {
  const MappedPoint c = isoparametric_map(box_element(1, 1, 1), Vec3::Zero());
  CHECK((c.x - Vec3(0.5, 0.5, 0.5)).norm() <= 1e-15);
  CHECK(max_abs(c.jacobian - Tensor2::diagonal(0.5, 0.5, 0.5)) <= 1e-15);

  Rng rng(32);
  const ElementGeometry box = box_element(2, 1, 1);
  for (int t = 0; t < 20; ++t) {
    const Vec3 xi = rng.vec();
    const MappedPoint p = isoparametric_map(box, xi);
    CHECK(p.detJ == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p.x[0] >= 0.0);
    CHECK(p.x[0] <= 2.0);
    CHECK(p.x[1] >= 0.0);
    CHECK(p.x[1] <= 1.0);
  }

  ElementGeometry inverted = box_element(1, 1, 1);
  for (auto& x : inverted.X) x[0] = -x[0];
  CHECK_THROWS_AS(isoparametric_map(inverted, Vec3::Zero()), InvertedElement);
}

TEST_CASE("field reproduction on a distorted element") {
  // Perturb the midside nodes of a block element so the map is curved, then
  // interpolate global fields at the nodes.
  Rng rng(33);
  ElementGeometry g = box_element(1.5, 1.0, 0.8);
  for (int k = 8; k < kNodesU; ++k) g.X[k] += rng.vec(-0.03, 0.03);

  const Tensor2 A = rng.tensor();
  const Vec3 b = rng.vec();
  // u = A x + (x . x) b, chi = B x
  const Tensor2 B = rng.tensor();
  // Linear chi fields are reproduced when the geometry map is affine.
  for (const auto& qp : gauss_rule(3)) {
    const MappedPoint mp = isoparametric_map(box_element(1.5, 1.0, 0.8), qp.xi);
    Vec3 gchi = Vec3::Zero();
    for (int a = 0; a < kNodesChi; ++a)
      gchi += (B * box_element(1.5, 1.0, 0.8).X[a])[0] * mp.dNchi[a];
    CHECK((gchi - Vec3(B(0, 0), B(0, 1), B(0, 2))).norm() <= 1e-12);
  }

  // Straight element: quadratic displacement fields reproduced exactly.
  const ElementGeometry s = box_element(1.5, 1.0, 0.8);
  for (const auto& qp : gauss_rule(3)) {
    const MappedPoint mp = isoparametric_map(s, qp.xi);
    Tensor2 grad;
    for (int a = 0; a < kNodesU; ++a) {
      const Vec3& X = s.X[a];
      const Vec3 u = A * X + X.squaredNorm() * b;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) grad(i, j) += u[i] * mp.dNu[a][j];
    }
    Tensor2 exact = A + Tensor2::outer(b, 2.0 * mp.x);
    CHECK(max_abs(grad - exact) <= 1e-12);
  }

  // Curved element: linear displacement fields reproduced exactly.
  for (const auto& qp : gauss_rule(3)) {
    const MappedPoint mp = isoparametric_map(g, qp.xi);
    Tensor2 grad;
    for (int a = 0; a < kNodesU; ++a) {
      const Vec3 u = A * g.X[a] + b;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) grad(i, j) += u[i] * mp.dNu[a][j];
    }
    CHECK(max_abs(grad - A) <= 1e-12);
  }
}

TEST_CASE("dof map") {
  const Mesh m = generate_block({1, 1, 1, 2, 2, 2});
  const DofMap d(m);
  int corners = 0;
  for (int n = 0; n < m.node_count(); ++n) corners += m.is_corner[n];
  CHECK(corners == 27);
  CHECK(d.u_count() == 3 * m.node_count());
  CHECK(d.total() == 3 * m.node_count() + 9 * 27);

  std::set<int> all;
  for (const Hex20& e : m.elements) {
    const auto dofs = d.element_dofs(e);
    CHECK(dofs.size() == 132u);
    std::set<int> local(dofs.begin(), dofs.end());
    CHECK(local.size() == 132u);
    all.insert(dofs.begin(), dofs.end());
    for (int k = 0; k < kElementDofsU; ++k) CHECK(d.is_u_dof(dofs[k]));
    for (int k = kElementDofsU; k < kElementDofs; ++k) CHECK(!d.is_u_dof(dofs[k]));
  }
  // dense and non-overlapping
  CHECK(static_cast<int>(all.size()) == d.total());
  CHECK(*all.begin() == 0);
  CHECK(*all.rbegin() == d.total() - 1);
  for (int n = 0; n < m.node_count(); ++n)
    if (!m.is_corner[n]) CHECK(d.chi_dof(n, 0) == -1);
}
