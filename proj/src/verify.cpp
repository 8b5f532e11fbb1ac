#include "gpc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gpc {

double TangentCheck::worst() const { return std::max({P, S_m, mu, d_uu, d_uchi, d_chichi}); }

namespace {

double rel(double diff, double a, double b) {
  const double s = std::max(a, b);
  return s > 0.0 ? diff / s : 0.0;
}

template <class Fn>
Tensor2 grad9(Fn f, const Tensor2& x, double h) {
  Tensor2 g;
  for (int k = 0; k < 9; ++k) {
    Tensor2 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

template <class Fn>
Tensor4 jac9(Fn f, const Tensor2& x, double h) {
  Tensor4 J;
  for (int q = 0; q < 9; ++q) {
    Tensor2 xp = x, xm = x;
    xp[q] += h;
    xm[q] -= h;
    const Tensor2 d = (1.0 / (2.0 * h)) * (f(xp) - f(xm));
    for (int p = 0; p < 9; ++p) J.at(p, q) = d[p];
  }
  return J;
}

}  // namespace

TangentCheck check_tangent(const MaterialParams& params, int samples, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), jrange(0.5, 1.5);
  TangentCheck out;

  for (int n = 0; n < samples; ++n) {
    Tensor2 F;
    do {
      for (int k = 0; k < 9; ++k) F[k] = (k % 4 == 0 ? 1.0 : 0.0) + 0.3 * unit(gen);
    } while (det(F) <= 0.1);
    F = std::cbrt(jrange(gen) / det(F)) * F;
    Tensor2 chi = cofactor(F);
    for (int k = 0; k < 9; ++k) chi[k] += 0.1 * unit(gen);
    Tensor3 G;
    for (int k = 0; k < 27; ++k) G[k] = unit(gen);

    const double hF = 1e-6 * std::max(1.0, norm(F));
    // W is quadratic in chi and grad chi: central differences are exact there
    // and a larger step keeps round-off from the W0 term small.
    const double hc = 1e-3 * std::max(1.0, norm(chi));
    const double hg = 1.0;

    auto W = [&](const Tensor2& f, const Tensor2& c, const Tensor3& g) {
      return energy_total(params, {f, c, g});
    };
    const PointResponse r = evaluate(params, {F, chi, G}, true);

    const Tensor2 P_fd = grad9([&](const Tensor2& x) { return W(x, chi, G); }, F, hF);
    out.P = std::max(out.P, rel(norm(r.P - P_fd), norm(r.P), norm(P_fd)));

    const Tensor2 S_fd = grad9([&](const Tensor2& x) { return W(F, x, G); }, chi, hc);
    out.S_m = std::max(out.S_m, rel(norm(r.S_m - S_fd), norm(r.S_m), norm(S_fd)));

    double mu_diff = 0.0, mu_norm = 0.0, mu_fd_norm = 0.0;
    for (int k = 0; k < 27; ++k) {
      Tensor3 gp = G, gm = G;
      gp[k] += hg;
      gm[k] -= hg;
      const double fd = (W(F, chi, gp) - W(F, chi, gm)) / (2.0 * hg);
      mu_diff += (r.mu[k] - fd) * (r.mu[k] - fd);
      mu_norm += r.mu[k] * r.mu[k];
      mu_fd_norm += fd * fd;
    }
    out.mu = std::max(out.mu, rel(std::sqrt(mu_diff), std::sqrt(mu_norm), std::sqrt(mu_fd_norm)));

    const TangentBlocks& t = r.tangent;
    const Tensor4 duu_fd =
        jac9([&](const Tensor2& x) { return first_pk_stress(params, x, chi); }, F, hF);
    out.d_uu = std::max(out.d_uu, rel((pack(t.d_uu) - pack(duu_fd)).norm(),
                                      pack(t.d_uu).norm(), pack(duu_fd).norm()));
    const Tensor4 duc_fd =
        jac9([&](const Tensor2& x) { return first_pk_stress(params, F, x); }, chi, hc);
    out.d_uchi = std::max(out.d_uchi, rel((pack(t.d_uchi) - pack(duc_fd)).norm(),
                                          pack(t.d_uchi).norm(), pack(duc_fd).norm()));

    // chi-chi block: dS_m/dchi = H_chi I and dmu/dgrad = K I
    const Tensor4 dss_fd =
        jac9([&](const Tensor2& x) { return relative_stress(params, F, x); }, chi, hc);
    const Mat9 dss = t.chi_mass * Mat9::Identity();
    double e = rel((dss - pack(dss_fd)).norm(), dss.norm(), pack(dss_fd).norm());
    Eigen::Matrix<double, 27, 27> dgg_fd;
    for (int q = 0; q < 27; ++q) {
      Tensor3 gp = G, gm = G;
      gp[q] += hg;
      gm[q] -= hg;
      const Tensor3 mp = higher_order_stress(params, gp), mm = higher_order_stress(params, gm);
      for (int p = 0; p < 27; ++p) dgg_fd(p, q) = (mp[p] - mm[p]) / (2.0 * hg);
    }
    const Eigen::Matrix<double, 27, 27> dgg =
        t.grad_modulus * Eigen::Matrix<double, 27, 27>::Identity();
    e = std::max(e, rel((dgg - dgg_fd).norm(), dgg.norm(), dgg_fd.norm()));
    out.d_chichi = std::max(out.d_chichi, e);
  }
  out.samples = samples;
  return out;
}

}  // namespace gpc
