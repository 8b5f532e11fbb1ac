// Acceptance checks: one PASS/FAIL line per criterion.
//
// Exit code 0 when every check ran (whatever its verdict), 2 on an
// unexpected error. With --strict any FAIL gives exit code 1. --quick skips
// the checks that run full relaxations.

#include "gpc/analysis.hpp"
#include "gpc/config.hpp"
#include "gpc/errors.hpp"
#include "gpc/experiment.hpp"
#include "gpc/solver.hpp"
#include "gpc/verify.hpp"
#include "gpc/vtk.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace gpc;
using Clock = std::chrono::steady_clock;

int g_failures = 0;
std::FILE* g_report = nullptr;

// printf to stdout and, when set, to the report file.
void say(const char* format, ...) {
  std::va_list args;
  va_start(args, format);
  std::va_list copy;
  va_copy(copy, args);
  std::vprintf(format, args);
  std::fflush(stdout);
  if (g_report) {
    std::vfprintf(g_report, format, copy);
    std::fflush(g_report);
  }
  va_end(copy);
  va_end(args);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void verdict(int id, bool pass, const std::string& detail, Clock::time_point t0) {
  if (!pass) ++g_failures;
  say("criterion %d %s  %s  (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(),
              seconds_since(t0));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  Tensor2 tensor(double lo = -1.0, double hi = 1.0) {
    Tensor2 a;
    for (int k = 0; k < 9; ++k) a[k] = uniform(lo, hi);
    return a;
  }

 private:
  std::mt19937_64 gen_;
};

double rel(const Tensor2& a, const Tensor2& b) {
  return norm(a - b) / std::max(norm(b), 1e-300);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void criterion_1() {
  const auto t0 = Clock::now();
  Rng rng(1);
  double cross = 0.0, dets = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Tensor2 F = rng.tensor();
    cross = std::max(cross, rel(0.5 * tensor_cross(F, F), cofactor(F)));
  }
  // det(Cof F) - (det F)^2 carries round-off ~1e-16 |F|^3/|det F|: draws are
  // kept to |F|^3/|det F| <= 1e3
  for (int t = 0; t < 1000;) {
    const Tensor2 F = rng.tensor();
    const double d = det(F);
    if (std::pow(norm(F), 3) > 1e3 * std::abs(d)) continue;
    dets = std::max(dets, rel(det(cofactor(F)), d * d));
    ++t;
  }
  const bool ok = cross <= 1e-12 && dets <= 1e-12 && seconds_since(t0) < 1.0;
  verdict(1, ok, "max rel |F x F/2 - Cof F| " + fmt(cross) + ", |det Cof F - det^2 F| " + fmt(dets),
          t0);
}

void criterion_2() {
  const auto t0 = Clock::now();
  Rng rng(2);
  double err = 0.0;
  for (int t = 0; t < 20; ++t) {
    const double x1 = rng.uniform(1e-3, 1.0), x2 = rng.uniform(0.0, 1.0),
                 x3 = rng.uniform(0.0, 1.0);
    // y = (x1^2, x2 x1^(4/5), x3 x1^2)
    const Tensor2 G(2 * x1, 0, 0, 0.8 * x2 * std::pow(x1, -0.2), std::pow(x1, 0.8), 0,
                    2 * x1 * x3, 0, x1 * x1);
    const Tensor2 expected(std::pow(x1, 2.8), -0.8 * x2 * std::pow(x1, 1.8),
                           -2 * std::pow(x1, 1.8) * x3, 0, 2 * x1 * x1 * x1, 0, 0, 0,
                           2 * std::pow(x1, 1.8));
    err = std::max(err, rel(cofactor(G), expected));
  }
  verdict(2, err <= 1e-12, "20 points, max rel error " + fmt(err), t0);
}

void criterion_3() {
  const auto t0 = Clock::now();
  std::vector<std::pair<std::string, MaterialParams>> models;
  MaterialParams p;
  p.model = Model::StVKNormalized;
  p.H_chi = 3.0;
  p.K_grad = 0.7;
  p.K_vol = 0.5;
  models.emplace_back("stvk_normalized", p);
  p.model = Model::StVK;
  p.lambda_lame = 1.3;
  p.mu_lame = 0.8;
  models.emplace_back("stvk", p);
  p = MaterialParams{};
  p.model = Model::DoubleWell;
  p.alpha = 1.0;
  p.eps_well = 0.05;
  p.H_chi = 2.0;
  p.K_grad = 10.0;
  models.emplace_back("double_well", p);

  double worst = 0.0;
  std::string detail;
  for (const auto& [name, params] : models) {
    const TangentCheck c = check_tangent(params, 100, 3);
    worst = std::max(worst, c.worst());
    detail += name + " " + fmt(c.worst()) + " ";
  }
  const bool ok = worst <= 1e-5 && seconds_since(t0) < 30.0;
  verdict(3, ok, "100 states per model, worst rel error: " + detail, t0);
}

void criterion_4() {
  const auto t0 = Clock::now();
  MaterialParams p;
  p.model = Model::StVKNormalized;
  const Vec3 e1(1, 0, 0), e2(0, 1, 0);
  double gap_err = 0.0, w_err = 0.0;
  bool sign_ok = true;
  const int n = 1000;
  for (int k = 1; k <= n; ++k) {
    const double eps = std::sqrt(0.5) * k / n;
    gap_err = std::max(gap_err, std::abs(stvk_laminate_gap(eps).gap - std::pow(2 * eps * eps - 1, 2)));
    const auto [Fp, Fm] = stvk_laminate_pair(eps);
    const double w = 1 - 2 * std::pow(eps, 4);
    w_err = std::max({w_err, std::abs(w0(p, Fp) - w), std::abs(w0(p, Fm) - w)});
    const double probe = rank_one_probe_stvk(Tensor2::diagonal(eps, eps, 1), e1, e2).curvature;
    if (k < n) sign_ok = sign_ok && probe < 0.0;
    else sign_ok = sign_ok && std::abs(probe) <= 1e-15;
  }
  for (double eps = 0.71; eps < 1.2; eps += 0.01)
    sign_ok = sign_ok &&
              rank_one_probe_stvk(Tensor2::diagonal(eps, eps, 1), e1, e2).curvature > 0.0;
  const bool ok = gap_err <= 1e-14 && w_err <= 1e-14 && sign_ok && seconds_since(t0) < 1.0;
  verdict(4, ok,
          "gap error " + fmt(gap_err) + ", W0(F+-) error " + fmt(w_err) +
              ", probe sign change at sqrt(2)/2 " + (sign_ok ? "yes" : "no"),
          t0);
}

double homogeneous_error(const Mesh& m, const DofMap& dofs, const Eigen::VectorXd& d,
                         const Tensor2& F) {
  double err = 0.0;
  const Tensor2 cof = cofactor(F);
  for (int n = 0; n < m.node_count(); ++n) {
    const Vec3 u = (F - Tensor2::identity()) * m.nodes[n];
    for (int c = 0; c < 3; ++c) err = std::max(err, std::abs(d[dofs.u_dof(n, c)] - u[c]));
    if (m.is_corner[n])
      for (int c = 0; c < 9; ++c) err = std::max(err, std::abs(d[dofs.chi_dof(n, c)] - cof[c]));
  }
  return err;
}

void criterion_5() {
  const auto t0 = Clock::now();
  MaterialParams p;
  p.model = Model::StVKNormalized;
  p.H_chi = 1.0;
  p.K_grad = 0.1;
  p.K_vol = 1.0;
  SolverConfig cfg;
  cfg.newton_tol = 1e-13;
  cfg.newton_abs_tol = 1e-14;
  Rng rng(5);
  int max_iters = 0;
  double max_err = 0.0, max_ratio = 0.0;
  bool tail = true;
  for (int n : {1, 2}) {
    const Mesh m = generate_block({1.0, 0.8, 0.6, n, n, n});
    const DofMap dofs(m);
    const Assembler as(m, dofs, p);
    const Tensor2 F = Tensor2::identity() + rng.tensor(-0.1, 0.1);
    LoadStep step;
    step.boundary_gradient = F;
    step.faces = {{Face::XMin}, {Face::XMax}, {Face::YMin}, {Face::YMax}, {Face::ZMin}, {Face::ZMax}};
    const Constraints bc = boundary_constraints(m, dofs, step);

    Eigen::VectorXd d = initial_fields(dofs);
    const StepRecord rec = newton_step(d, as, bc, cfg);
    max_iters = std::max(max_iters, rec.iterations);
    max_err = std::max(max_err, homogeneous_error(m, dofs, d, F));

    // Affine loading is solved in one step, so the quadratic tail is
    // observed from a perturbed start with the boundary data in place.
    d = initial_fields(dofs);
    for (const auto& [dof, v] : bc.values()) d[dof] = v;
    d = perturb_initial(d, dofs, bc, 0.05, 50 + n);
    const StepRecord pert = newton_step(d, as, bc, cfg);
    max_err = std::max(max_err, homogeneous_error(m, dofs, d, F));
    int seen = 0;
    const auto& r = pert.residuals;
    for (std::size_t k = 1; k + 1 < r.size(); ++k)
      if (r[k] < 1e-2 && r[k + 1] > 1e-13) {
        max_ratio = std::max(max_ratio, r[k + 1] / (r[k] * r[k]));
        ++seen;
      }
    // one element has every displacement prescribed: chi enters
    // quadratically and Newton is exact in one iteration
    tail = tail && pert.converged && (n == 1 || seen >= 1);
  }
  const bool ok = max_iters <= 5 && max_err <= 1e-8 && tail && max_ratio <= 10.0 &&
                  seconds_since(t0) < 10.0;
  verdict(5, ok,
          "iterations " + std::to_string(max_iters) + ", error " + fmt(max_err) +
              ", max r_k+1/r_k^2 " + fmt(max_ratio),
          t0);
}

void criterion_6() {
  const auto t0 = Clock::now();
  MaterialParams p;
  p.model = Model::DoubleWell;
  p.alpha = 1e9;
  p.H_chi = 1e5;
  bool ok = true;
  std::string detail;
  for (double eps : {0.05, 0.2}) {
    p.eps_well = eps;
    const auto [F1, F2] = well_gradients(eps);
    ok = ok && w0(p, F1) == 0.0 && w0(p, F2) == 0.0;
    ok = ok && c_eq(F1, eps) == 0.0 && c_eq(F2, eps) == 1.0;
    ok = ok && std::abs(c_eq(Tensor2::identity(), eps) - 0.5) <= 1e-15;
  }
  detail = "w0(F1) = w0(F2) = 0, C_eq = 0, 1, 1/2 at eps 0.05 and 0.2";
  verdict(6, ok, detail, t0);
}

struct RunSummary {
  bool ok = false;
  std::string error;
  LaminateStats bands;
  SolveReport report;
  std::string vtk;
  double max_f12_dev = 0.0;
};

RunSummary run(const std::string& label, RunConfig cfg) {
  const auto t0 = Clock::now();
  RunSummary s;
  try {
    RunResult r = run_experiment(cfg);
    s.ok = r.report.converged();
    if (!s.ok) s.error = "not converged";
    s.bands = r.bands;
    std::ostringstream os;
    write_vtk(*r.mesh, r.snapshot, os, cfg.name);
    s.vtk = os.str();
    for (double v : band_indicator(MaterialParams{}, r.snapshot))
      s.max_f12_dev = std::max(s.max_f12_dev, std::abs(v));
    s.report = std::move(r.report);
  } catch (const Error& e) {
    s.error = e.what();
  }
  say("  run %s: %s, bands %d, mean width %.4g, energy %.10g  (%.1f s)\n", label.c_str(),
              s.ok ? "converged" : ("failed: " + s.error).c_str(), s.bands.band_count,
              s.bands.mean_band_width, s.report.final_energy(), seconds_since(t0));
  return s;
}

RunConfig with_mesh(RunConfig c, int n) {
  c.block.nx = c.block.ny = n;
  c.solver.perturbation_amplitude = 1e-4 * std::max({c.block.l1 / n, c.block.l2 / n, c.block.l3 / c.block.nz});
  return c;
}

void criteria_7_8() {
  auto t0 = Clock::now();
  const RunSummary k1 = run("dw_grad_K1", preset("dw_grad_K1"));
  const RunSummary k10 = run("dw_grad_K10", preset("dw_grad_K10"));
  const RunSummary k50 = run("dw_grad_K50", preset("dw_grad_K50"));
  const RunSummary k250 = run("dw_grad_K250", preset("dw_grad_K250"));
  const bool all = k1.ok && k10.ok && k50.ok && k250.ok;
  const int b1 = k1.bands.band_count, b10 = k10.bands.band_count, b50 = k50.bands.band_count,
            b250 = k250.bands.band_count;
  verdict(7, all && b1 >= b10 && b10 >= b50 && b250 == 0,
          "bands K=1,10,50,250: " + std::to_string(b1) + ", " + std::to_string(b10) + ", " +
              std::to_string(b50) + ", " + std::to_string(b250),
          t0);

  t0 = Clock::now();
  const RunSummary l10 = run("dw_local_mesh10", preset("dw_local_mesh10"));
  const RunSummary l20 = run("dw_local_mesh20", preset("dw_local_mesh20"));
  const RunSummary g10 = run("dw_grad_K10 on 10x10x1", with_mesh(preset("dw_grad_K10"), 10));
  const double h_ratio = 2.0;
  const double local_ratio = l10.bands.mean_band_width / l20.bands.mean_band_width;
  const double grad_change =
      std::abs(g10.bands.mean_band_width / k10.bands.mean_band_width - 1.0);
  const bool local_ok = std::abs(local_ratio / h_ratio - 1.0) <= 0.25;
  const bool grad_ok = grad_change < 0.30;
  verdict(8, l10.ok && l20.ok && g10.ok && k10.ok && local_ok && grad_ok,
          "local width ratio " + fmt(local_ratio) + " vs element ratio 2 (" +
              (local_ok ? "ok" : "off") + "), K=10 width change " + fmt(100 * grad_change) +
              "% (" + (grad_ok ? "ok" : "off") + ")",
          t0);
}

void criterion_9() {
  const auto t0 = Clock::now();
  MaterialParams p;
  p.model = Model::StVKNormalized;
  const double eps = 0.6, gap = 0.0784;
  const Tensor2 Fh = Tensor2::diagonal(eps, eps, 1);
  std::string detail;
  bool ok = true;
  double previous = 0.0;
  for (int periods : {2, 4, 8, 16}) {
    const int n = 2 * periods;
    const Mesh m = generate_block({1, 1, 0.25, n, n, 1});
    const DofMap dofs(m);
    const double hom = local_energy(m, dofs, affine_interpolant(m, dofs, Fh), p);
    const double lam = local_energy(m, dofs, laminate_interpolant(m, dofs, eps, periods, true), p);
    const double diff = (lam - hom) / 0.25;
    ok = ok && diff < 0.0 && diff < previous;
    if (previous < 0.0) ok = ok && (diff + gap) <= 0.55 * (previous + gap);
    previous = diff;
    detail += fmt(diff) + " ";
  }
  ok = ok && std::abs(previous + gap) <= 0.15 * gap && seconds_since(t0) < 60.0;
  verdict(9, ok, "laminate minus affine energy per volume, periods 2..16: " + detail + "-> -0.0784",
          t0);
}

bool same_energies(const SolveReport& a, const SolveReport& b) {
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t s = 0; s < a.steps.size(); ++s) {
    if (a.steps[s].iterations != b.steps[s].iterations) return false;
    if (std::abs(a.steps[s].energy - b.steps[s].energy) > 1e-12 * std::max(1.0, std::abs(a.steps[s].energy)))
      return false;
  }
  return true;
}

void criterion_10_and_banding() {
  auto t0 = Clock::now();
  const RunSummary a = run("stvk_fig2", preset("stvk_fig2"));
  const RunSummary b = run("stvk_fig2 again", preset("stvk_fig2"));
  const bool energies = a.ok && b.ok && same_energies(a.report, b.report);
  const bool bytes = !a.vtk.empty() && a.vtk == b.vtk;
  verdict(10, energies && bytes,
          std::string("stvk_fig2 twice: energies ") + (energies ? "identical" : "differ") +
              ", VTK " + (bytes ? "byte-identical" : "differs"),
          t0);

  t0 = Clock::now();
  const RunSummary f1 = run("stvk_fig1", preset("stvk_fig1"));
  const bool banded = f1.ok && f1.bands.band_count > 0;
  const bool clean = a.ok && a.bands.band_count == 0 && a.max_f12_dev < 1e-6;
  const bool ok = banded && clean;
  if (!ok) ++g_failures;
  say("banding %s  F12 bands: StVK %d (max |F12 - mean| %s), gradient-polyconvex %d "
              "(max |F12 - mean| %s)  (%.1f s)\n",
              ok ? "PASS" : "FAIL", f1.bands.band_count, fmt(f1.max_f12_dev).c_str(),
              a.bands.band_count, fmt(a.max_f12_dev).c_str(), seconds_since(t0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  bool strict = false;
  bool quick = false;
  app.add_flag("--strict", strict, "exit with status 1 when any check fails");
  std::string report;
  app.add_flag("--quick", quick, "skip the checks that need full relaxation runs");
  app.add_option("--report", report, "also write the results to this file");
  CLI11_PARSE(app, argc, argv);
  if (!report.empty() && !(g_report = std::fopen(report.c_str(), "w"))) {
    std::cerr << "error: cannot write '" << report << "'\n";
    return 2;
  }

  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    if (quick) say("criterion 7 SKIP\ncriterion 8 SKIP\n");
    else criteria_7_8();
    criterion_9();
    if (quick) say("criterion 10 SKIP\nbanding SKIP\n");
    else criterion_10_and_banding();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  say("%d check(s) failed\n", g_failures);
  return strict && g_failures > 0 ? 1 : 0;
}
