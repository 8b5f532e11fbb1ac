#include "gpc/solver.hpp"

#include "gpc/errors.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#ifdef GPC_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif
#ifdef GPC_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

namespace gpc {

void SolverConfig::validate() const {
  if (load_steps < 1) throw InvalidParameter("load_steps must be >= 1");
  if (!(newton_tol > 0.0) || !(newton_abs_tol > 0.0))
    throw InvalidParameter("Newton tolerances must be > 0");
  if (max_iters < 1) throw InvalidParameter("max_iters must be >= 1");
  if (perturbation_amplitude < 0.0)
    throw InvalidParameter("perturbation amplitude must be >= 0");
  if (step_halving_max < 0) throw InvalidParameter("step_halving_max must be >= 0");
  if (!(energy_slack >= 0.0)) throw InvalidParameter("energy_slack must be >= 0");
}

bool SolveReport::converged() const {
  return !steps.empty() &&
         std::all_of(steps.begin(), steps.end(), [](const auto& s) { return s.converged; });
}

void write_report_csv(const SolveReport& report, std::ostream& os) {
  os << "step,iter,residual,energy\n";
  char buf[128];
  for (const auto& s : report.steps)
    for (std::size_t k = 0; k < s.residuals.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.10e,%.15e\n", s.step, k, s.residuals[k],
                    s.energies[k]);
      os << buf;
    }
}

Eigen::VectorXd linear_solve(const SparseMatrix& K, const Eigen::VectorXd& r) {
  if (K.rows() != K.cols() || K.rows() != r.size())
    throw LinearSolveFailure("linear_solve: dimension mismatch");
  if (K.rows() == 0) return Eigen::VectorXd(0);
  const double rnorm = r.norm();
  if (rnorm == 0.0) return Eigen::VectorXd::Zero(r.size());

#ifdef GPC_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix> lu;
#endif
  lu.compute(K);
  if (lu.info() != Eigen::Success)
    throw LinearSolveFailure("sparse LU factorization failed (matrix singular or "
                             "numerically singular), n = " +
                             std::to_string(K.rows()));
  Eigen::VectorXd x = lu.solve(r);
  if (lu.info() != Eigen::Success || !x.allFinite())
    throw LinearSolveFailure("sparse LU solve failed");

  double err = (K * x - r).norm() / rnorm;
  for (int refine = 0; refine < 3 && err > 1e-12; ++refine) {
    const Eigen::VectorXd res = r - K * x;
    x += lu.solve(res);
    err = (K * x - r).norm() / rnorm;
  }
  if (!(err <= 1e-10))
    throw LinearSolveFailure("backward error " + std::to_string(err) +
                             " exceeds 1e-10 (ill-conditioned or singular matrix)");
  return x;
}

std::string to_string(LoadKind k) {
  switch (k) {
    case LoadKind::BiaxialAffine: return "biaxial_affine";
    case LoadKind::FixedTopBottom: return "fixed_top_bottom";
    case LoadKind::FixedAll: return "fixed_all";
  }
  return "?";
}

LoadKind load_kind_from_string(const std::string& name) {
  if (name == "biaxial_affine") return LoadKind::BiaxialAffine;
  if (name == "fixed_top_bottom") return LoadKind::FixedTopBottom;
  if (name == "fixed_all") return LoadKind::FixedAll;
  throw InvalidParameter("unknown boundary condition kind '" + name + "'");
}

std::vector<LoadStep> load_program(LoadKind kind, double total, int steps) {
  if (steps < 1) throw InvalidParameter("load program needs at least one step");
  const std::vector<FaceConstraint> all = {{Face::XMin}, {Face::XMax}, {Face::YMin},
                                           {Face::YMax}, {Face::ZMin}, {Face::ZMax}};
  std::vector<LoadStep> program;
  for (int s = 1; s <= steps; ++s) {
    LoadStep step;
    switch (kind) {
      case LoadKind::BiaxialAffine: {
        const double stretch = 1.0 - total * s / steps;
        step.boundary_gradient = Tensor2::diagonal(stretch, stretch, 1.0);
        const std::array<bool, 3> in_plane{true, true, false};
        step.faces = {{Face::XMin, in_plane},
                      {Face::XMax, in_plane},
                      {Face::YMin, in_plane},
                      {Face::YMax, in_plane},
                      {Face::ZMin, {false, false, true}},
                      {Face::ZMax, {false, false, true}}};
        break;
      }
      case LoadKind::FixedTopBottom:
        step.faces = {{Face::YMin}, {Face::YMax}};
        break;
      case LoadKind::FixedAll:
        step.faces = all;
        break;
    }
    program.push_back(step);
  }
  return program;
}

Constraints boundary_constraints(const Mesh& mesh, const DofMap& dofs,
                                 const LoadStep& step) {
  Constraints bc(dofs);
  const Tensor2 disp_grad = step.boundary_gradient - Tensor2::identity();
  for (int n = 0; n < mesh.node_count(); ++n) {
    const Vec3 u = disp_grad * mesh.nodes[n];
    for (const FaceConstraint& fc : step.faces) {
      if (!mesh.on_face(n, fc.face)) continue;
      for (int i = 0; i < 3; ++i)
        if (fc.components[i]) bc.set(dofs.u_dof(n, i), u[i]);
    }
  }
  return bc;
}

Eigen::VectorXd perturb_initial(const Eigen::VectorXd& d, const DofMap& dofs,
                                const Constraints& bc, double amplitude,
                                std::uint64_t seed) {
  if (amplitude < 0.0) throw InvalidParameter("perturbation amplitude must be >= 0");
  Eigen::VectorXd out = d;
  if (amplitude == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (int k = 0; k < dofs.u_count(); ++k) {
    const double delta = dist(rng);  // drawn for every dof so the stream is BC-independent
    if (!bc.contains(k)) out[k] += delta;
  }
  return out;
}

namespace {

struct FieldNorms {
  double u = 0.0, chi = 0.0;
};

FieldNorms split_norms(const Eigen::VectorXd& v, const std::vector<int>& free_dofs,
                       int u_count) {
  FieldNorms n;
  for (std::size_t k = 0; k < free_dofs.size(); ++k)
    (free_dofs[k] < u_count ? n.u : n.chi) += v[k] * v[k];
  n.u = std::sqrt(n.u);
  n.chi = std::sqrt(n.chi);
  return n;
}

bool energy_acceptable(double trial, double current, double slack) {
  if (!std::isfinite(trial)) return false;
  const double scale = std::max(std::abs(current), std::abs(trial));
  return trial <= current + slack * scale;
}

double mean_diagonal(const SparseMatrix& K) {
  return K.rows() > 0 ? K.diagonal().cwiseAbs().mean() : 0.0;
}

// Solves (K + sigma I) x = r with the smallest sigma >= `shift` from the
// sequence shift, 10 shift, ... for which the Cholesky factorization exists.
// The symbolic analysis is kept while the sparsity pattern is unchanged.
class DescentSolver {
 public:
  DescentSolver() {
#ifdef GPC_HAVE_CHOLMOD
    llt_.cholmod().print = 0;
#endif
  }

  // Returns the shift used.
  double solve(const SparseMatrix& K, const Eigen::VectorXd& r, double shift,
               Eigen::VectorXd& x) {
    const int n = static_cast<int>(K.rows());
    if (n == 0) {
      x.resize(0);
      return shift;
    }
    SparseMatrix eye(n, n);
    eye.setIdentity();
    const double floor = 1e-6 * mean_diagonal(K);
    for (int k = 0; k < 30; ++k) {
      // adding shift * I even for shift 0 keeps the pattern fixed
      const SparseMatrix A = K + shift * eye;
      if (n != rows_ || A.nonZeros() != nonzeros_) {
        llt_.analyzePattern(A);
        rows_ = n;
        nonzeros_ = A.nonZeros();
      }
      llt_.factorize(A);
      if (llt_.info() == Eigen::Success) {
        x = llt_.solve(r);
        for (int refine = 0; refine < 2; ++refine) {
          const Eigen::VectorXd res = r - A * x;
          x += llt_.solve(res);
        }
        if (x.allFinite()) return shift;
      }
      shift = std::max(10.0 * shift, floor);
    }
    throw LinearSolveFailure("no positive definite shift of the tangent found");
  }

 private:
#ifdef GPC_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<SparseMatrix> llt_;
#else
  Eigen::SimplicialLLT<SparseMatrix> llt_;
#endif
  int rows_ = -1;
  Eigen::Index nonzeros_ = -1;
};

// Runs the Newton loop; never throws NoConvergence, reports via the record.
StepRecord run_newton(Eigen::VectorXd& d, const Assembler& assembler,
                      const Constraints& bc, const SolverConfig& cfg) {
  const int u_count = assembler.dofs().u_count();
  StepRecord rec;
  FieldNorms ref;
  double last_shift = 0.0;
  DescentSolver descent;

  for (int iter = 0;; ++iter) {
    const SparseSystem sys = assembler.assemble(d, true);
    const ReducedSystem red = apply_dirichlet(sys, bc, d);
    const bool loading = red.fixed_increment.lpNorm<Eigen::Infinity>() > 0.0;

    const FieldNorms r = split_norms(red.rhs, red.free_dofs, u_count);
    ref.u = std::max(ref.u, r.u);
    ref.chi = std::max(ref.chi, r.chi);
    const double su = ref.u > 0.0 ? r.u / ref.u : 0.0;
    const double sc = ref.chi > 0.0 ? r.chi / ref.chi : 0.0;
    rec.residuals.push_back(std::max(su, sc));
    rec.energies.push_back(sys.energy);
    rec.energy = sys.energy;
    rec.iterations = iter;

    const bool u_ok = r.u <= cfg.newton_abs_tol || su <= cfg.newton_tol;
    const bool chi_ok = r.chi <= cfg.newton_abs_tol || sc <= cfg.newton_tol;
    const bool small = u_ok && chi_ok;
    if (!loading && small && red.matrix.rows() == 0) {
      rec.converged = true;
      return rec;
    }

    auto try_direction = [&](const Eigen::VectorXd& dx, Eigen::VectorXd& accepted) {
      double s = 1.0;
      for (int h = 0; h <= cfg.step_halving_max; ++h, s *= 0.5) {
        Eigen::VectorXd trial = d + s * dx;
        const double e = assembler.total_energy(trial);
        const bool ok = loading ? std::isfinite(e)
                                : energy_acceptable(e, sys.energy, cfg.energy_slack);
        if (ok) {
          accepted = std::move(trial);
          return true;
        }
      }
      return false;
    };

    Eigen::VectorXd next;
    bool accepted = false;
    if (loading) {
      if (iter >= cfg.max_iters) return rec;
      accepted = try_direction(red.expand(linear_solve(red.matrix, red.rhs)), next);
    } else {
      // Minimization phase: Newton on a positive definite tangent, otherwise
      // on a shifted one, so that every direction is a descent direction and
      // saddle points (the homogeneous state of a double well) repel. A small
      // residual counts as convergence only where the tangent is definite.
      // The search starts a decade below the last shift that worked.
      const double floor = 1e-6 * mean_diagonal(red.matrix);
      double shift = small || last_shift == 0.0 ? 0.0 : std::max(0.1 * last_shift, floor);
      for (int k = 0; k < 12 && !accepted; ++k) {
        Eigen::VectorXd dx;
        shift = descent.solve(red.matrix, red.rhs, shift, dx);
        if (k == 0) {
          if (small && shift == 0.0) {
            rec.converged = true;
            return rec;
          }
          if (iter >= cfg.max_iters) return rec;
        }
        accepted = try_direction(red.expand(dx), next);
        if (accepted) last_shift = shift;
        shift = std::max(10.0 * shift, floor);
      }
    }
    if (!accepted) return rec;
    d = std::move(next);
  }
}

}  // namespace

StepRecord newton_step(Eigen::VectorXd& d, const Assembler& assembler,
                       const Constraints& bc, const SolverConfig& config) {
  config.validate();
  StepRecord rec = run_newton(d, assembler, bc, config);
  if (!rec.converged)
    throw NoConvergence("Newton did not converge in " + std::to_string(rec.iterations) +
                        " iterations (last scaled residual " +
                        std::to_string(rec.residuals.back()) + ")");
  return rec;
}

SolveReport solve(const Assembler& assembler, const std::vector<LoadStep>& program,
                  const SolverConfig& config, Eigen::VectorXd d0,
                  const std::function<void(const StepRecord&)>& on_step) {
  config.validate();
  SolveReport report;
  Eigen::VectorXd d = std::move(d0);
  for (std::size_t s = 0; s < program.size(); ++s) {
    const Constraints bc =
        boundary_constraints(assembler.mesh(), assembler.dofs(), program[s]);
    d = perturb_initial(d, assembler.dofs(), bc, config.perturbation_amplitude,
                        config.seed + s);
    StepRecord rec = run_newton(d, assembler, bc, config);
    rec.step = static_cast<int>(s) + 1;
    if (on_step) on_step(rec);
    report.steps.push_back(rec);
    if (!rec.converged) break;
  }
  report.fields = std::move(d);
  return report;
}

}  // namespace gpc
