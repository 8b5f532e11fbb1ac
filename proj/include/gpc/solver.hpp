// Incremental-loading Newton-Raphson driver.
#pragma once

#include "gpc/assembly.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace gpc {

struct SolverConfig {
  int load_steps = 20;
  double newton_tol = 1e-8;      // relative, per field
  double newton_abs_tol = 1e-10;  // absolute fallback, per field
  int max_iters = 50;
  double perturbation_amplitude = 0.0;  // length units
  int step_halving_max = 8;
  std::uint64_t seed = 1;
  double energy_slack = 1e-10;  // relative energy increase tolerated by step control

  /// Throws InvalidParameter.
  void validate() const;
};

struct StepRecord {
  int step = 0;
  int iterations = 0;
  /// Combined scaled residual (max over the u and chi parts, each divided by
  /// its reference scale) after every iterate, starting with the predictor.
  std::vector<double> residuals;
  std::vector<double> energies;
  double energy = 0.0;
  bool converged = false;
};

struct SolveReport {
  std::vector<StepRecord> steps;
  Eigen::VectorXd fields;
  bool converged() const;
  double final_energy() const { return steps.empty() ? 0.0 : steps.back().energy; }
};

/// CSV with header "step,iter,residual,energy"; one row per iterate.
void write_report_csv(const SolveReport& report, std::ostream& os);

/// Solves K x = r. The contract is a relative backward error
/// |K x - r| / |r| <= 1e-10 for symmetric, possibly indefinite K.
/// Throws LinearSolveFailure on a singular or unsolvable system.
Eigen::VectorXd linear_solve(const SparseMatrix& K, const Eigen::VectorXd& r);

enum class LoadKind { BiaxialAffine, FixedTopBottom, FixedAll };
std::string to_string(LoadKind k);
LoadKind load_kind_from_string(const std::string& name);

/// Component mask of y = F X prescribed on one face.
struct FaceConstraint {
  Face face;
  std::array<bool, 3> components{true, true, true};
  bool operator==(const FaceConstraint&) const = default;
};

/// Dirichlet data of one load step: the masked components of y = F X on the
/// listed faces.
struct LoadStep {
  Tensor2 boundary_gradient = Tensor2::identity();
  std::vector<FaceConstraint> faces;
};

/// BiaxialAffine ramps F = diag(1 - t c, 1 - t c, 1), t = s/steps, with c the
/// total compression fraction. The in-plane components are prescribed on the
/// four lateral faces and u_z = 0 on both z faces (plane strain), so the
/// homogeneous state y = F X is an exact equilibrium. FixedTopBottom clamps the y faces; FixedAll clamps every
/// face. Both relaxation kinds repeat the same data at every step.
std::vector<LoadStep> load_program(LoadKind kind, double total, int steps);

Constraints boundary_constraints(const Mesh& mesh, const DofMap& dofs,
                                 const LoadStep& step);

/// Adds seeded uniform noise in [-amplitude, amplitude] to every
/// unconstrained displacement unknown.
Eigen::VectorXd perturb_initial(const Eigen::VectorXd& d, const DofMap& dofs,
                                const Constraints& bc, double amplitude,
                                std::uint64_t seed);

/// Newton iteration for one load step. On return `d` satisfies the
/// constraints and the record holds the iteration history. Once the boundary
/// data are in place, an indefinite tangent is shifted until positive definite
/// and convergence requires an unshifted (definite) tangent, so the iteration
/// settles in local minima rather than saddle points. Throws
/// NoConvergence after max_iters and propagates LinearSolveFailure.
StepRecord newton_step(Eigen::VectorXd& d, const Assembler& assembler,
                       const Constraints& bc, const SolverConfig& config);

/// Runs the whole load program from `d0`. Every step starts by perturbing the
/// free displacements (seed + step index) so that a homogeneous state that
/// has turned unstable is left. Stops at the first step that fails to
/// converge (recorded with converged = false).
SolveReport solve(const Assembler& assembler, const std::vector<LoadStep>& program,
                  const SolverConfig& config, Eigen::VectorXd d0,
                  const std::function<void(const StepRecord&)>& on_step = {});

}  // namespace gpc
