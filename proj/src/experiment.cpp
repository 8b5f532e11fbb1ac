#include "gpc/experiment.hpp"

#include <cmath>

namespace gpc {

FieldSnapshot make_snapshot(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                            const Eigen::VectorXd& d) {
  FieldSnapshot s;
  s.displacement.reserve(mesh.node_count());
  for (int n = 0; n < mesh.node_count(); ++n)
    s.displacement.emplace_back(d[dofs.u_dof(n, 0)], d[dofs.u_dof(n, 1)], d[dofs.u_dof(n, 2)]);

  s.F = centroid_gradients(mesh, dofs, d);
  const ShapeChi centre = shape_chi(Vec3::Zero());
  for (int e = 0; e < mesh.element_count(); ++e) {
    const Tensor2& F = s.F[e];
    Tensor2 chi;
    for (int a = 0; a < kNodesChi; ++a) {
      const int node = mesh.elements[e].nodes[a];
      for (int m = 0; m < 9; ++m) chi[m] += centre.N[a] * d[dofs.chi_dof(node, m)];
    }
    s.chi.push_back(chi);
    s.detF.push_back(det(F));
    s.c_eq.push_back(params.eps_well > 0.0 ? c_eq(F, params.eps_well) : 0.5);
    s.s_m_norm.push_back(norm(relative_stress(params, F, chi)));
  }
  return s;
}

std::vector<double> band_indicator(const MaterialParams& params, const FieldSnapshot& snap) {
  if (params.model == Model::DoubleWell) return snap.c_eq;
  double mean = 0.0;
  for (const Tensor2& F : snap.F) mean += F(0, 1);
  if (!snap.F.empty()) mean /= static_cast<double>(snap.F.size());
  std::vector<double> out;
  out.reserve(snap.F.size());
  for (const Tensor2& F : snap.F) out.push_back(F(0, 1) - mean);
  return out;
}

BandCriterion band_criterion(const MaterialParams& params) {
  if (params.model == Model::DoubleWell) return {0.5, 0.1};
  return {0.0, 1e-6};
}

LaminateStats count_bands(const Mesh& mesh, const MaterialParams& params,
                          const FieldSnapshot& snap) {
  const std::vector<double> field = band_indicator(params, snap);
  const BandCriterion bc = band_criterion(params);
  ProbeLine line = default_probe_line(mesh);
  LaminateStats best = laminate_stats(mesh, field, line, bc.threshold, bc.hysteresis);
  line.axis = 0;
  LaminateStats across = laminate_stats(mesh, field, line, bc.threshold, bc.hysteresis);
  return across.crossings > best.crossings ? across : best;
}

RunResult run_experiment(const RunConfig& config,
                         const std::function<void(const StepRecord&)>& on_step) {
  std::vector<ConfigIssue> issues = validate(config);
  if (!issues.empty()) throw ConfigError(std::move(issues));

  RunResult r;
  r.mesh = std::make_unique<Mesh>(generate_block(config.block));
  r.dofs = std::make_unique<DofMap>(*r.mesh);
  r.internal_length = config.material.internal_length();

  const Assembler assembler(*r.mesh, *r.dofs, config.material, {}, config.quadrature_order);
  const auto program =
      load_program(config.boundary, config.compression, config.solver.load_steps);
  r.report = solve(assembler, program, config.solver, initial_fields(*r.dofs), on_step);
  r.snapshot = make_snapshot(*r.mesh, *r.dofs, config.material, r.report.fields);
  r.bands = count_bands(*r.mesh, config.material, r.snapshot);
  return r;
}

}  // namespace gpc
