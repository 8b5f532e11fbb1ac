// End-to-end runs: mesh, solve, post-process.
#pragma once

#include "gpc/analysis.hpp"
#include "gpc/config.hpp"
#include "gpc/solver.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace gpc {

/// Output fields of one state. Cell quantities are taken at element centroids.
struct FieldSnapshot {
  std::vector<Vec3> displacement;  // per node
  std::vector<Tensor2> F;          // per cell
  std::vector<Tensor2> chi;        // per cell
  std::vector<double> detF;
  std::vector<double> c_eq;        // only meaningful for double_well
  std::vector<double> s_m_norm;    // |H_chi (chi - Cof F)|
};

FieldSnapshot make_snapshot(const Mesh& mesh, const DofMap& dofs, const MaterialParams& params,
                            const Eigen::VectorXd& d);

/// Laminate indicator per cell: C_eq for double_well, F12 minus its mean
/// otherwise.
std::vector<double> band_indicator(const MaterialParams& params, const FieldSnapshot& snap);

/// Threshold and hysteresis used to count bands of band_indicator.
struct BandCriterion {
  double threshold;
  double hysteresis;
};
BandCriterion band_criterion(const MaterialParams& params);

/// Band statistics along the mid-lines in x and in y; the richer of the two
/// is reported.
LaminateStats count_bands(const Mesh& mesh, const MaterialParams& params,
                          const FieldSnapshot& snap);

struct RunResult {
  std::unique_ptr<Mesh> mesh;
  std::unique_ptr<DofMap> dofs;
  SolveReport report;
  FieldSnapshot snapshot;
  LaminateStats bands;
  double internal_length = 0.0;
};

/// Builds the mesh and load program described by `config`, solves, and
/// post-processes the final state. Files are not written here.
RunResult run_experiment(const RunConfig& config,
                         const std::function<void(const StepRecord&)>& on_step = {});

}  // namespace gpc
