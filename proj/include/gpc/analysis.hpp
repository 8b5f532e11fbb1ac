// Diagnostics for laminate microstructures: the rank-one convexity probe and
// laminate energy gap of the normalized St. Venant-Kirchhoff energy, the
// double-well equivalent strain, band counting along probe lines, and energy
// comparisons between runs.
#pragma once

#include "gpc/assembly.hpp"
#include "gpc/materials.hpp"
#include "gpc/mesh.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gpc {

/// Second derivative of h(t) = W0(F + t a(x)b) at t = 0 for
/// W0 = (C - I):(C - I), divided by 4:
///   |a|^2 C:(b(x)b) + |F^T a (x) b|^2 + (F^T a (x) b):(F^T a (x) b)^T - |a|^2 |b|^2
struct ProbeResult {
  double curvature = 0.0;
  bool violating = false;  // curvature < 0
};

ProbeResult rank_one_probe_stvk(const Tensor2& F, const Vec3& a, const Vec3& b);

/// Rank-one connected pair F+- = diag(eps, eps, 1) +- sqrt(1 - 2 eps^2) e1(x)e2.
/// Throws LaminateUndefined outside 0 < eps <= sqrt(2)/2.
std::pair<Tensor2, Tensor2> stvk_laminate_pair(double eps);

struct LaminateGap {
  double w_hom = 0.0;  // W0(diag(eps, eps, 1))
  double w_lam = 0.0;  // (W0(F+) + W0(F-)) / 2
  double gap = 0.0;    // w_hom - w_lam
};

/// Evaluated with the normalized St. Venant-Kirchhoff energy.
LaminateGap stvk_laminate_gap(double eps);

/// |C - C1|^2 / (|C - C1|^2 + |C - C2|^2), Frobenius norms; 1/2 if both
/// distances vanish.
double c_eq(const Tensor2& F, double eps_well);

/// C_eq at every quadrature point, element-major.
std::vector<double> c_eq_field(const Assembler& assembler, const Eigen::VectorXd& d);

/// Deformation gradient at the centroid of every element.
std::vector<Tensor2> centroid_gradients(const Mesh& mesh, const DofMap& dofs,
                                        const Eigen::VectorXd& d);

/// Integral of W0(F) over the mesh (no volumetric, penalty or gradient terms).
double local_energy(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& d,
                    const MaterialParams& params, int quadrature_order = 3);

/// Straight probe parallel to a coordinate axis through `through`.
struct ProbeLine {
  int axis = 1;
  Vec3 through = Vec3::Zero();
};

/// Line along y through the centre of the block (mid-height, mid-width).
ProbeLine default_probe_line(const Mesh& mesh);

struct LaminateStats {
  int band_count = 0;
  int crossings = 0;
  double mean_band_width = 0.0;
  std::vector<double> positions;
  std::vector<double> profile;
};

/// Counts crossings of `profile` through `threshold`. With hysteresis h > 0 a
/// crossing needs to travel from below threshold - h to above threshold + h
/// (or back). Bands are pairs of adjacent layers: band_count =
/// ceil(crossings / 2); the width is twice the mean crossing spacing, or the
/// sampled length with fewer than two crossings.
LaminateStats laminate_stats(const std::vector<double>& positions,
                             const std::vector<double>& profile, double threshold,
                             double hysteresis = 0.0);

/// Samples a per-element field at the centroids of the elements pierced by
/// `line` (structured blocks only) and counts bands.
LaminateStats laminate_stats(const Mesh& mesh, const std::vector<double>& cell_field,
                             const ProbeLine& line, double threshold,
                             double hysteresis = 0.0);

/// Identity of a run for energy comparisons.
struct RunEnergy {
  BlockSpec block;
  MaterialParams material;
  std::string boundary;
  double total_energy = 0.0;
};

/// total_energy(a) - total_energy(b). Throws IncomparableRuns when mesh,
/// material or boundary data differ.
double energy_compare(const RunEnergy& a, const RunEnergy& b);

/// Nodal interpolation of y = F X (chi = Cof F on the corners).
Eigen::VectorXd affine_interpolant(const Mesh& mesh, const DofMap& dofs, const Tensor2& F);

/// Nodal interpolation of the F+/F- laminate with layers normal to y:
/// y = diag(eps, eps, 1) X + sqrt(1 - 2 eps^2) g(X2) e1, g a triangle wave of
/// unit slope with `periods` periods over the block height. With `taper` the
/// amplitude is ramped to zero over one element at the x faces so that the
/// deformation is affine on the x and y faces.
Eigen::VectorXd laminate_interpolant(const Mesh& mesh, const DofMap& dofs, double eps,
                                     int periods, bool taper);

}  // namespace gpc
