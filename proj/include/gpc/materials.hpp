// Regularized gradient-polyconvex material models.
//
// The stored energy per unit reference volume is
//
//   W(F, chi, grad chi) = W0(F) + U(det F) + 1/2 H_chi |Cof F - chi|^2
//                         + 1/2 K grad chi :. grad chi
//
// where chi is an independent second-order field pulled towards Cof F by the
// penalty modulus H_chi and smoothed by the gradient modulus K. The internal
// length of the resulting screened-Poisson problem is l = sqrt(K / H_chi).
#pragma once

#include "gpc/tensor.hpp"

#include <string>
#include <utility>

namespace gpc {

enum class Model { StVK, StVKNormalized, DoubleWell };

std::string to_string(Model m);
/// Throws InvalidParameter on an unknown name.
Model model_from_string(const std::string& name);

struct MaterialParams {
  Model model = Model::StVKNormalized;
  double lambda_lame = 0.0;  // StVK only
  double mu_lame = 0.0;      // StVK only
  double alpha = 0.0;        // DoubleWell scale
  double eps_well = 0.0;     // DoubleWell shear magnitude
  double H_chi = 1.0;        // penalty modulus
  double K_grad = 0.0;       // gradient modulus
  double K_vol = 0.0;        // volumetric modulus of U(J) = 1/2 K_vol (ln J)^2

  /// Throws InvalidParameter if an invariant is violated.
  void validate() const;
  double internal_length() const;
};

struct PointState {
  Tensor2 F = Tensor2::identity();
  Tensor2 chi = Tensor2::identity();
  Tensor3 grad_chi;
};

/// Right Cauchy-Green tensors of the two double wells, C1 (shear +eps) and C2.
std::pair<Tensor2, Tensor2> well_metrics(double eps);
/// Deformation gradients F1, F2 realizing the two wells.
std::pair<Tensor2, Tensor2> well_gradients(double eps);

double w0(const MaterialParams& p, const Tensor2& F);
Tensor2 p0(const MaterialParams& p, const Tensor2& F);
/// dP0/dF
Tensor4 a0(const MaterialParams& p, const Tensor2& F);

// U(J) = 1/2 K_vol (ln J)^2 and its first two derivatives. All throw
// NonPositiveJacobian for J <= 0.
double u_vol(const MaterialParams& p, double J);
double u_vol_d1(const MaterialParams& p, double J);
double u_vol_d2(const MaterialParams& p, double J);

/// Throws NonPositiveJacobian if det F <= 0.
double energy_total(const MaterialParams& p, const PointState& s);

/// S_m = H_chi (chi - Cof F)
Tensor2 relative_stress(const MaterialParams& p, const Tensor2& F,
                        const Tensor2& chi);
/// mu = K grad chi
Tensor3 higher_order_stress(const MaterialParams& p, const Tensor3& grad_chi);
/// P = P0 + U'(J) Cof F - S_m x F. Throws NonPositiveJacobian.
Tensor2 first_pk_stress(const MaterialParams& p, const Tensor2& F,
                        const Tensor2& chi);

/// Second derivatives of W. The chi-chi block is diagonal: chi_mass times the
/// identity on the 9 packed chi components and grad_modulus times the
/// identity on the 27 packed gradient components.
struct TangentBlocks {
  Tensor4 d_uu;    // d2W / dF dF
  Tensor4 d_uchi;  // d_uchi(3i+j, 3k+l) = dP_ij / dchi_kl
  double chi_mass = 0.0;      // d2W / dchi dchi      = H_chi
  double grad_modulus = 0.0;  // d2W / dgrad dgrad   = K
};

/// Exact Hessian of W in (F, chi, grad chi). Throws NonPositiveJacobian.
TangentBlocks tangent_blocks(const MaterialParams& p, const Tensor2& F,
                             const Tensor2& chi);

/// Everything the element loop needs at one material point, sharing the
/// intermediate kinematics.
struct PointResponse {
  double energy = 0.0;
  Tensor2 P;
  Tensor2 S_m;
  Tensor3 mu;
  TangentBlocks tangent;  // filled only when requested
};

PointResponse evaluate(const MaterialParams& p, const PointState& s,
                       bool with_tangent);

}  // namespace gpc
