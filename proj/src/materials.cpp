#include "gpc/materials.hpp"

#include "gpc/errors.hpp"

#include <cmath>

namespace gpc {

std::string to_string(Model m) {
  switch (m) {
    case Model::StVK: return "stvk";
    case Model::StVKNormalized: return "stvk_normalized";
    case Model::DoubleWell: return "double_well";
  }
  return "unknown";
}

Model model_from_string(const std::string& name) {
  if (name == "stvk") return Model::StVK;
  if (name == "stvk_normalized") return Model::StVKNormalized;
  if (name == "double_well") return Model::DoubleWell;
  throw InvalidParameter("unknown material model '" + name + "'");
}

void MaterialParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(lambda_lame) || !finite(mu_lame) || !finite(alpha) ||
      !finite(eps_well) || !finite(H_chi) || !finite(K_grad) || !finite(K_vol))
    throw InvalidParameter("material parameters must be finite");
  if (!(H_chi > 0.0)) throw InvalidParameter("H_chi must be > 0");
  if (K_grad < 0.0) throw InvalidParameter("K_grad must be >= 0");
  if (K_vol < 0.0) throw InvalidParameter("K_vol must be >= 0");
  if (model == Model::DoubleWell && !(alpha > 0.0))
    throw InvalidParameter("alpha must be > 0 for the double-well model");
}

double MaterialParams::internal_length() const { return std::sqrt(K_grad / H_chi); }

std::pair<Tensor2, Tensor2> well_metrics(double e) {
  return {Tensor2(1, e, 0, e, 1 + e * e, 0, 0, 0, 1),
          Tensor2(1, -e, 0, -e, 1 + e * e, 0, 0, 0, 1)};
}

std::pair<Tensor2, Tensor2> well_gradients(double e) {
  return {Tensor2(1, e, 0, 0, 1, 0, 0, 0, 1), Tensor2(1, -e, 0, 0, 1, 0, 0, 0, 1)};
}

namespace {

// Derivative of G = F.A(C) with A = C - X (X constant and symmetric):
//   dG_ij/dF_kl = d_ik A_lj + d_jl (F F^T)_ik + F_il F_kj
Tensor4 d_f_times_shifted_c(const Tensor2& F, const Tensor2& A) {
  const Tensor2 FFt = F * transpose(F);
  Tensor4 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double v = F(i, l) * F(k, j);
          if (i == k) v += A(l, j);
          if (j == l) v += FFt(i, k);
          r(i, j, k, l) = v;
        }
  return r;
}

void require_positive_jacobian(double J) {
  if (!(J > 0.0))
    throw NonPositiveJacobian("non-positive Jacobian det F = " + std::to_string(J), J);
}

}  // namespace

double w0(const MaterialParams& p, const Tensor2& F) {
  const Tensor2 C = transpose(F) * F;
  switch (p.model) {
    case Model::StVK: {
      const Tensor2 E = 0.5 * (C - Tensor2::identity());
      const double tr = trace(E);
      return 0.5 * p.lambda_lame * tr * tr + p.mu_lame * ddot(E, E);
    }
    case Model::StVKNormalized:
      return squared_norm(C - Tensor2::identity());
    case Model::DoubleWell: {
      const auto [C1, C2] = well_metrics(p.eps_well);
      return p.alpha * squared_norm(C - C1) * squared_norm(C - C2);
    }
  }
  return 0.0;
}

Tensor2 p0(const MaterialParams& p, const Tensor2& F) {
  const Tensor2 C = transpose(F) * F;
  const Tensor2 I = Tensor2::identity();
  switch (p.model) {
    case Model::StVK: {
      const Tensor2 E = 0.5 * (C - I);
      return p.lambda_lame * trace(E) * F + 2.0 * p.mu_lame * (F * E);
    }
    case Model::StVKNormalized:
      return 4.0 * (F * (C - I));
    case Model::DoubleWell: {
      const auto [C1, C2] = well_metrics(p.eps_well);
      const Tensor2 A1 = C - C1, A2 = C - C2;
      return 4.0 * p.alpha *
             (squared_norm(A2) * (F * A1) + squared_norm(A1) * (F * A2));
    }
  }
  return {};
}

Tensor4 a0(const MaterialParams& p, const Tensor2& F) {
  const Tensor2 C = transpose(F) * F;
  const Tensor2 I = Tensor2::identity();
  switch (p.model) {
    case Model::StVK: {
      const Tensor2 A = C - I;
      return p.lambda_lame * dyad(F, F) +
             (0.5 * p.lambda_lame * trace(A)) * Tensor4::identity() +
             p.mu_lame * d_f_times_shifted_c(F, A);
    }
    case Model::StVKNormalized:
      return 4.0 * d_f_times_shifted_c(F, C - I);
    case Model::DoubleWell: {
      const auto [C1, C2] = well_metrics(p.eps_well);
      const Tensor2 A1 = C - C1, A2 = C - C2;
      const Tensor2 G1 = F * A1, G2 = F * A2;
      const double a = squared_norm(A1), b = squared_norm(A2);
      return (16.0 * p.alpha) * (dyad(G1, G2) + dyad(G2, G1)) +
             (4.0 * p.alpha * b) * d_f_times_shifted_c(F, A1) +
             (4.0 * p.alpha * a) * d_f_times_shifted_c(F, A2);
    }
  }
  return {};
}

double u_vol(const MaterialParams& p, double J) {
  require_positive_jacobian(J);
  const double lj = std::log(J);
  return 0.5 * p.K_vol * lj * lj;
}

double u_vol_d1(const MaterialParams& p, double J) {
  require_positive_jacobian(J);
  return p.K_vol * std::log(J) / J;
}

double u_vol_d2(const MaterialParams& p, double J) {
  require_positive_jacobian(J);
  return p.K_vol * (1.0 - std::log(J)) / (J * J);
}

double energy_total(const MaterialParams& p, const PointState& s) {
  return evaluate(p, s, false).energy;
}

Tensor2 relative_stress(const MaterialParams& p, const Tensor2& F, const Tensor2& chi) {
  return p.H_chi * (chi - cofactor(F));
}

Tensor3 higher_order_stress(const MaterialParams& p, const Tensor3& grad_chi) {
  return p.K_grad * grad_chi;
}

Tensor2 first_pk_stress(const MaterialParams& p, const Tensor2& F, const Tensor2& chi) {
  PointState s;
  s.F = F;
  s.chi = chi;
  return evaluate(p, s, false).P;
}

TangentBlocks tangent_blocks(const MaterialParams& p, const Tensor2& F,
                             const Tensor2& chi) {
  PointState s;
  s.F = F;
  s.chi = chi;
  return evaluate(p, s, true).tangent;
}

PointResponse evaluate(const MaterialParams& p, const PointState& s, bool with_tangent) {
  const double J = det(s.F);
  require_positive_jacobian(J);

  const Tensor2 cof = cofactor(s.F);
  const Tensor2 mismatch = cof - s.chi;  // = -S_m / H_chi
  const double lj = std::log(J);

  PointResponse r;
  r.energy = w0(p, s.F) + 0.5 * p.K_vol * lj * lj +
             0.5 * p.H_chi * squared_norm(mismatch) +
             0.5 * p.K_grad * tdot(s.grad_chi, s.grad_chi);

  const double du = p.K_vol * lj / J;
  r.S_m = -p.H_chi * mismatch;
  r.P = p0(p, s.F) + du * cof - tensor_cross(r.S_m, s.F);
  r.mu = p.K_grad * s.grad_chi;

  if (with_tangent) {
    const double d2u = p.K_vol * (1.0 - lj) / (J * J);
    const Tensor4 fx = cross_fourth(s.F);
    // (F x) has major symmetry, so its transpose-contraction is fx:fx.
    r.tangent.d_uu = a0(p, s.F) + d2u * dyad(cof, cof) + du * fx +
                     p.H_chi * contract(fx, fx) +
                     p.H_chi * cross_fourth(mismatch);
    r.tangent.d_uchi = -p.H_chi * fx;
    r.tangent.chi_mass = p.H_chi;
    r.tangent.grad_modulus = p.K_grad;
  }
  return r;
}

}  // namespace gpc
