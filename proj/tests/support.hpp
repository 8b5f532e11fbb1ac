// Test-only helpers: random generators and finite-difference oracles.
#pragma once

#include "gpc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace gpc::test {

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
  Tensor3 tensor3(double lo = -1.0, double hi = 1.0) {
    Tensor3 a;
    for (int k = 0; k < 27; ++k) a[k] = uniform(lo, hi);
    return a;
  }
  Vec3 vec(double lo = -1.0, double hi = 1.0) {
    return Vec3(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
  }
  /// Random rotation from a normalized random quaternion.
  Tensor2 rotation() {
    std::normal_distribution<double> n(0.0, 1.0);
    double q[4];
    double s = 0.0;
    for (double& x : q) {
      x = n(gen_);
      s += x * x;
    }
    s = std::sqrt(s);
    for (double& x : q) x /= s;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    return {1 - 2 * (y * y + z * z), 2 * (x * y - z * w),     2 * (x * z + y * w),
            2 * (x * y + z * w),     1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
            2 * (x * z - y * w),     2 * (y * z + x * w),     1 - 2 * (x * x + y * y)};
  }
  /// Uniform entries in [-1, 1], redrawn until |F|^3 / |det F| <= kappa.
  /// Round-off in det(Cof F) versus (det F)^2 grows like 1e-16 times this ratio.
  Tensor2 conditioned_tensor(double kappa = 1e3) {
    for (;;) {
      Tensor2 F = tensor();
      if (std::pow(norm(F), 3) <= kappa * std::abs(det(F))) return F;
    }
  }
  /// Random F with det F inside [lo, hi], built as I + noise then rescaled.
  Tensor2 gradient_with_det(double lo, double hi, double noise = 0.4) {
    for (;;) {
      Tensor2 F = Tensor2::identity() + tensor(-noise, noise);
      const double J = det(F);
      if (J <= 0.05) continue;
      const double target = uniform(lo, hi);
      return std::cbrt(target / J) * F;
    }
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline double rel_error(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline double rel_error(const Tensor2& a, const Tensor2& b) {
  return norm(a - b) / std::max({norm(a), norm(b), 1e-300});
}

/// Central difference of a scalar function of a tensor, component by component.
inline Tensor2 fd_gradient(const std::function<double(const Tensor2&)>& f, const Tensor2& x,
                           double h) {
  Tensor2 g;
  for (int k = 0; k < 9; ++k) {
    Tensor2 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

/// Central-difference Jacobian dG_p/dx_q of a tensor-valued function.
inline Tensor4 fd_jacobian(const std::function<Tensor2(const Tensor2&)>& f, const Tensor2& x,
                           double h) {
  Tensor4 J;
  for (int q = 0; q < 9; ++q) {
    Tensor2 xp = x, xm = x;
    xp[q] += h;
    xm[q] -= h;
    const Tensor2 d = (1.0 / (2 * h)) * (f(xp) - f(xm));
    for (int p = 0; p < 9; ++p) J.at(p, q) = d[p];
  }
  return J;
}

inline double frob(const Tensor4& d) { return pack(d).norm(); }
inline double rel_error(const Tensor4& a, const Tensor4& b) {
  return (pack(a) - pack(b)).norm() / std::max({frob(a), frob(b), 1e-300});
}

}  // namespace gpc::test
