// Dense 3x3 (x3 (x3)) tensor algebra used by the material and element kernels.
//
// All tensors are value types over an orthonormal Cartesian basis. Storage is
// row-major, so that the packed 9-vector of a second-order tensor reads
// F11, F12, F13, F21, ..., F33, a fourth-order tensor packs into a 9x9 matrix
// with D(3i+j, 3k+l) = D_ijkl, and a third-order tensor G_ijd (component ij
// of a second-order field differentiated along x_d) packs into a 27-vector at
// position 3(3i+j)+d.
#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>

namespace gpc {

using Vec3 = Eigen::Vector3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Vec27 = Eigen::Matrix<double, 27, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;

class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(double a11, double a12, double a13, double a21, double a22,
          double a23, double a31, double a32, double a33)
      : v_{a11, a12, a13, a21, a22, a23, a31, a32, a33} {}

  static Tensor2 zero() { return {}; }
  static Tensor2 identity() { return diagonal(1.0, 1.0, 1.0); }
  static Tensor2 diagonal(double a, double b, double c) {
    return {a, 0, 0, 0, b, 0, 0, 0, c};
  }
  static Tensor2 outer(const Vec3& a, const Vec3& b);

  double& operator()(int i, int j) { return v_[3 * i + j]; }
  double operator()(int i, int j) const { return v_[3 * i + j]; }
  double& operator[](int k) { return v_[k]; }
  double operator[](int k) const { return v_[k]; }

  const std::array<double, 9>& data() const { return v_; }

  Tensor2& operator+=(const Tensor2& o) {
    for (int k = 0; k < 9; ++k) v_[k] += o.v_[k];
    return *this;
  }
  Tensor2& operator-=(const Tensor2& o) {
    for (int k = 0; k < 9; ++k) v_[k] -= o.v_[k];
    return *this;
  }
  Tensor2& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }

  bool operator==(const Tensor2&) const = default;

 private:
  std::array<double, 9> v_{};
};

inline Tensor2 operator+(Tensor2 a, const Tensor2& b) { return a += b; }
inline Tensor2 operator-(Tensor2 a, const Tensor2& b) { return a -= b; }
inline Tensor2 operator-(Tensor2 a) { return a *= -1.0; }
inline Tensor2 operator*(double s, Tensor2 a) { return a *= s; }
inline Tensor2 operator*(Tensor2 a, double s) { return a *= s; }

/// Matrix product A.B
Tensor2 operator*(const Tensor2& a, const Tensor2& b);
Vec3 operator*(const Tensor2& a, const Vec3& x);

Tensor2 transpose(const Tensor2& a);
double trace(const Tensor2& a);
/// A:B = A_ij B_ij
double ddot(const Tensor2& a, const Tensor2& b);
double squared_norm(const Tensor2& a);
double norm(const Tensor2& a);
double max_abs(const Tensor2& a);

/// (A x B)_ij = e_ikm e_jln A_kl B_mn
Tensor2 tensor_cross(const Tensor2& a, const Tensor2& b);
/// Cof F = 1/2 F x F (signed 2x2 minors; defined for singular F too).
Tensor2 cofactor(const Tensor2& f);
double det(const Tensor2& f);
/// Throws SingularMatrix when det F vanishes relative to |F|^3.
Tensor2 inverse(const Tensor2& f);

class Tensor3 {
 public:
  Tensor3() = default;
  static Tensor3 zero() { return {}; }

  double& operator()(int i, int j, int d) { return v_[9 * i + 3 * j + d]; }
  double operator()(int i, int j, int d) const { return v_[9 * i + 3 * j + d]; }
  double& operator[](int k) { return v_[k]; }
  double operator[](int k) const { return v_[k]; }

  Tensor3& operator+=(const Tensor3& o) {
    for (int k = 0; k < 27; ++k) v_[k] += o.v_[k];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }

  bool operator==(const Tensor3&) const = default;

 private:
  std::array<double, 27> v_{};
};

inline Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
inline Tensor3 operator*(double s, Tensor3 a) { return a *= s; }

/// Triple contraction G:.H = G_ijk H_ijk
double tdot(const Tensor3& a, const Tensor3& b);

class Tensor4 {
 public:
  Tensor4() = default;
  static Tensor4 zero() { return {}; }
  /// I_ijkl = d_ik d_jl, so that I:H = H.
  static Tensor4 identity();

  double& operator()(int i, int j, int k, int l) {
    return v_[27 * i + 9 * j + 3 * k + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return v_[27 * i + 9 * j + 3 * k + l];
  }
  /// Packed access: (3i+j, 3k+l)
  double& at(int row, int col) { return v_[9 * row + col]; }
  double at(int row, int col) const { return v_[9 * row + col]; }

  Tensor4& operator+=(const Tensor4& o) {
    for (int k = 0; k < 81; ++k) v_[k] += o.v_[k];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (int k = 0; k < 81; ++k) v_[k] -= o.v_[k];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }

 private:
  std::array<double, 81> v_{};
};

inline Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
inline Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
inline Tensor4 operator*(double s, Tensor4 a) { return a *= s; }

/// (A (x) B)_ijkl = A_ij B_kl
Tensor4 dyad(const Tensor2& a, const Tensor2& b);
/// (D:H)_ij = D_ijkl H_kl
Tensor2 contract(const Tensor4& d, const Tensor2& h);
/// (H:D)_kl = H_ij D_ijkl
Tensor2 contract(const Tensor2& h, const Tensor4& d);
/// (D:E)_ijmn = D_ijkl E_klmn
Tensor4 contract(const Tensor4& d, const Tensor4& e);
/// D^T_ijkl = D_klij
Tensor4 major_transpose(const Tensor4& d);

/// (A x)_ijkl = e_imk e_jnl A_mn; satisfies (A x):H = A x H and
/// d(Cof F)/dF = (F x).
Tensor4 cross_fourth(const Tensor2& a);

// Packed (Voigt-like, nonsymmetric) representations.
Vec9 pack(const Tensor2& a);
Tensor2 unpack9(const Eigen::Ref<const Vec9>& v);
Mat9 pack(const Tensor4& d);
Tensor4 unpack81(const Eigen::Ref<const Mat9>& m);
Vec27 pack(const Tensor3& g);
Tensor3 unpack27(const Eigen::Ref<const Vec27>& v);

}  // namespace gpc
