#include "gpc/tensor.hpp"

#include "gpc/errors.hpp"

#include <algorithm>

namespace gpc {

Tensor2 Tensor2::outer(const Vec3& a, const Vec3& b) {
  Tensor2 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a[i] * b[j];
  return r;
}

Tensor2 operator*(const Tensor2& a, const Tensor2& b) {
  Tensor2 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

Vec3 operator*(const Tensor2& a, const Vec3& x) {
  Vec3 r;
  for (int i = 0; i < 3; ++i)
    r[i] = a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2];
  return r;
}

Tensor2 transpose(const Tensor2& a) {
  return {a(0, 0), a(1, 0), a(2, 0), a(0, 1), a(1, 1),
          a(2, 1), a(0, 2), a(1, 2), a(2, 2)};
}

double trace(const Tensor2& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

double ddot(const Tensor2& a, const Tensor2& b) {
  double s = 0.0;
  for (int k = 0; k < 9; ++k) s += a[k] * b[k];
  return s;
}

double squared_norm(const Tensor2& a) { return ddot(a, a); }
double norm(const Tensor2& a) { return std::sqrt(ddot(a, a)); }

double max_abs(const Tensor2& a) {
  double m = 0.0;
  for (int k = 0; k < 9; ++k) m = std::max(m, std::abs(a[k]));
  return m;
}

Tensor2 tensor_cross(const Tensor2& a, const Tensor2& b) {
  // Only the two cyclic (k,m) and (l,n) pairs survive the Levi-Civita sums:
  // (A x B)_ij = A_{i1 j1} B_{i2 j2} - A_{i1 j2} B_{i2 j1}
  //            - A_{i2 j1} B_{i1 j2} + A_{i2 j2} B_{i1 j1}
  constexpr int next[3] = {1, 2, 0};
  constexpr int prev[3] = {2, 0, 1};
  Tensor2 r;
  for (int i = 0; i < 3; ++i) {
    const int i1 = next[i], i2 = prev[i];
    for (int j = 0; j < 3; ++j) {
      const int j1 = next[j], j2 = prev[j];
      r(i, j) = a(i1, j1) * b(i2, j2) - a(i1, j2) * b(i2, j1) -
                a(i2, j1) * b(i1, j2) + a(i2, j2) * b(i1, j1);
    }
  }
  return r;
}

Tensor2 cofactor(const Tensor2& f) { return 0.5 * tensor_cross(f, f); }

double det(const Tensor2& f) {
  return f(0, 0) * (f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1)) -
         f(0, 1) * (f(1, 0) * f(2, 2) - f(1, 2) * f(2, 0)) +
         f(0, 2) * (f(1, 0) * f(2, 1) - f(1, 1) * f(2, 0));
}

Tensor2 inverse(const Tensor2& f) {
  const double d = det(f);
  const double scale = std::pow(norm(f), 3);
  if (!std::isfinite(d) || d == 0.0 || std::abs(d) <= 1e-15 * scale)
    throw SingularMatrix("inverse: singular 3x3 tensor (det = " +
                         std::to_string(d) + ")");
  return (1.0 / d) * transpose(cofactor(f));
}

double tdot(const Tensor3& a, const Tensor3& b) {
  double s = 0.0;
  for (int k = 0; k < 27; ++k) s += a[k] * b[k];
  return s;
}

Tensor4 Tensor4::identity() {
  Tensor4 r;
  for (int k = 0; k < 9; ++k) r.at(k, k) = 1.0;
  return r;
}

Tensor4 dyad(const Tensor2& a, const Tensor2& b) {
  Tensor4 r;
  for (int p = 0; p < 9; ++p)
    for (int q = 0; q < 9; ++q) r.at(p, q) = a[p] * b[q];
  return r;
}

Tensor2 contract(const Tensor4& d, const Tensor2& h) {
  Tensor2 r;
  for (int p = 0; p < 9; ++p) {
    double s = 0.0;
    for (int q = 0; q < 9; ++q) s += d.at(p, q) * h[q];
    r[p] = s;
  }
  return r;
}

Tensor2 contract(const Tensor2& h, const Tensor4& d) {
  Tensor2 r;
  for (int q = 0; q < 9; ++q) {
    double s = 0.0;
    for (int p = 0; p < 9; ++p) s += h[p] * d.at(p, q);
    r[q] = s;
  }
  return r;
}

Tensor4 contract(const Tensor4& d, const Tensor4& e) {
  Tensor4 r;
  for (int p = 0; p < 9; ++p)
    for (int q = 0; q < 9; ++q) {
      double s = 0.0;
      for (int k = 0; k < 9; ++k) s += d.at(p, k) * e.at(k, q);
      r.at(p, q) = s;
    }
  return r;
}

Tensor4 major_transpose(const Tensor4& d) {
  Tensor4 r;
  for (int p = 0; p < 9; ++p)
    for (int q = 0; q < 9; ++q) r.at(p, q) = d.at(q, p);
  return r;
}

Tensor4 cross_fourth(const Tensor2& a) {
  // e_imk is nonzero only for i != k, with m the remaining index.
  // sign[i][k] = e_{i m k} for m = 3 - i - k.
  constexpr double sign[3][3] = {{0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
  Tensor4 r;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      if (i == k) continue;
      const int m = 3 - i - k;
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
          if (j == l) continue;
          const int n = 3 - j - l;
          r(i, j, k, l) = sign[i][k] * sign[j][l] * a(m, n);
        }
    }
  return r;
}

Vec9 pack(const Tensor2& a) {
  Vec9 v;
  for (int k = 0; k < 9; ++k) v[k] = a[k];
  return v;
}

Tensor2 unpack9(const Eigen::Ref<const Vec9>& v) {
  Tensor2 a;
  for (int k = 0; k < 9; ++k) a[k] = v[k];
  return a;
}

Mat9 pack(const Tensor4& d) {
  Mat9 m;
  for (int p = 0; p < 9; ++p)
    for (int q = 0; q < 9; ++q) m(p, q) = d.at(p, q);
  return m;
}

Tensor4 unpack81(const Eigen::Ref<const Mat9>& m) {
  Tensor4 d;
  for (int p = 0; p < 9; ++p)
    for (int q = 0; q < 9; ++q) d.at(p, q) = m(p, q);
  return d;
}

Vec27 pack(const Tensor3& g) {
  Vec27 v;
  for (int k = 0; k < 27; ++k) v[k] = g[k];
  return v;
}

Tensor3 unpack27(const Eigen::Ref<const Vec27>& v) {
  Tensor3 g;
  for (int k = 0; k < 27; ++k) g[k] = v[k];
  return g;
}

}  // namespace gpc
