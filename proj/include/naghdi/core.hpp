#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace naghdi {

struct Vec2 {
  double x = 0.0, y = 0.0;

  double& operator[](int i) { return i == 0 ? x : y; }
  double operator[](int i) const { return i == 0 ? x : y; }

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(Vec3 o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(Vec3 o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
};

inline Vec3 operator*(double s, Vec3 v) { return v * s; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) {
  double n = norm(a);
  if (n == 0.0) throw std::runtime_error("cannot normalize zero vector");
  return a / n;
}

// 2x2 tensor in an orthonormal frame; entry (i,j) pairs component slot i with
// direction slot j, T(e_i, e_j).
struct Mat2 {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }

  Mat2 operator+(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
    return r;
  }
  Mat2 operator-(const Mat2& o) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] - o.m[i][j];
    return r;
  }
  Mat2 operator*(double s) const {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = m[i][j] * s;
    return r;
  }
  Mat2& operator+=(const Mat2& o) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m[i][j] += o.m[i][j];
    return *this;
  }
};

inline Mat2 operator*(double s, const Mat2& t) { return t * s; }

inline Mat2 identity2() {
  Mat2 r;
  r(0, 0) = r(1, 1) = 1.0;
  return r;
}

// Volume element in an oriented orthonormal frame: eps(e1,e2) = +1.
inline Mat2 volume_element2() {
  Mat2 r;
  r(0, 1) = 1.0;
  r(1, 0) = -1.0;
  return r;
}

inline Mat2 transpose(const Mat2& t) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = t(j, i);
  return r;
}

inline Mat2 sym(const Mat2& t) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = 0.5 * (t(i, j) + t(j, i));
  return r;
}

inline double trace(const Mat2& t) { return t(0, 0) + t(1, 1); }

inline double inner(const Mat2& a, const Mat2& b) {
  double s = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += a(i, j) * b(i, j);
  return s;
}

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
  return r;
}

// Contraction in the first slot: (i(w)T)(X) = T(w, X).
inline Vec2 interior_product(Vec2 w, const Mat2& t) {
  return {w.x * t(0, 0) + w.y * t(1, 0), w.x * t(0, 1) + w.y * t(1, 1)};
}

inline double max_abs(const Mat2& t) {
  double r = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r = std::max(r, std::abs(t(i, j)));
  return r;
}

// Small dense solve (Gaussian elimination, partial pivoting); A is n x n
// row-major and overwritten, b holds the solution on exit.
inline void solve_dense(int n, double* A, double* b) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A[i * n + k]) > std::abs(A[piv * n + k])) piv = i;
    for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
    std::swap(b[k], b[piv]);
    double d = A[k * n + k];
    if (d == 0.0) continue;
    for (int i = k + 1; i < n; ++i) {
      double m = A[i * n + k] / d;
      for (int j = k; j < n; ++j) A[i * n + j] -= m * A[k * n + j];
      b[i] -= m * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (int j = k + 1; j < n; ++j) s -= A[k * n + j] * b[j];
    b[k] = (A[k * n + k] != 0.0) ? s / A[k * n + k] : 0.0;
  }
}

}  // namespace naghdi
