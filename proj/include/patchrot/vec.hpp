#pragma once

#include <array>
#include <cmath>

namespace patchrot {

/// Dense 3-vector with value semantics. Used for chart coordinates,
/// body angular rates and quaternion vector parts alike.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}
constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, const Vec3& a) {
  return {s * a.x, s * a.y, s * a.z};
}
constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
constexpr Vec3 operator/(const Vec3& a, double s) {
  return {a.x / s, a.y / s, a.z / s};
}
constexpr Vec3& operator+=(Vec3& a, const Vec3& b) {
  a = a + b;
  return a;
}

// Fixed left-to-right summation; several exactness tests rely on the order.
constexpr double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double max_abs(const Vec3& a) {
  return std::fmax(std::fabs(a.x), std::fmax(std::fabs(a.y), std::fabs(a.z)));
}
inline bool all_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

constexpr std::array<double, 3> to_array(const Vec3& a) { return {a.x, a.y, a.z}; }
constexpr Vec3 vec3_from_array(const std::array<double, 3>& a) {
  return {a[0], a[1], a[2]};
}

/// Row-major 3x3 matrix.
struct Mat3 {
  std::array<std::array<double, 3>, 3> m{};

  static constexpr Mat3 identity() {
    return {{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}};
  }
  constexpr double operator()(int r, int c) const { return m[r][c]; }
  constexpr double& operator()(int r, int c) { return m[r][c]; }
};

constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.m[r][c] = a.m[r][c] + b.m[r][c];
  return out;
}
constexpr Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.m[r][c] = a.m[r][c] - b.m[r][c];
  return out;
}
constexpr Mat3 operator*(double s, const Mat3& a) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.m[r][c] = s * a.m[r][c];
  return out;
}
constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      out.m[r][c] = a.m[r][0] * b.m[0][c] + a.m[r][1] * b.m[1][c] + a.m[r][2] * b.m[2][c];
  return out;
}
constexpr Vec3 operator*(const Mat3& a, const Vec3& v) {
  return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
          a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
          a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
}
constexpr Mat3 transpose(const Mat3& a) {
  Mat3 out;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out.m[r][c] = a.m[c][r];
  return out;
}
constexpr double determinant(const Mat3& a) {
  return a.m[0][0] * (a.m[1][1] * a.m[2][2] - a.m[1][2] * a.m[2][1]) -
         a.m[0][1] * (a.m[1][0] * a.m[2][2] - a.m[1][2] * a.m[2][0]) +
         a.m[0][2] * (a.m[1][0] * a.m[2][1] - a.m[1][1] * a.m[2][0]);
}
inline double frobenius_norm(const Mat3& a) {
  double s = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) s += a.m[r][c] * a.m[r][c];
  return std::sqrt(s);
}

/// Row-major 4x4 matrix (only needed for the quaternion rate matrix).
struct Mat4 {
  std::array<std::array<double, 4>, 4> m{};

  constexpr double operator()(int r, int c) const { return m[r][c]; }
  constexpr double& operator()(int r, int c) { return m[r][c]; }
};

constexpr Mat4 operator+(const Mat4& a, const Mat4& b) {
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.m[r][c] = a.m[r][c] + b.m[r][c];
  return out;
}
constexpr Mat4 transpose(const Mat4& a) {
  Mat4 out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.m[r][c] = a.m[c][r];
  return out;
}
constexpr std::array<double, 4> operator*(const Mat4& a, const std::array<double, 4>& v) {
  std::array<double, 4> out{};
  for (int r = 0; r < 4; ++r)
    out[r] = a.m[r][0] * v[0] + a.m[r][1] * v[1] + a.m[r][2] * v[2] + a.m[r][3] * v[3];
  return out;
}
inline double frobenius_norm(const Mat4& a) {
  double s = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) s += a.m[r][c] * a.m[r][c];
  return std::sqrt(s);
}

}  // namespace patchrot
