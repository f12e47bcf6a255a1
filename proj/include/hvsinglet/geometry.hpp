// Copyright 2026 The hvsinglet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HVSINGLET_GEOMETRY_HPP_
#define HVSINGLET_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hvsinglet/errors.hpp"
#include "hvsinglet/random.hpp"

namespace hvs {

/// Plain 3-vector for intermediate arithmetic (n± = u ± v and friends).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 p, Vec3 q) { return {p.x + q.x, p.y + q.y, p.z + q.z}; }
  friend constexpr Vec3 operator-(Vec3 p, Vec3 q) { return {p.x - q.x, p.y - q.y, p.z - q.z}; }
  friend constexpr Vec3 operator-(Vec3 p) { return {-p.x, -p.y, -p.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 p) { return {s * p.x, s * p.y, s * p.z}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(Vec3 p, Vec3 q) { return p.x * q.x + p.y * q.y + p.z * q.z; }
inline double norm(Vec3 p) { return std::sqrt(dot(p, p)); }
constexpr Vec3 cross(Vec3 p, Vec3 q) {
  return {p.y * q.z - p.z * q.y, p.z * q.x - p.x * q.z, p.x * q.y - p.y * q.x};
}

/// A point on the unit 2-sphere. The norm is 1 within 1e-12 by construction.
class UnitVec {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Default: the +z pole.
  constexpr UnitVec() = default;

  /// Normalizes (x, y, z). Throws InvalidArgument on a (near) zero vector.
  static UnitVec from(double x, double y, double z) { return from(Vec3{x, y, z}); }

  static UnitVec from(Vec3 p) {
    const double n = norm(p);
    if (!(n > 1e-300) || !std::isfinite(n)) {
      throw InvalidArgument("cannot normalize a zero or non-finite vector");
    }
    UnitVec u;
    u.v_ = (1.0 / n) * p;
    if (std::abs(dot(u.v_, u.v_) - 1.0) > kNormTolerance) {
      u.v_ = (1.0 / norm(u.v_)) * u.v_;
    }
    return u;
  }

  /// Spherical angles: polar theta from +z, azimuth phi from +x.
  static UnitVec from_angles(double theta, double phi) {
    return from(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                std::cos(theta));
  }

  constexpr double x() const { return v_.x; }
  constexpr double y() const { return v_.y; }
  constexpr double z() const { return v_.z; }
  constexpr Vec3 vec() const { return v_; }
  constexpr operator Vec3() const { return v_; }  // NOLINT(google-explicit-constructor)

  UnitVec operator-() const {
    UnitVec u;
    u.v_ = -v_;
    return u;
  }

  friend constexpr bool operator==(const UnitVec&, const UnitVec&) = default;

  friend std::ostream& operator<<(std::ostream& os, const UnitVec& u) {
    return os << "(" << u.x() << ", " << u.y() << ", " << u.z() << ")";
  }

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

inline double dot(const UnitVec& p, const UnitVec& q) { return dot(p.vec(), q.vec()); }

inline std::string to_string(const UnitVec& u) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g,%.17g,%.17g)", u.x(), u.y(), u.z());
  return buf;
}

/// Uniform point on the sphere: z uniform in [-1, 1], azimuth uniform.
inline UnitVec sample_unit_sphere(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = 2.0 * std::numbers::pi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVec::from(r * std::cos(phi), r * std::sin(phi), z);
}

/// Some unit vector orthogonal to a, chosen deterministically.
inline UnitVec any_orthogonal(const UnitVec& a) {
  const double ax = std::abs(a.x()), ay = std::abs(a.y()), az = std::abs(a.z());
  Vec3 axis = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  return UnitVec::from(cross(a.vec(), axis));
}

/// The point b on the great circle through a in direction t with a·b = 1 - eps.
inline UnitVec geodesic_from(const UnitVec& a, const UnitVec& t, double eps) {
  if (!(eps >= 0.0 && eps <= 2.0)) {
    throw InvalidArgument("geodesic separation must lie in [0, 2]");
  }
  const Vec3 perp = t.vec() - dot(t, a) * a.vec();
  if (norm(perp) < 1e-9) {
    throw DegenerateTangent("tangent is parallel to the base point");
  }
  const Vec3 e = (1.0 / norm(perp)) * perp;
  const double c = 1.0 - eps;
  // sqrt(1 - c^2) written to keep full relative precision for small eps.
  const double s = std::sqrt(std::max(0.0, eps * (2.0 - eps)));
  return UnitVec::from(c * a.vec() + s * e);
}

/// Radical inverse of `index` in base `base` (Halton sequence coordinate).
inline double halton(std::uint64_t index, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  for (std::uint64_t i = index; i > 0; i /= base) {
    f /= base;
    r += f * static_cast<double>(i % base);
  }
  return r;
}

/// n setting pairs from a four-dimensional Halton sequence (bases 2, 3, 5, 7),
/// each coordinate pair mapped to the sphere by the equal-area (z, phi) map.
inline std::vector<std::pair<UnitVec, UnitVec>> low_discrepancy_pairs(std::size_t n) {
  std::vector<std::pair<UnitVec, UnitVec>> out;
  out.reserve(n);
  auto point = [](double h1, double h2) {
    const double z = 2.0 * h1 - 1.0;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * h2;
    return UnitVec::from(r * std::cos(phi), r * std::sin(phi), z);
  };
  for (std::size_t i = 1; i <= n; ++i) {
    out.emplace_back(point(halton(i, 2), halton(i, 3)), point(halton(i, 5), halton(i, 7)));
  }
  return out;
}

}  // namespace hvs

#endif  // HVSINGLET_GEOMETRY_HPP_
