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

#ifndef HVSINGLET_QUANTUM_HPP_
#define HVSINGLET_QUANTUM_HPP_

#include <array>
#include <cmath>
#include <string>

#include "hvsinglet/errors.hpp"
#include "hvsinglet/geometry.hpp"

namespace hvs {

/// A measurement outcome, ±1.
enum class Outcome : int { Minus = -1, Plus = 1 };

inline constexpr std::array<Outcome, 2> kOutcomes = {Outcome::Minus, Outcome::Plus};

constexpr int value(Outcome o) { return static_cast<int>(o); }
constexpr Outcome operator-(Outcome o) { return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus; }
constexpr Outcome operator*(Outcome p, Outcome q) { return p == q ? Outcome::Plus : Outcome::Minus; }
constexpr std::size_t index(Outcome o) { return o == Outcome::Plus ? 1 : 0; }

/// Sign function with sgn(0) = +1 (also for -0.0).
constexpr Outcome sgn(double t) { return t >= 0.0 ? Outcome::Plus : Outcome::Minus; }

inline Outcome outcome_from_int(int v) {
  if (v == 1) return Outcome::Plus;
  if (v == -1) return Outcome::Minus;
  throw InvalidArgument("outcome must be -1 or +1, got " + std::to_string(v));
}

/// The four probabilities P(σ, τ).
///
/// Kernels return raw tables; checked() enforces the probability invariants
/// (entries in [-1e-12, 1 + 1e-12], clamped to [0, 1], sum 1 within 1e-9).
/// Raw tables of kernels evaluated off the support of their hidden-variable
/// distribution may hold negative entries; only their marginals are used.
struct JointTable {
  static constexpr double kEntryTolerance = 1e-12;
  static constexpr double kSumTolerance = 1e-9;

  std::array<std::array<double, 2>, 2> p{};

  constexpr double& at(Outcome s, Outcome t) { return p[index(s)][index(t)]; }
  constexpr double at(Outcome s, Outcome t) const { return p[index(s)][index(t)]; }

  double sum() const { return p[0][0] + p[0][1] + p[1][0] + p[1][1]; }

  bool is_valid() const {
    for (const auto& row : p) {
      for (double v : row) {
        if (!(v >= -kEntryTolerance && v <= 1.0 + kEntryTolerance)) return false;
      }
    }
    return std::abs(sum() - 1.0) <= kSumTolerance;
  }

  /// Validated, clamped copy. Throws InvalidProbability naming the entry.
  JointTable checked() const {
    for (Outcome s : kOutcomes) {
      for (Outcome t : kOutcomes) {
        const double v = at(s, t);
        if (!(v >= -kEntryTolerance && v <= 1.0 + kEntryTolerance)) {
          throw InvalidProbability("P(" + std::to_string(value(s)) + "," + std::to_string(value(t)) +
                                   ") = " + std::to_string(v) + " outside [0,1]");
        }
      }
    }
    if (!(std::abs(sum() - 1.0) <= kSumTolerance)) {
      throw InvalidProbability("probabilities sum to " + std::to_string(sum()));
    }
    JointTable out = *this;
    for (auto& row : out.p) {
      for (double& v : row) v = std::clamp(v, 0.0, 1.0);
    }
    return out;
  }
};

/// Σ στ P(σ, τ).
inline double correlator(const JointTable& t) {
  return t.p[1][1] + t.p[0][0] - t.p[1][0] - t.p[0][1];
}

/// Singlet statistics: P(σ, τ) = (1 - στ a·b) / 4.
inline JointTable qm_joint(const UnitVec& a, const UnitVec& b) {
  const double c = dot(a, b);
  JointTable t;
  for (Outcome s : kOutcomes) {
    for (Outcome r : kOutcomes) t.at(s, r) = (1.0 - value(s * r) * c) / 4.0;
  }
  return t;
}

inline double qm_correlator(const UnitVec& a, const UnitVec& b) { return -dot(a, b); }

/// E(a,b) - E(a,b') + E(a',b) + E(a',b').
template <class Correlator>
double chsh(Correlator&& e, const UnitVec& a, const UnitVec& a2, const UnitVec& b,
            const UnitVec& b2) {
  return e(a, b) - e(a, b2) + e(a2, b) + e(a2, b2);
}

/// Settings that maximize the singlet CHSH value: coplanar in the x-z plane
/// at 0°, 90° (Alice) and 225°, 315° (Bob). |S| = 2√2 there.
struct ChshSettings {
  UnitVec a, a2, b, b2;
};

inline UnitVec xz_direction(double degrees) {
  const double r = degrees * std::numbers::pi / 180.0;
  return UnitVec::from(std::sin(r), 0.0, std::cos(r));
}

inline ChshSettings optimal_chsh_settings() {
  return {xz_direction(0.0), xz_direction(90.0), xz_direction(225.0), xz_direction(315.0)};
}

}  // namespace hvs

#endif  // HVSINGLET_QUANTUM_HPP_
