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

#ifndef HVSINGLET_MODEL_HPP_
#define HVSINGLET_MODEL_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hvsinglet/errors.hpp"
#include "hvsinglet/geometry.hpp"
#include "hvsinglet/hidden.hpp"
#include "hvsinglet/parallel.hpp"
#include "hvsinglet/quantum.hpp"
#include "hvsinglet/stats.hpp"

namespace hvs {

enum class Verdict { Satisfied, Violated, Undetermined };

enum class Hypothesis : std::size_t { UC = 0, SI_A, SI_B, RC, Malus_A, Malus_B };
inline constexpr std::size_t kHypothesisCount = 6;
inline constexpr std::array<Hypothesis, kHypothesisCount> kHypotheses = {
    Hypothesis::UC,      Hypothesis::SI_A,    Hypothesis::SI_B,
    Hypothesis::RC,      Hypothesis::Malus_A, Hypothesis::Malus_B};

constexpr std::string_view name(Hypothesis h) {
  switch (h) {
    case Hypothesis::UC: return "UC";
    case Hypothesis::SI_A: return "SI_A";
    case Hypothesis::SI_B: return "SI_B";
    case Hypothesis::RC: return "RC";
    case Hypothesis::Malus_A: return "Malus_A";
    case Hypothesis::Malus_B: return "Malus_B";
  }
  return "?";
}

constexpr std::string_view name(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Undetermined: return "undetermined";
  }
  return "?";
}

/// One verdict per hypothesis, indexed by Hypothesis.
struct VerdictSet {
  std::array<Verdict, kHypothesisCount> v{Verdict::Undetermined, Verdict::Undetermined,
                                          Verdict::Undetermined, Verdict::Undetermined,
                                          Verdict::Undetermined, Verdict::Undetermined};

  constexpr Verdict& operator[](Hypothesis h) { return v[static_cast<std::size_t>(h)]; }
  constexpr Verdict operator[](Hypothesis h) const { return v[static_cast<std::size_t>(h)]; }
  friend constexpr bool operator==(const VerdictSet&, const VerdictSet&) = default;
};

/// A weighted point of a finite-support hidden-variable distribution.
struct Atom {
  HiddenSample sample;
  double weight = 0.0;
};

enum class ModelKind { Brans, TonerBacon, CerfFull, CerfReduced, Groblacher, Hall, DiLorenzo, Quantum };

using Sampler = std::function<HiddenSample(const UnitVec& a, const UnitVec& b, Rng& rng)>;
using Kernel = std::function<JointTable(const HiddenSample& h, const UnitVec& a, const UnitVec& b)>;
using AtomList = std::function<std::vector<Atom>(const UnitVec& a, const UnitVec& b)>;
/// True when setting a lies in a declared measure-zero exceptional set of λ.
using ExceptionalSet = std::function<bool(const HiddenSample& h, const UnitVec& a)>;

/// A hidden-variable model: a sampler of λ ~ μ(λ|a,b) and the conditional
/// joint-probability kernel P(σ,τ|λ,a,b). Immutable once built; share freely
/// across threads (samplers take caller-owned streams).
struct Model {
  std::string name;
  ModelKind kind = ModelKind::Quantum;
  Sampler sampler;
  Kernel kernel;
  /// Set only for finite-support μ.
  AtomList atoms;
  /// Optional.
  ExceptionalSet exceptional;
  /// What the model is known to satisfy or violate.
  VerdictSet declared_profile;

  bool is_atomic() const { return static_cast<bool>(atoms); }
};

inline double marginal_A(const JointTable& t, Outcome s) { return t.at(s, Outcome::Minus) + t.at(s, Outcome::Plus); }
inline double marginal_B(const JointTable& t, Outcome r) { return t.at(Outcome::Minus, r) + t.at(Outcome::Plus, r); }

/// Q_τ(σ) = P(σ,τ) / M_σ, indexed by index(τ).
inline std::array<double, 2> conditional_B_given_A(const JointTable& t, Outcome s) {
  const double m = marginal_A(t, s);
  if (!(m > 1e-12)) {
    throw UndefinedConditional("conditional given sigma=" + std::to_string(value(s)) +
                               " undefined: marginal " + std::to_string(m));
  }
  return {t.at(s, Outcome::Minus) / m, t.at(s, Outcome::Plus) / m};
}

inline std::string describe_settings(const UnitVec& a, const UnitVec& b) {
  return "a=" + to_string(a) + " b=" + to_string(b);
}

/// Kernel evaluation with the probability invariants enforced; failures name
/// the model, the settings and the offending λ.
inline JointTable checked_kernel(const Model& m, const HiddenSample& h, const UnitVec& a,
                                 const UnitVec& b) {
  try {
    return m.kernel(h, a, b).checked();
  } catch (const InvalidProbability& e) {
    throw InvalidProbability(m.name + ": " + e.what() + " at " + describe_settings(a, b) +
                             " lambda=" + describe(h));
  }
}

/// Per-entry Monte Carlo estimates, plus the correlator Σστ P on the same draws.
struct JointEstimate {
  std::array<std::array<Estimate, 2>, 2> p{};
  Estimate correlator;

  const Estimate& at(Outcome s, Outcome t) const { return p[index(s)][index(t)]; }
};

/// Average of the kernel over λ_i ~ μ(λ|a,b), i = 1..n.
inline JointEstimate estimate_joint(const Model& m, const UnitVec& a, const UnitVec& b,
                                    std::uint64_t n, std::uint64_t seed,
                                    unsigned workers = default_workers()) {
  const auto est = mc_mean<5>(n, seed, workers, [&](Rng& rng) {
    const JointTable t = checked_kernel(m, m.sampler(a, b, rng), a, b);
    return std::array<double, 5>{t.p[0][0], t.p[0][1], t.p[1][0], t.p[1][1], correlator(t)};
  });
  JointEstimate out;
  out.p[0][0] = est[0];
  out.p[0][1] = est[1];
  out.p[1][0] = est[2];
  out.p[1][1] = est[3];
  out.correlator = est[4];
  return out;
}

/// Monte Carlo estimate of E(a,b) = ⟨Σστ P⟩.
inline Estimate estimate_correlator(const Model& m, const UnitVec& a, const UnitVec& b,
                                    std::uint64_t n, std::uint64_t seed,
                                    unsigned workers = default_workers()) {
  return mc_mean<1>(n, seed, workers, [&](Rng& rng) {
    return std::array<double, 1>{correlator(checked_kernel(m, m.sampler(a, b, rng), a, b))};
  })[0];
}

/// Exact λ-average for finite-support models.
inline JointTable exact_average(const Model& m, const UnitVec& a, const UnitVec& b) {
  if (!m.is_atomic()) throw NotAtomic(m.name + " has a continuous hidden-variable distribution");
  JointTable out;
  for (const Atom& at : m.atoms(a, b)) {
    const JointTable t = checked_kernel(m, at.sample, a, b);
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) out.p[i][j] += at.weight * t.p[i][j];
    }
  }
  return out;
}

/// Draws one atom of a finite list by its weight.
inline const Atom& pick_atom(const std::vector<Atom>& atoms, Rng& rng) {
  const double r = rng.uniform();
  double acc = 0.0;
  for (const Atom& a : atoms) {
    acc += a.weight;
    if (r < acc) return a;
  }
  // r lands past the rounded cumulative sum: return the last atom with weight.
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    if (it->weight > 0.0) return *it;
  }
  throw InvalidParams("atom list has no positive weight");
}

}  // namespace hvs

#endif  // HVSINGLET_MODEL_HPP_
