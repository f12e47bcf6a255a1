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

#ifndef HVSINGLET_AUDITOR_HPP_
#define HVSINGLET_AUDITOR_HPP_

// Empirical classification of a model against Uncorrelated Choice (UC),
// Setting-Independence (SI), Reducibility of Correlations (RC) and Malus's
// law. The kernels are closed-form in λ, so SI, RC and Malus are probed on
// exact kernel values at tolerance 1e-9; only UC needs statistics for
// continuous distributions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hvsinglet/errors.hpp"
#include "hvsinglet/geometry.hpp"
#include "hvsinglet/hidden.hpp"
#include "hvsinglet/model.hpp"
#include "hvsinglet/stats.hpp"

namespace hvs {

/// Configuration where the violation was seen.
struct Witness {
  HiddenSample lambda;
  UnitVec a, b;
  /// Second setting for sweeps (the remote setting that changed the marginal)
  /// or the second setting pair for UC comparisons.
  std::optional<std::pair<UnitVec, UnitVec>> other;
  int sigma = 0;
  int tau = 0;
  std::string what;

  std::string describe() const {
    std::string s = what + " " + describe_settings(a, b) + " lambda=" + hvs::describe(lambda);
    if (other) s += " vs a'=" + to_string(other->first) + " b'=" + to_string(other->second);
    if (sigma != 0) s += " sigma=" + std::to_string(sigma);
    if (tau != 0) s += " tau=" + std::to_string(tau);
    return s;
  }
};

struct Finding {
  Verdict verdict = Verdict::Undetermined;
  double max_deviation = 0.0;
  std::optional<Witness> witness;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::string note;
};

struct HypothesisProfile {
  std::string model;
  std::array<Finding, kHypothesisCount> findings;

  Finding& operator[](Hypothesis h) { return findings[static_cast<std::size_t>(h)]; }
  const Finding& operator[](Hypothesis h) const { return findings[static_cast<std::size_t>(h)]; }

  VerdictSet verdicts() const {
    VerdictSet v;
    for (Hypothesis h : kHypotheses) v[h] = (*this)[h].verdict;
    return v;
  }
};

struct AuditConfig {
  std::size_t n_lambda = 200;
  std::size_t n_settings = 16;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  /// UC: setting pairs compared against the base pair.
  std::size_t n_pairs = 3;
  /// UC: draws per setting pair for the KS comparison (>= 100).
  std::size_t n_ks = 20000;
  double ks_alpha = 1e-3;
};

namespace detail {

inline void track(Finding& f, double dev, const Witness& w) {
  ++f.checked;
  if (!f.witness || dev > f.max_deviation) {
    f.max_deviation = std::max(f.max_deviation, dev);
    f.witness = w;
  }
}

inline void conclude(Finding& f, double tol) {
  f.verdict = f.max_deviation > tol ? Verdict::Violated : Verdict::Satisfied;
  if (f.verdict == Verdict::Satisfied) f.witness.reset();
}

}  // namespace detail

/// Setting-Independence: with λ held as a value, the remote setting is swept
/// over n_settings random directions and the change of the local marginal
/// recorded. Returns {SI_A, SI_B}.
inline std::pair<Finding, Finding> audit_SI(const Model& m, std::size_t n_lambda,
                                            std::size_t n_settings, double tol,
                                            std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x5101));
  Finding fa, fb;
  for (std::size_t i = 0; i < n_lambda; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const HiddenSample h = m.sampler(a, b, rng);
    const JointTable ref = m.kernel(h, a, b);
    for (std::size_t j = 0; j < n_settings; ++j) {
      const UnitVec b2 = sample_unit_sphere(rng), a2 = sample_unit_sphere(rng);
      const JointTable ta = m.kernel(h, a, b2);
      const JointTable tb = m.kernel(h, a2, b);
      for (Outcome s : kOutcomes) {
        const double da = std::abs(marginal_A(ta, s) - marginal_A(ref, s));
        detail::track(fa, da, {h, a, b, std::pair{a, b2}, value(s), 0, "marginal_A changed with b"});
        const double db = std::abs(marginal_B(tb, s) - marginal_B(ref, s));
        detail::track(fb, db, {h, a, b, std::pair{a2, b}, 0, value(s), "marginal_B changed with a"});
      }
    }
  }
  detail::conclude(fa, tol);
  detail::conclude(fb, tol);
  return {fa, fb};
}

/// Reducibility of Correlations, Q_τ(σ, λ) = M_τ(λ), on λ ~ μ(·|a,b).
///
/// Where both conditionals are defined the statistic is
/// max_τ |Q_τ(+1) − Q_τ(−1)|. Where one marginal is below 1e-9 (deterministic
/// outcome at A) that σ is skipped and the defined conditional is compared
/// with M_τ directly; such pairs are counted in `skipped`.
inline Finding audit_RC(const Model& m, std::size_t n_lambda, std::size_t n_settings, double tol,
                        std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x4243));
  Finding f;
  std::size_t evaluated = 0;
  for (std::size_t j = 0; j < n_settings; ++j) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    for (std::size_t i = 0; i < n_lambda; ++i) {
      const HiddenSample h = m.sampler(a, b, rng);
      const JointTable t = m.kernel(h, a, b);
      const double mp = marginal_A(t, Outcome::Plus), mm = marginal_A(t, Outcome::Minus);
      const bool plus_ok = mp >= 1e-9, minus_ok = mm >= 1e-9;
      if (!plus_ok && !minus_ok) continue;
      ++evaluated;
      if (plus_ok && minus_ok) {
        const auto qp = conditional_B_given_A(t, Outcome::Plus);
        const auto qm = conditional_B_given_A(t, Outcome::Minus);
        for (Outcome r : kOutcomes) {
          const double d = std::abs(qp[index(r)] - qm[index(r)]);
          detail::track(f, d, {h, a, b, std::nullopt, 0, value(r), "Q_tau(+1) != Q_tau(-1)"});
        }
      } else {
        ++f.skipped;
        const Outcome s = plus_ok ? Outcome::Plus : Outcome::Minus;
        const auto q = conditional_B_given_A(t, s);
        for (Outcome r : kOutcomes) {
          const double d = std::abs(q[index(r)] - marginal_B(t, r));
          detail::track(f, d, {h, a, b, std::nullopt, value(s), value(r), "Q_tau(sigma) != M_tau"});
        }
      }
    }
  }
  if (evaluated == 0) throw AllSkipped(m.name + ": no (lambda, a, b) with a defined conditional");
  f.note = std::to_string(f.skipped) + " one-sided (deterministic A) samples";
  detail::conclude(f, tol);
  return f;
}

/// Features for the UC comparison: projections w·r, sign products
/// sgn(w·r1) sgn(w·r2), and binary fields times sgn(u·r) sgn(v·r).
inline std::vector<double> uc_features(const HiddenSample& h, const UnitVec& r1, const UnitVec& r2) {
  std::vector<double> f;
  const auto vecs = free_vectors(h);
  for (const UnitVec& w : vecs) {
    f.push_back(dot(w, r1));
    f.push_back(dot(w, r2));
  }
  for (const UnitVec& w : vecs) f.push_back(value(sgn(dot(w, r1)) * sgn(dot(w, r2))));
  if (vecs.size() >= 2) {
    for (Outcome beta : binary_fields(h)) {
      for (const UnitVec* r : {&r1, &r2}) {
        f.push_back(value(beta * sgn(dot(vecs[0], *r)) * sgn(dot(vecs[1], *r))));
      }
    }
  }
  return f;
}

/// Uncorrelated Choice, μ(λ|a,b) = μ(λ).
///
/// Atomic models: the atom list is compared structurally across setting
/// pairs (locations and weights within 1e-12). Continuous models: N draws
/// at a base pair (a0, b0), a0·b0 = 1/2, are compared with N draws at each
/// of n_pairs random pairs by two-sample KS on uc_features with reference
/// directions (a0, b0); violated iff any statistic exceeds the critical
/// value at level alpha.
inline Finding audit_UC(const Model& m, std::size_t n_pairs, std::size_t n, double tol,
                        std::uint64_t seed, double alpha = 1e-3) {
  Rng rng(derive_seed(seed, 0x5543));
  Finding f;
  const UnitVec a0 = sample_unit_sphere(rng);
  const UnitVec b0 = geodesic_from(a0, any_orthogonal(a0), 0.5);

  if (m.is_atomic()) {
    const auto base = m.atoms(a0, b0);
    for (std::size_t k = 0; k < n_pairs; ++k) {
      const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
      const auto other = m.atoms(a, b);
      ++f.checked;
      if (other.size() != base.size()) {
        detail::track(f, 1.0, {base.front().sample, a0, b0, std::pair{a, b}, 0, 0, "atom count differs"});
        continue;
      }
      for (std::size_t i = 0; i < base.size(); ++i) {
        double dev = std::abs(base[i].weight - other[i].weight);
        if (!approx_equal(base[i].sample, other[i].sample, tol)) dev = std::max(dev, 1.0);
        if (dev > 0.0) {
          detail::track(f, dev, {base[i].sample, a0, b0, std::pair{a, b}, 0, 0, "atom moved or reweighted"});
        }
      }
    }
    f.note = "structural atom comparison";
    detail::conclude(f, tol);
    return f;
  }

  if (n < 100) throw InvalidArgument("KS comparison needs at least 100 draws per pair");
  auto draw_features = [&](const UnitVec& a, const UnitVec& b, Rng& r) {
    std::vector<std::vector<double>> cols;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = uc_features(m.sampler(a, b, r), a0, b0);
      if (cols.empty()) cols.resize(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) cols[j].push_back(x[j]);
    }
    return cols;
  };
  Rng base_rng = rng.split();
  const auto base = draw_features(a0, b0, base_rng);
  const double crit = ks_critical_value(alpha, n, n);
  double worst_ratio = 0.0;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    Rng pair_rng = rng.split();
    const auto other = draw_features(a, b, pair_rng);
    for (std::size_t j = 0; j < base.size(); ++j) {
      const double d = ks_statistic(base[j], other[j]);
      ++f.checked;
      worst_ratio = std::max(worst_ratio, d / crit);
      if (d > f.max_deviation) {
        f.max_deviation = d;
        f.witness = Witness{m.sampler(a0, b0, pair_rng), a0, b0, std::pair{a, b}, 0, 0,
                            "KS statistic of feature " + std::to_string(j) + " = " +
                                std::to_string(d) + " (critical " + std::to_string(crit) + ")"};
      }
    }
  }
  f.verdict = worst_ratio > 1.0 ? Verdict::Violated : Verdict::Satisfied;
  if (f.verdict == Verdict::Satisfied) f.witness.reset();
  f.note = "KS critical value " + std::to_string(crit) + " at alpha " + std::to_string(alpha);
  return f;
}

/// Malus's law, M_σ = (1 + σ u·a)/2 and M_τ = (1 + τ v·b)/2, checked on λ
/// drawn at (a, b) and at swept remote settings. Undetermined when λ has
/// no vector hidden variables. Returns {Malus_A, Malus_B}.
inline std::pair<Finding, Finding> audit_malus(const Model& m, std::size_t n_lambda,
                                               std::size_t n_settings, double tol,
                                               std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x4d41));
  Finding fa, fb;
  for (std::size_t i = 0; i < n_lambda; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const HiddenSample h = m.sampler(a, b, rng);
    const auto u = u_of(h), v = v_of(h);
    if (!u || !v) {
      fa.note = fb.note = "no vector hidden variables";
      return {fa, fb};
    }
    for (std::size_t j = 0; j <= n_settings; ++j) {
      const UnitVec b2 = j == 0 ? b : sample_unit_sphere(rng);
      const UnitVec a2 = j == 0 ? a : sample_unit_sphere(rng);
      const JointTable ta = m.kernel(h, a, b2);
      const JointTable tb = m.kernel(h, a2, b);
      for (Outcome s : kOutcomes) {
        const double da = std::abs(marginal_A(ta, s) - (1.0 + value(s) * dot(*u, a)) / 2.0);
        detail::track(fa, da, {h, a, b2, std::nullopt, value(s), 0, "marginal_A != (1+sigma u.a)/2"});
        const double db = std::abs(marginal_B(tb, s) - (1.0 + value(s) * dot(*v, b)) / 2.0);
        detail::track(fb, db, {h, a2, b, std::nullopt, 0, value(s), "marginal_B != (1+tau v.b)/2"});
      }
    }
  }
  detail::conclude(fa, tol);
  detail::conclude(fb, tol);
  return {fa, fb};
}

/// Largest |M − 1/2| over both parties on λ ~ μ(·|a,b); satisfied iff <= tol.
inline Finding check_trivial_marginals(const Model& m, std::size_t n_lambda, std::size_t n_settings,
                                       double tol, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x544d));
  Finding f;
  for (std::size_t j = 0; j < n_settings; ++j) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    for (std::size_t i = 0; i < n_lambda; ++i) {
      const HiddenSample h = m.sampler(a, b, rng);
      const JointTable t = m.kernel(h, a, b);
      for (Outcome s : kOutcomes) {
        detail::track(f, std::abs(marginal_A(t, s) - 0.5), {h, a, b, std::nullopt, value(s), 0, "marginal_A != 1/2"});
        detail::track(f, std::abs(marginal_B(t, s) - 0.5), {h, a, b, std::nullopt, 0, value(s), "marginal_B != 1/2"});
      }
    }
  }
  detail::conclude(f, tol);
  return f;
}

/// All six findings.
inline HypothesisProfile audit(const Model& m, const AuditConfig& cfg = {}) {
  HypothesisProfile p;
  p.model = m.name;
  p[Hypothesis::UC] = audit_UC(m, cfg.n_pairs, cfg.n_ks, 1e-12, cfg.seed, cfg.ks_alpha);
  auto [si_a, si_b] = audit_SI(m, cfg.n_lambda, cfg.n_settings, cfg.tol, cfg.seed);
  p[Hypothesis::SI_A] = std::move(si_a);
  p[Hypothesis::SI_B] = std::move(si_b);
  p[Hypothesis::RC] = audit_RC(m, cfg.n_lambda, cfg.n_settings, cfg.tol, cfg.seed);
  auto [ma, mb] = audit_malus(m, cfg.n_lambda, cfg.n_settings, cfg.tol, cfg.seed);
  p[Hypothesis::Malus_A] = std::move(ma);
  p[Hypothesis::Malus_B] = std::move(mb);
  return p;
}

/// Flat record for CSV/JSON emission.
struct AuditRecord {
  std::string model;
  std::string hypothesis;
  std::string declared;
  std::string verdict;
  double max_deviation = 0.0;
  std::string witness;
};

inline std::vector<AuditRecord> audit_records(const HypothesisProfile& p, const VerdictSet& declared) {
  std::vector<AuditRecord> out;
  for (Hypothesis h : kHypotheses) {
    const Finding& f = p[h];
    out.push_back({p.model, std::string(name(h)), std::string(name(declared[h])),
                   std::string(name(f.verdict)), f.max_deviation,
                   f.witness ? f.witness->describe() : std::string()});
  }
  return out;
}

}  // namespace hvs

#endif  // HVSINGLET_AUDITOR_HPP_
