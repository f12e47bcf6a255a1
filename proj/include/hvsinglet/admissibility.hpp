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

#ifndef HVSINGLET_ADMISSIBILITY_HPP_
#define HVSINGLET_ADMISSIBILITY_HPP_

// Correlator decomposition D = -a·b + C of a hidden-variable model and the
// constraints a candidate C must satisfy to reproduce the singlet:
//
//   C(λ, a, ±a) = 0,   ∫dμ C = 0,   C = (1+a·b)^{s+} (1-a·b)^{s-} G with s± >= 1,
//
// and P(σ,τ|λ,a,b) = (1 + στ D)/4 must stay inside [0, 1].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hvsinglet/auditor.hpp"
#include "hvsinglet/errors.hpp"
#include "hvsinglet/expr.hpp"
#include "hvsinglet/geometry.hpp"
#include "hvsinglet/hidden.hpp"
#include "hvsinglet/model.hpp"
#include "hvsinglet/parallel.hpp"
#include "hvsinglet/random.hpp"
#include "hvsinglet/stats.hpp"

namespace hvs {

/// Σ στ p[σ][τ]; recovers D from P = (1 + στD)/4.
inline double correlator_D(const JointTable& t) { return correlator(t); }

/// C(λ,a,b) = D(λ,a,b) + a·b for a model kernel.
inline double extract_C(const Model& m, const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
  return correlator_D(checked_kernel(m, h, a, b)) + dot(a, b);
}

/// A real function of (λ, a, b): used for both C and G.
using CFunction = std::function<double(const HiddenSample& h, const UnitVec& a, const UnitVec& b)>;
/// Nonnegative, unnormalized density of λ relative to a base sampler.
using LambdaWeight = std::function<double(const HiddenSample& h)>;

inline CFunction model_C(const Model& m) {
  return [m](const HiddenSample& h, const UnitVec& a, const UnitVec& b) { return extract_C(m, h, a, b); };
}

/// G = C / ((1+x)^{s+} (1-x)^{s-}); zero where |C| <= 1e-12 (D computed
/// from a kernel carries rounding), infinite where only the prefactor vanishes.
inline CFunction g_from_c(CFunction c, double s_plus, double s_minus) {
  return [c = std::move(c), s_plus, s_minus](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
    const double x = dot(a, b);
    const double cv = c(h, a, b);
    const double pre = std::pow(std::max(0.0, 1.0 + x), s_plus) * std::pow(std::max(0.0, 1.0 - x), s_minus);
    if (std::abs(cv) <= 1e-12) return 0.0;
    if (pre == 0.0) return std::numeric_limits<double>::infinity();
    return cv / pre;
  };
}

/// MC estimate of ∫dμ(λ|a,b) C(λ,a,b).
inline Estimate mean_C(const Model& m, const UnitVec& a, const UnitVec& b, std::uint64_t n,
                       std::uint64_t seed, unsigned workers = default_workers()) {
  return mc_mean<1>(n, seed, workers, [&](Rng& rng) {
    return std::array<double, 1>{extract_C(m, m.sampler(a, b, rng), a, b)};
  })[0];
}

// ---------------------------------------------------------------------------
// Perfect (anti)correlation zeros.

struct PacReport {
  bool pass = true;
  double max_parallel = 0.0;
  double max_antiparallel = 0.0;
  std::size_t checked = 0;
  /// λ skipped because a fell in the model's exceptional set.
  std::size_t excluded = 0;
  std::optional<Witness> witness;
};

/// max |C(λ,a,a)| and |C(λ,a,-a)| over n_dirs random a and n_lambda draws of
/// λ ~ μ(λ|a,±a) per direction.
inline PacReport check_pac_zero(const CFunction& c, const Sampler& sampler, std::size_t n_lambda,
                                std::size_t n_dirs, double tol, std::uint64_t seed,
                                const ExceptionalSet& exceptional = {}) {
  Rng rng(derive_seed(seed, 0x9ac0));
  PacReport r;
  double worst = -1.0;
  for (std::size_t i = 0; i < n_dirs; ++i) {
    const UnitVec a = sample_unit_sphere(rng);
    for (const bool anti : {false, true}) {
      const UnitVec b = anti ? -a : a;
      for (std::size_t j = 0; j < n_lambda; ++j) {
        const HiddenSample h = sampler(a, b, rng);
        if (exceptional && exceptional(h, a)) {
          ++r.excluded;
          continue;
        }
        const double v = std::abs(c(h, a, b));
        ++r.checked;
        double& slot = anti ? r.max_antiparallel : r.max_parallel;
        slot = std::max(slot, v);
        if (v > worst) {
          worst = v;
          Witness w{h, a, b, std::nullopt, 0, 0, anti ? "|C(lambda,a,-a)|" : "|C(lambda,a,a)|"};
          w.what += "=" + std::to_string(v);
          r.witness = std::move(w);
        }
      }
    }
  }
  r.pass = !(worst > tol);
  if (r.pass) r.witness.reset();
  return r;
}

// ---------------------------------------------------------------------------
// Frobenius indices.

/// n points log-spaced in [lo, hi].
inline std::vector<double> log_grid(std::size_t n = 31, double lo = 1e-6, double hi = 1e-1) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw InvalidArgument("log grid needs n >= 2 and 0 < lo < hi");
  std::vector<double> g(n);
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return g;
}

struct FrobeniusSide {
  /// Mean of the accepted per-λ slopes.
  double s = 0.0;
  /// Spread of the accepted slopes over sqrt(count).
  double std_error = 0.0;
  /// Mean per-fit slope standard error and RMS log-residual.
  double mean_fit_error = 0.0;
  double mean_rms_residual = 0.0;
  std::size_t fits = 0;
  std::size_t rejected = 0;
  std::size_t zero_points = 0;
  std::size_t points = 0;
};

struct FrobeniusEstimate {
  /// Approach b -> a (a·b = 1 - ε).
  FrobeniusSide minus;
  /// Approach b -> -a (a·b = -1 + ε).
  FrobeniusSide plus;
};

/// Per-fit RMS log-residual above which a λ is not treated as a power law.
inline constexpr double kMaxFitResidual = 0.25;

namespace detail {

inline FrobeniusSide frobenius_side(const CFunction& c, const Sampler& sampler, const UnitVec& a,
                                    const UnitVec& t, const std::vector<double>& eps, std::size_t n_lambda,
                                    Rng& rng, bool anti) {
  FrobeniusSide out;
  std::vector<UnitVec> path;
  path.reserve(eps.size());
  for (double e : eps) path.push_back(geodesic_from(a, t, anti ? 2.0 - e : e));
  // Near -a, 2 - ε loses the low bits of ε; use the realized 1 + a·b.
  std::vector<double> sep(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) sep[i] = anti ? 1.0 + dot(a, path[i]) : 1.0 - dot(a, path[i]);

  const UnitVec end = anti ? -a : a;
  std::vector<double> slopes, xs, ys;
  double fit_err = 0.0, rms = 0.0;
  for (std::size_t j = 0; j < n_lambda; ++j) {
    const HiddenSample h = sampler(a, end, rng);
    xs.clear();
    ys.clear();
    for (std::size_t i = 0; i < eps.size(); ++i) {
      ++out.points;
      const double v = std::abs(c(h, a, path[i]));
      if (!(v > 0.0) || !std::isfinite(v) || !(sep[i] > 0.0)) {
        ++out.zero_points;
        continue;
      }
      xs.push_back(std::log(sep[i]));
      ys.push_back(std::log(v));
    }
    if (xs.size() < 3) continue;
    const LinearFit f = fit_line(xs, ys);
    if (f.rms_residual > kMaxFitResidual) {
      ++out.rejected;
      continue;
    }
    slopes.push_back(f.slope);
    fit_err += f.slope_std_error;
    rms += f.rms_residual;
  }
  if (out.zero_points * 10 > out.points * 9) {
    throw InsufficientData("C vanishes at " + std::to_string(out.zero_points) + " of " +
                           std::to_string(out.points) + " points along the approach to " +
                           (anti ? "-a" : "a"));
  }
  if (slopes.empty()) {
    throw InsufficientData("no power-law fit accepted along the approach to " + std::string(anti ? "-a" : "a") +
                           " (" + std::to_string(out.rejected) + " rejected)");
  }
  Accumulator acc;
  for (double s : slopes) acc.add(s);
  const Estimate e = acc.estimate();
  out.s = e.mean;
  out.std_error = e.std_error;
  out.fits = slopes.size();
  out.mean_fit_error = fit_err / static_cast<double>(slopes.size());
  out.mean_rms_residual = rms / static_cast<double>(slopes.size());
  return out;
}

}  // namespace detail

/// Log-log slope of |C(λ,a,b)| against the separation from ±a along the
/// great circle through a with tangent t. λ is drawn once per fit (at the
/// endpoint settings) and held fixed along the path; zeros are skipped.
inline FrobeniusEstimate estimate_frobenius_indices(const CFunction& c, const Sampler& sampler,
                                                    const UnitVec& a, const UnitVec& t,
                                                    const std::vector<double>& eps_grid = log_grid(),
                                                    std::size_t n_lambda = 200, std::uint64_t seed = 0) {
  for (double e : eps_grid) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidArgument("approach grid must lie in (0, 1)");
  }
  FrobeniusEstimate out;
  Rng rm(derive_seed(seed, 0xf70b));
  Rng rp(derive_seed(seed, 0xf70c));
  out.minus = detail::frobenius_side(c, sampler, a, t, eps_grid, n_lambda, rm, false);
  out.plus = detail::frobenius_side(c, sampler, a, t, eps_grid, n_lambda, rp, true);
  return out;
}

// ---------------------------------------------------------------------------
// Admissibility of a candidate G.

enum class Rule { Exponents, Positivity, ZeroMean, BoundaryValue, Evaluation };

constexpr std::string_view name(Rule r) {
  switch (r) {
    case Rule::Exponents: return "exponents";
    case Rule::Positivity: return "positivity";
    case Rule::ZeroMean: return "zero-mean";
    case Rule::BoundaryValue: return "boundary-value";
    case Rule::Evaluation: return "evaluation";
  }
  return "?";
}

struct RuleFailure {
  Rule rule = Rule::Exponents;
  /// Offending quantity: the exponent, the probability, the mean in units
  /// of its standard error, or |G|.
  double value = 0.0;
  std::optional<Witness> witness;
  std::string what;
};

struct AdmissibilityConfig {
  std::size_t n_lambda = 2000;
  std::size_t n_settings = 32;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  /// Base directions given the b = ±a ± εt boundary treatment.
  std::size_t n_boundary_dirs = 4;
  std::vector<double> boundary_eps = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
};

struct AdmissibilityReport {
  bool admissible = false;
  /// G vanished at every evaluated point (C ≡ 0).
  bool degenerate = false;
  double min_probability = std::numeric_limits<double>::infinity();
  double max_probability = -std::numeric_limits<double>::infinity();
  /// Most negative probability on the boundary configurations.
  double min_boundary_probability = std::numeric_limits<double>::infinity();
  std::optional<Witness> boundary_witness;
  /// Largest |mean G| / (stderr + floor) over the settings points.
  double max_mean_sigma = 0.0;
  std::size_t settings_checked = 0;
  std::size_t points_checked = 0;
  std::vector<RuleFailure> failures;

  bool failed(Rule r) const {
    return std::any_of(failures.begin(), failures.end(), [r](const RuleFailure& f) { return f.rule == r; });
  }
};

namespace detail {

/// Weighted mean with self-normalized weights and its delta-method stderr.
struct WeightedMean {
  double sw = 0.0, swg = 0.0;
  std::vector<std::pair<double, double>> wg;

  void add(double w, double g) {
    sw += w;
    swg += w * g;
    wg.emplace_back(w, g);
  }

  Estimate estimate() const {
    if (!(sw > 0.0)) throw InvalidArgument("lambda weight vanishes on every sample");
    const double m = swg / sw;
    double v = 0.0;
    for (const auto& [w, g] : wg) v += w * w * (g - m) * (g - m);
    return {m, std::sqrt(v) / sw, wg.size()};
  }
};

}  // namespace detail

/// Numerical certification of a candidate G with exponents s+, s-.
///
/// Rules: (i) s± >= 1; (ii) every sampled P(σ,τ|λ,a,b) inside [-tol, 1+tol];
/// (iii) the λ-mean of G at each settings point within 4·stderr of zero;
/// (iv) 0 < |G(λ,a,±a)| < ∞ outside the exceptional set. A G that is zero at
/// every point is the degenerate C ≡ 0 case and accepted as is.
inline AdmissibilityReport admissible(const CFunction& g, const Sampler& sampler, double s_plus,
                                      double s_minus, const AdmissibilityConfig& cfg = {},
                                      const LambdaWeight& weight = {},
                                      const ExceptionalSet& exceptional = {}) {
  if (!(s_plus > 0.0) || !(s_minus > 0.0)) throw InvalidArgument("exponents must be positive");
  if (cfg.n_lambda < 2 || cfg.n_settings < 1) throw InvalidArgument("need n_lambda >= 2 and n_settings >= 1");
  AdmissibilityReport r;
  bool all_zero = true;

  std::optional<RuleFailure> positivity, zero_mean, boundary, evaluation;

  // Settings: interior low-discrepancy grid, then the boundary approaches.
  struct Point {
    UnitVec a, b;
    bool boundary;
  };
  std::vector<Point> points;
  const auto grid = low_discrepancy_pairs(cfg.n_settings);
  for (const auto& [a, b] : grid) points.push_back({a, b, false});
  for (std::size_t i = 0; i < std::min(cfg.n_boundary_dirs, grid.size()); ++i) {
    const UnitVec& a = grid[i].first;
    const UnitVec t = std::abs(dot(a, grid[i].second)) < 1.0 - 1e-9 ? grid[i].second : any_orthogonal(a);
    for (double e : cfg.boundary_eps) {
      points.push_back({a, geodesic_from(a, t, e), true});
      points.push_back({a, geodesic_from(a, t, 2.0 - e), true});
    }
  }

  auto evaluate = [&](const HiddenSample& h, const UnitVec& a, const UnitVec& b) -> std::optional<double> {
    try {
      const double v = g(h, a, b);
      if (!std::isnan(v)) return v;
      throw expr::DomainError("G evaluated to NaN");
    } catch (const Error& e) {
      if (!evaluation) {
        evaluation = RuleFailure{Rule::Evaluation, 0.0, Witness{h, a, b, std::nullopt, 0, 0, e.what()}, e.what()};
      }
      return std::nullopt;
    }
  };

  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& [a, b, on_boundary] = points[k];
    const double x = dot(a, b);
    const double pre = std::pow(std::max(0.0, 1.0 + x), s_plus) * std::pow(std::max(0.0, 1.0 - x), s_minus);
    Rng rng(derive_seed(cfg.seed, k));
    detail::WeightedMean mean;
    for (std::size_t j = 0; j < cfg.n_lambda; ++j) {
      const HiddenSample h = sampler(a, b, rng);
      const double w = weight ? weight(h) : 1.0;
      if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("lambda weight must be finite and nonnegative");
      const auto gv = evaluate(h, a, b);
      if (!gv) continue;
      if (*gv != 0.0) all_zero = false;
      mean.add(w, *gv);
      if (w == 0.0) continue;  // outside the support of μ
      ++r.points_checked;
      const double d = -x + pre * *gv;
      for (Outcome s : kOutcomes) {
        for (Outcome t : kOutcomes) {
          const double p = (1.0 + value(s * t) * d) / 4.0;
          r.min_probability = std::min(r.min_probability, p);
          r.max_probability = std::max(r.max_probability, p);
          const bool bad = p < -cfg.tol || p > 1.0 + cfg.tol || std::isnan(p);
          if (on_boundary && p < r.min_boundary_probability) {
            r.min_boundary_probability = p;
            if (p < -cfg.tol) {
              r.boundary_witness = Witness{h, a, b, std::nullopt, value(s), value(t), "P=" + std::to_string(p)};
            }
          }
          const double excess = p < 0.0 ? -p : p - 1.0;
          if (bad && (!positivity || excess > positivity->value)) {
            positivity = RuleFailure{Rule::Positivity, excess,
                                     Witness{h, a, b, std::nullopt, value(s), value(t), "P=" + std::to_string(p)},
                                     "probability outside [0, 1] by " + std::to_string(excess)};
          }
        }
      }
    }
    ++r.settings_checked;
    if (mean.wg.size() >= 2 && mean.sw > 0.0) {
      const Estimate e = mean.estimate();
      const double sig = std::abs(e.mean) / (e.std_error + 1e-300);
      if (!e.agrees_with(0.0)) {
        r.max_mean_sigma = std::max(r.max_mean_sigma, sig);
        if (!zero_mean || sig > zero_mean->value) {
          zero_mean = RuleFailure{Rule::ZeroMean, sig,
                                  Witness{hidden::None{}, a, b, std::nullopt, 0, 0,
                                          "mean G=" + std::to_string(e.mean) + " stderr=" + std::to_string(e.std_error)},
                                  "lambda-mean of G is " + std::to_string(sig) + " standard errors from zero"};
        }
      } else if (e.std_error > 0.0) {
        r.max_mean_sigma = std::max(r.max_mean_sigma, sig);
      }
    }
  }

  // Values at perfect (anti)correlation.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const UnitVec& a = grid[i].first;
    Rng rng(derive_seed(cfg.seed, 0xb0d0 + i));
    for (const bool anti : {false, true}) {
      const UnitVec b = anti ? -a : a;
      for (std::size_t j = 0; j < std::min<std::size_t>(cfg.n_lambda, 64); ++j) {
        const HiddenSample h = sampler(a, b, rng);
        if ((weight && weight(h) == 0.0) || (exceptional && exceptional(h, a))) continue;
        const auto gv = evaluate(h, a, b);
        if (!gv) continue;
        if (*gv != 0.0) all_zero = false;
        const double v = std::abs(*gv);
        if (!(v > 0.0) || !std::isfinite(v)) {
          if (!boundary) {
            boundary = RuleFailure{Rule::BoundaryValue, v,
                                   Witness{h, a, b, std::nullopt, 0, 0, "|G|=" + std::to_string(v)},
                                   std::string("|G(lambda,a,") + (anti ? "-a" : "a") + ")| is not in (0, inf)"};
          }
        }
      }
    }
  }

  if (all_zero && !evaluation) {
    r.degenerate = true;
    r.admissible = true;
    return r;
  }
  if (s_minus < 1.0 || s_plus < 1.0) {
    const bool minus = s_minus < 1.0;
    r.failures.push_back({Rule::Exponents, minus ? s_minus : s_plus, std::nullopt,
                          std::string(minus ? "s-" : "s+") + " = " + std::to_string(minus ? s_minus : s_plus) +
                              " is below 1"});
  }
  for (auto* f : {&positivity, &zero_mean, &boundary, &evaluation}) {
    if (*f) r.failures.push_back(std::move(**f));
  }
  r.admissible = r.failures.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Expression front end.

/// Variable values for λ at settings (a, b). Dot products are bound when λ
/// carries the vector, l1..l4 only for generic records.
inline expr::Bindings bindings_for(const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
  using expr::Var;
  expr::Bindings out;
  out.set(Var::AB, dot(a, b));
  if (const auto u = u_of(h)) {
    out.set(Var::UA, dot(*u, a));
    out.set(Var::UB, dot(*u, b));
  }
  if (const auto v = v_of(h)) {
    out.set(Var::VA, dot(*v, a));
    out.set(Var::VB, dot(*v, b));
  }
  if (const auto* g = std::get_if<hidden::Generic>(&h)) {
    out.set(Var::L1, g->l[0]).set(Var::L2, g->l[1]).set(Var::L3, g->l[2]).set(Var::L4, g->l[3]);
  }
  return out;
}

inline CFunction expression_function(expr::Expr e) {
  return [e = std::move(e)](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
    return expr::eval(e, bindings_for(h, a, b));
  };
}

/// λ-only weight; settings variables are rejected since μ must not depend
/// on them.
inline LambdaWeight expression_weight(expr::Expr e) {
  if (e.uses_settings()) {
    throw InvalidArgument("a lambda weight may only use l1..l4, not " + e.to_string());
  }
  return [e = std::move(e)](const HiddenSample& h) {
    const double w = expr::eval(e, bindings_for(h, UnitVec{}, UnitVec{}));
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("lambda weight evaluated to " + std::to_string(w));
    }
    return w;
  };
}

/// Base measure for user functions: u, v uniform on the sphere and l1..l4
/// uniform on [-1, 1], independent of the settings.
inline Sampler generic_sampler() {
  return [](const UnitVec&, const UnitVec&, Rng& rng) -> HiddenSample {
    hidden::Generic g;
    g.u = sample_unit_sphere(rng);
    g.v = sample_unit_sphere(rng);
    for (double& l : g.l) l = rng.uniform(-1.0, 1.0);
    return g;
  };
}

// ---------------------------------------------------------------------------
// Flat records for CSV/JSON emission.

struct AdmissibilityRecord {
  std::string rule;
  bool passed = true;
  double value = 0.0;
  std::string witness;
};

inline std::vector<AdmissibilityRecord> admissibility_records(const AdmissibilityReport& r) {
  std::vector<AdmissibilityRecord> out;
  for (Rule rule : {Rule::Exponents, Rule::Positivity, Rule::ZeroMean, Rule::BoundaryValue, Rule::Evaluation}) {
    AdmissibilityRecord rec{std::string(name(rule)), true, 0.0, ""};
    for (const RuleFailure& f : r.failures) {
      if (f.rule != rule) continue;
      rec.passed = false;
      rec.value = f.value;
      rec.witness = f.what + (f.witness ? "; " + f.witness->describe() : "");
    }
    if (rule == Rule::Positivity && rec.passed && std::isfinite(r.min_probability)) rec.value = r.min_probability;
    if (rule == Rule::ZeroMean && rec.passed) rec.value = r.max_mean_sigma;
    out.push_back(std::move(rec));
  }
  return out;
}

struct FrobeniusRecord {
  std::string side;
  double estimate = 0.0;
  double std_error = 0.0;
  double mean_fit_error = 0.0;
  double mean_rms_residual = 0.0;
  std::size_t fits = 0;
  std::size_t rejected = 0;
  std::size_t zero_points = 0;
  std::size_t points = 0;
};

inline std::vector<FrobeniusRecord> frobenius_records(const FrobeniusEstimate& e) {
  auto rec = [](std::string side, const FrobeniusSide& s) {
    return FrobeniusRecord{std::move(side), s.s, s.std_error, s.mean_fit_error, s.mean_rms_residual,
                           s.fits, s.rejected, s.zero_points, s.points};
  };
  return {rec("s_minus", e.minus), rec("s_plus", e.plus)};
}

}  // namespace hvs

#endif  // HVSINGLET_ADMISSIBILITY_HPP_
