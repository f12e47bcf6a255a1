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

#ifndef HVSINGLET_ZOO_HPP_
#define HVSINGLET_ZOO_HPP_

// The catalogue of hidden-variable models that reproduce the singlet.
//
// Sign convention: sgn(t) = +1 for t >= 0, for every model.
//
// Toner–Bacon: the outcome-flip is carried by Bob's factor,
//   P = ¼ [1 + σ sgn(u·a)] {1 − τ sgn[u·b + c v·b]},  c = sgn(u·a) sgn(v·a),
// which gives the singlet correlator −a·b. With "+τ" the average is +a·b.

#include <array>
#include <cmath>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hvsinglet/errors.hpp"
#include "hvsinglet/geometry.hpp"
#include "hvsinglet/hidden.hpp"
#include "hvsinglet/model.hpp"
#include "hvsinglet/quantum.hpp"

namespace hvs {

/// Popescu–Rohrlich box: o_A is a fair coin; o_B = −o_A iff x = y = −1,
/// otherwise o_B = o_A. Satisfies 4 − 2|o_A + o_B| = (1 − x)(1 − y).
inline std::pair<Outcome, Outcome> pr_box(Outcome x, Outcome y, Rng& rng) {
  const Outcome oa = rng.sign() > 0 ? Outcome::Plus : Outcome::Minus;
  const bool anti = x == Outcome::Minus && y == Outcome::Minus;
  return {oa, anti ? -oa : oa};
}

/// The bit Alice sends in the Toner–Bacon protocol.
inline Outcome toner_bacon_bit(const UnitVec& u, const UnitVec& v, const UnitVec& a) {
  return sgn(dot(u, a)) * sgn(dot(v, a));
}

struct CerfInputs {
  Outcome x = Outcome::Plus;
  Outcome y = Outcome::Plus;
};

/// x = sgn(u·a) sgn(v·a), y = sgn(n₊·b) sgn(n₋·b), n± = u ± v.
inline CerfInputs cerf_inputs(const UnitVec& u, const UnitVec& v, const UnitVec& a, const UnitVec& b) {
  const Vec3 np = u.vec() + v.vec();
  const Vec3 nm = u.vec() - v.vec();
  if (norm(np) < 1e-12 || norm(nm) < 1e-12) {
    throw DegenerateInput("Cerf inputs undefined for v = ±u");
  }
  return {sgn(dot(u, a)) * sgn(dot(v, a)), sgn(dot(np, b.vec())) * sgn(dot(nm, b.vec()))};
}

/// PR-box correlation (1 + x + y − xy)/2: −1 iff x = y = −1, else +1.
constexpr double pr_product(Outcome x, Outcome y) {
  return (1.0 + value(x) + value(y) - value(x) * value(y)) / 2.0;
}

/// λ-conditioned correlator of the Cerf et al. model.
inline double cerf_D(const UnitVec& u, const UnitVec& v, Outcome x, Outcome y, const UnitVec& a,
                     const UnitVec& b) {
  const Vec3 np = u.vec() + v.vec();
  return -pr_product(x, y) * value(sgn(dot(u, a))) * value(sgn(dot(np, b.vec())));
}

/// C = D + a·b for the reduced Cerf model:
///   C = a·b − sgn(u·a) sgn(n₊·b) (1 + x + y − xy)/2.
/// Vanishes identically at b = ±a.
inline double cerf_C(const UnitVec& u, const UnitVec& v, const UnitVec& a, const UnitVec& b) {
  const CerfInputs in = cerf_inputs(u, v, a, b);
  return dot(a, b) + cerf_D(u, v, in.x, in.y, a, b);
}

/// Table with P = (1 + στ D)/4 (trivial marginals).
inline JointTable correlated_table(double d) {
  JointTable t;
  for (Outcome s : kOutcomes) {
    for (Outcome r : kOutcomes) t.at(s, r) = (1.0 + value(s * r) * d) / 4.0;
  }
  return t;
}

/// Table P = M_A(σ) M_B(τ) from the "+1" marginals.
inline JointTable product_table(double ma_plus, double mb_plus) {
  JointTable t;
  for (Outcome s : kOutcomes) {
    const double ma = s == Outcome::Plus ? ma_plus : 1.0 - ma_plus;
    for (Outcome r : kOutcomes) {
      const double mb = r == Outcome::Plus ? mb_plus : 1.0 - mb_plus;
      t.at(s, r) = ma * mb;
    }
  }
  return t;
}

namespace detail {

inline void warn_hall_degenerate() {
  static std::once_flag once;
  std::call_once(once, [] {
    std::clog << "hvsinglet: warning: Hall sampler at |a.b| = 1; b perturbed by 1e-9 along a "
                 "fixed tangent\n";
  });
}

}  // namespace detail

/// Draws u from Hall's density (1 − f)/(8 arccos f), v = −u, where
/// f = sgn(u·a) sgn(v·b) a·b.
///
/// The density is constant on the two regions s = sgn(u·a) sgn(u·b) = ±1,
/// with masses (1 ± a·b)/2. A region is drawn with that probability and u
/// is then drawn uniformly inside it by rejection from the sphere.
inline hidden::Hall hall_sample(const UnitVec& a, const UnitVec& b, Rng& rng) {
  UnitVec bb = b;
  if (std::abs(dot(a, b)) >= 1.0 - 1e-12) {
    detail::warn_hall_degenerate();
    bb = UnitVec::from(b.vec() + 1e-9 * any_orthogonal(a).vec());
  }
  const double c = dot(a, bb);
  const Outcome region = rng.uniform() < (1.0 + c) / 2.0 ? Outcome::Plus : Outcome::Minus;
  for (;;) {
    const UnitVec u = sample_unit_sphere(rng);
    if (sgn(dot(u, a)) * sgn(dot(u, bb)) == region) return {u};
  }
}

/// Weights of the generalized Di Lorenzo atoms n = a, −a, b, −b.
/// Trivial marginals require w_a = w_{−a} and w_b = w_{−b}; the constructor
/// enforces that along with w ≥ 0 and Σw = 1.
class DiLorenzoWeights {
 public:
  DiLorenzoWeights(double w_a, double w_minus_a, double w_b, double w_minus_b)
      : w_{w_a, w_minus_a, w_b, w_minus_b} {
    for (double w : w_) {
      if (!(w >= 0.0)) throw InvalidParams("dilorenzo weights must be non-negative");
    }
    if (std::abs(w_a + w_minus_a + w_b + w_minus_b - 1.0) > 1e-12) {
      throw InvalidParams("dilorenzo weights must sum to 1");
    }
    if (std::abs(w_a - w_minus_a) > 1e-12 || std::abs(w_b - w_minus_b) > 1e-12) {
      throw InvalidParams("dilorenzo weights must be paired (w_a = w_-a, w_b = w_-b) to keep "
                          "the marginals at 1/2");
    }
  }

  static DiLorenzoWeights symmetric() { return {0.25, 0.25, 0.25, 0.25}; }
  /// w_a = w_{−a} = wa and w_b = w_{−b} = wb, with 2wa + 2wb = 1.
  static DiLorenzoWeights paired(double wa, double wb) { return {wa, wa, wb, wb}; }

  double w_a() const { return w_[0]; }
  double w_minus_a() const { return w_[1]; }
  double w_b() const { return w_[2]; }
  double w_minus_b() const { return w_[3]; }

 private:
  std::array<double, 4> w_;
};

inline std::vector<Atom> brans_atoms(const UnitVec& a, const UnitVec& b) {
  const double c = dot(a, b);
  std::vector<Atom> out;
  out.reserve(4);
  for (Outcome al : kOutcomes) {
    for (Outcome be : kOutcomes) {
      out.push_back({hidden::Brans{al, be, a, b}, std::max(0.0, (1.0 - value(al * be) * c) / 4.0)});
    }
  }
  return out;
}

inline std::vector<Atom> dilorenzo_atoms(const UnitVec& a, const UnitVec& b,
                                         const DiLorenzoWeights& w) {
  return {{hidden::DiLorenzo{a}, w.w_a()},
          {hidden::DiLorenzo{-a}, w.w_minus_a()},
          {hidden::DiLorenzo{b}, w.w_b()},
          {hidden::DiLorenzo{-b}, w.w_minus_b()}};
}

/// Unit vector orthogonal to `base` in the plane of (base, other); a fixed
/// orthogonal direction when the two are parallel.
inline UnitVec in_plane_orthogonal(const UnitVec& base, const UnitVec& other) {
  const Vec3 perp = other.vec() - dot(other, base) * base.vec();
  return norm(perp) > 1e-9 ? UnitVec::from(perp) : any_orthogonal(base);
}

/// Concrete μ for the Gröblacher et al. kernel:
///   (1−w)/4 on each (u, v) = (n, −n), n ∈ {±a, ±b},
///   w/2 on each of (e_a, e_b) and (−e_a, −e_b), e_a ⊥ a, e_b ⊥ b.
/// Both families lie in the support |u·a ± v·b| ≤ 1 ∓ a·b and the first
/// moments of u and v vanish. The equatorial atoms carry the table
/// (1 − στ a·b)/4, which does not factorize, so Reducibility fails on the support.
inline std::vector<Atom> groblacher_atoms(const UnitVec& a, const UnitVec& b, double w) {
  const UnitVec ea = in_plane_orthogonal(a, b);
  const UnitVec eb = in_plane_orthogonal(b, a);
  const double q = (1.0 - w) / 4.0;
  return {{hidden::Groblacher{a, -a}, q},   {hidden::Groblacher{-a, a}, q},
          {hidden::Groblacher{b, -b}, q},   {hidden::Groblacher{-b, b}, q},
          {hidden::Groblacher{ea, eb}, w / 2}, {hidden::Groblacher{-ea, -eb}, w / 2}};
}

struct GroblacherCheck {
  double max_support_excess = 0.0;  // max(|u·a ± v·b| − (1 ∓ a·b)), ≤ 0 when inside
  double max_first_moment = 0.0;    // |Σ w u| and |Σ w v|, componentwise max
  double weight_sum_error = 0.0;
};

inline GroblacherCheck check_groblacher_atoms(const std::vector<Atom>& atoms, const UnitVec& a,
                                              const UnitVec& b) {
  GroblacherCheck r;
  r.max_support_excess = -1.0;
  const double c = dot(a, b);
  Vec3 mu{}, mv{};
  double wsum = 0.0;
  for (const Atom& at : atoms) {
    const auto& g = std::get<hidden::Groblacher>(at.sample);
    const double ua = dot(g.u, a), vb = dot(g.v, b);
    r.max_support_excess = std::max({r.max_support_excess, std::abs(ua + vb) - (1.0 - c),
                                     std::abs(ua - vb) - (1.0 + c)});
    mu = mu + at.weight * g.u.vec();
    mv = mv + at.weight * g.v.vec();
    wsum += at.weight;
  }
  r.max_first_moment = std::max({std::abs(mu.x), std::abs(mu.y), std::abs(mu.z), std::abs(mv.x),
                                 std::abs(mv.y), std::abs(mv.z)});
  r.weight_sum_error = std::abs(wsum - 1.0);
  return r;
}

struct ModelParams {
  DiLorenzoWeights dilorenzo = DiLorenzoWeights::symmetric();
  /// Mass of the equatorial atom pair of the Gröblacher instance, in (0, 1].
  double groblacher_equatorial_weight = 0.5;
};

inline constexpr std::array<std::pair<ModelKind, std::string_view>, 7> kModelNames = {{
    {ModelKind::Brans, "brans"},
    {ModelKind::TonerBacon, "toner-bacon"},
    {ModelKind::CerfFull, "cerf-full"},
    {ModelKind::CerfReduced, "cerf-reduced"},
    {ModelKind::Groblacher, "groblacher"},
    {ModelKind::Hall, "hall"},
    {ModelKind::DiLorenzo, "dilorenzo"},
}};

inline constexpr std::string_view canonical_name(ModelKind k) {
  for (const auto& [kind, n] : kModelNames) {
    if (kind == k) return n;
  }
  return "quantum";
}

inline std::optional<ModelKind> model_kind_from_name(std::string_view s) {
  for (const auto& [kind, n] : kModelNames) {
    if (n == s) return kind;
  }
  return std::nullopt;
}

/// Declared classification of each model (see README for the table).
inline VerdictSet declared_profile(ModelKind k) {
  constexpr Verdict S = Verdict::Satisfied, V = Verdict::Violated, U = Verdict::Undetermined;
  //                          UC SI_A SI_B RC MA MB
  auto make = [](Verdict uc, Verdict sa, Verdict sb, Verdict rc, Verdict ma, Verdict mb) {
    return VerdictSet{{uc, sa, sb, rc, ma, mb}};
  };
  switch (k) {
    case ModelKind::Brans: return make(V, S, S, S, V, V);
    case ModelKind::TonerBacon: return make(S, S, V, S, V, V);
    case ModelKind::CerfFull: return make(V, S, S, V, V, V);
    case ModelKind::CerfReduced: return make(S, S, S, V, V, V);
    case ModelKind::Groblacher: return make(V, S, S, V, S, S);
    case ModelKind::Hall: return make(V, S, S, S, V, V);
    case ModelKind::DiLorenzo: return make(V, S, S, S, S, S);
    case ModelKind::Quantum: return make(S, S, S, V, U, U);
  }
  return {};
}

namespace detail {

template <class T>
const T& as(const HiddenSample& h, std::string_view model) {
  if (const T* p = std::get_if<T>(&h)) return *p;
  throw InvalidArgument(std::string(model) + ": hidden sample of the wrong kind: " + describe(h));
}

inline bool near_direction(const UnitVec& a, Vec3 d) {
  const double n = norm(d);
  if (n < 1e-12) return false;
  const Vec3 dn = (1.0 / n) * d;
  return norm(a.vec() - dn) < 1e-6 || norm(a.vec() + dn) < 1e-6;
}

inline bool cerf_exceptional(const UnitVec& u, const UnitVec& v, const UnitVec& a) {
  return near_direction(a, u.vec()) || near_direction(a, v.vec()) ||
         near_direction(a, u.vec() + v.vec()) || near_direction(a, u.vec() - v.vec());
}

inline std::pair<UnitVec, UnitVec> sample_cerf_pair(Rng& rng) {
  for (;;) {
    const UnitVec u = sample_unit_sphere(rng);
    const UnitVec v = sample_unit_sphere(rng);
    if (norm(u.vec() + v.vec()) >= 1e-12 && norm(u.vec() - v.vec()) >= 1e-12) return {u, v};
  }
}

}  // namespace detail

/// Builds a catalogue model.
inline Model make_model(ModelKind kind, const ModelParams& params = {}) {
  Model m;
  m.kind = kind;
  m.name = std::string(canonical_name(kind));
  m.declared_profile = declared_profile(kind);

  switch (kind) {
    case ModelKind::Brans: {
      m.atoms = brans_atoms;
      m.sampler = [](const UnitVec& a, const UnitVec& b, Rng& rng) {
        return pick_atom(brans_atoms(a, b), rng).sample;
      };
      m.kernel = [](const HiddenSample& h, const UnitVec&, const UnitVec&) {
        const auto& s = detail::as<hidden::Brans>(h, "brans");
        return product_table((1.0 + value(s.alpha)) / 2.0, (1.0 + value(s.beta)) / 2.0);
      };
      break;
    }
    case ModelKind::TonerBacon: {
      m.sampler = [](const UnitVec&, const UnitVec&, Rng& rng) -> HiddenSample {
        const UnitVec u = sample_unit_sphere(rng);
        return hidden::TonerBacon{u, sample_unit_sphere(rng)};
      };
      m.kernel = [](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
        const auto& s = detail::as<hidden::TonerBacon>(h, "toner-bacon");
        const double c = value(toner_bacon_bit(s.u, s.v, a));
        const double ma = (1.0 + value(sgn(dot(s.u, a)))) / 2.0;
        const double mb = (1.0 - value(sgn(dot(s.u, b) + c * dot(s.v, b)))) / 2.0;
        return product_table(ma, mb);
      };
      break;
    }
    case ModelKind::CerfFull: {
      m.sampler = [](const UnitVec& a, const UnitVec& b, Rng& rng) -> HiddenSample {
        const auto [u, v] = detail::sample_cerf_pair(rng);
        const CerfInputs in = cerf_inputs(u, v, a, b);
        return hidden::CerfFull{in.x, in.y, u, v};
      };
      m.kernel = [](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
        const auto& s = detail::as<hidden::CerfFull>(h, "cerf-full");
        return correlated_table(cerf_D(s.u, s.v, s.x, s.y, a, b));
      };
      m.exceptional = [](const HiddenSample& h, const UnitVec& a) {
        const auto& s = detail::as<hidden::CerfFull>(h, "cerf-full");
        return detail::cerf_exceptional(s.u, s.v, a);
      };
      break;
    }
    case ModelKind::CerfReduced: {
      m.sampler = [](const UnitVec&, const UnitVec&, Rng& rng) -> HiddenSample {
        const auto [u, v] = detail::sample_cerf_pair(rng);
        return hidden::CerfReduced{u, v};
      };
      m.kernel = [](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
        const auto& s = detail::as<hidden::CerfReduced>(h, "cerf-reduced");
        const CerfInputs in = cerf_inputs(s.u, s.v, a, b);
        return correlated_table(cerf_D(s.u, s.v, in.x, in.y, a, b));
      };
      m.exceptional = [](const HiddenSample& h, const UnitVec& a) {
        const auto& s = detail::as<hidden::CerfReduced>(h, "cerf-reduced");
        return detail::cerf_exceptional(s.u, s.v, a);
      };
      break;
    }
    case ModelKind::Groblacher: {
      const double w = params.groblacher_equatorial_weight;
      if (!(w > 0.0 && w <= 1.0)) {
        throw InvalidParams("groblacher equatorial weight must lie in (0, 1]");
      }
      // Construction-time check of the support and zero-moment conditions.
      Rng probe(derive_seed(0x6772'6f62ULL, 0));
      for (int i = 0; i < 16; ++i) {
        const UnitVec a = sample_unit_sphere(probe), b = sample_unit_sphere(probe);
        const GroblacherCheck chk = check_groblacher_atoms(groblacher_atoms(a, b, w), a, b);
        if (chk.max_support_excess > 1e-12 || chk.max_first_moment > 1e-12 ||
            chk.weight_sum_error > 1e-12) {
          throw InvalidParams("groblacher atom set violates its support or moment constraints");
        }
      }
      m.atoms = [w](const UnitVec& a, const UnitVec& b) { return groblacher_atoms(a, b, w); };
      m.sampler = [w](const UnitVec& a, const UnitVec& b, Rng& rng) {
        return pick_atom(groblacher_atoms(a, b, w), rng).sample;
      };
      m.kernel = [](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
        const auto& s = detail::as<hidden::Groblacher>(h, "groblacher");
        const double ua = dot(s.u, a), vb = dot(s.v, b), c = dot(a, b);
        JointTable t;
        for (Outcome sg : kOutcomes) {
          for (Outcome tg : kOutcomes) {
            t.at(sg, tg) = (1.0 + value(sg) * ua + value(tg) * vb - value(sg * tg) * c) / 4.0;
          }
        }
        return t;
      };
      break;
    }
    case ModelKind::Hall: {
      m.sampler = [](const UnitVec& a, const UnitVec& b, Rng& rng) -> HiddenSample {
        return hall_sample(a, b, rng);
      };
      m.kernel = [](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
        const auto& s = detail::as<hidden::Hall>(h, "hall");
        const UnitVec v = -s.u;
        return product_table((1.0 + value(sgn(dot(s.u, a)))) / 2.0,
                             (1.0 + value(sgn(dot(v, b)))) / 2.0);
      };
      break;
    }
    case ModelKind::DiLorenzo: {
      const DiLorenzoWeights w = params.dilorenzo;
      m.atoms = [w](const UnitVec& a, const UnitVec& b) { return dilorenzo_atoms(a, b, w); };
      m.sampler = [w](const UnitVec& a, const UnitVec& b, Rng& rng) {
        return pick_atom(dilorenzo_atoms(a, b, w), rng).sample;
      };
      m.kernel = [](const HiddenSample& h, const UnitVec& a, const UnitVec& b) {
        const auto& s = detail::as<hidden::DiLorenzo>(h, "dilorenzo");
        const UnitVec u = s.n, v = -s.n;
        return product_table((1.0 + dot(u, a)) / 2.0, (1.0 + dot(v, b)) / 2.0);
      };
      break;
    }
    case ModelKind::Quantum: {
      m.atoms = [](const UnitVec&, const UnitVec&) { return std::vector<Atom>{{hidden::None{}, 1.0}}; };
      m.sampler = [](const UnitVec&, const UnitVec&, Rng&) -> HiddenSample { return hidden::None{}; };
      m.kernel = [](const HiddenSample&, const UnitVec& a, const UnitVec& b) { return qm_joint(a, b); };
      break;
    }
  }
  return m;
}

/// The quantum prediction viewed as a model with a single trivial λ.
inline Model make_quantum_model() { return make_model(ModelKind::Quantum); }

/// Parses "brans", "toner-bacon", ..., "dilorenzo" or "dilorenzo:wa,wb"
/// (paired weights: w_a = w_{−a} = wa, w_b = w_{−b} = wb).
inline Model model_from_spec(std::string_view spec, ModelParams params = {}) {
  std::string_view base = spec;
  std::string_view args;
  if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
    base = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  const auto kind = model_kind_from_name(base);
  if (!kind) throw InvalidParams("unknown model '" + std::string(spec) + "'");
  if (!args.empty()) {
    if (*kind != ModelKind::DiLorenzo) {
      throw InvalidParams("model '" + std::string(base) + "' takes no parameters");
    }
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) throw InvalidParams("expected dilorenzo:wa,wb");
    try {
      std::size_t used_a = 0, used_b = 0;
      const std::string sa(args.substr(0, comma)), sb(args.substr(comma + 1));
      const double wa = std::stod(sa, &used_a);
      const double wb = std::stod(sb, &used_b);
      if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument("trailing");
      params.dilorenzo = DiLorenzoWeights::paired(wa, wb);
    } catch (const std::logic_error&) {
      throw InvalidParams("malformed dilorenzo weights '" + std::string(args) + "'");
    }
  }
  Model m = make_model(*kind, params);
  m.name = std::string(spec);
  return m;
}

/// All seven catalogue instances with default parameters.
inline std::vector<Model> all_models() {
  std::vector<Model> out;
  for (const auto& [kind, n] : kModelNames) out.push_back(make_model(kind));
  return out;
}

}  // namespace hvs

#endif  // HVSINGLET_ZOO_HPP_
