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

#ifndef HVSINGLET_HIDDEN_HPP_
#define HVSINGLET_HIDDEN_HPP_

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hvsinglet/geometry.hpp"
#include "hvsinglet/quantum.hpp"

namespace hvs {

// Hidden-variable records, one per model. Brans' j, k indices are summed
// out analytically and have no runtime representation.
namespace hidden {

struct Brans {
  Outcome alpha = Outcome::Plus;
  Outcome beta = Outcome::Plus;
  UnitVec u, v;
};

struct TonerBacon {
  UnitVec u, v;
};

struct CerfFull {
  Outcome x = Outcome::Plus;
  Outcome y = Outcome::Plus;
  UnitVec u, v;
};

struct CerfReduced {
  UnitVec u, v;
};

struct Groblacher {
  UnitVec u, v;
};

/// v = -u implied.
struct Hall {
  UnitVec u;
};

/// u = n and v = -n implied.
struct DiLorenzo {
  UnitVec n;
};

/// Generic record for user-supplied functions: two unit vectors and four
/// scalars l1..l4 in [-1, 1].
struct Generic {
  UnitVec u, v;
  std::array<double, 4> l{};
};

/// No hidden variable at all (the quantum prediction as a one-point model).
struct None {};

}  // namespace hidden

using HiddenSample = std::variant<hidden::Brans, hidden::TonerBacon, hidden::CerfFull,
                                  hidden::CerfReduced, hidden::Groblacher, hidden::Hall,
                                  hidden::DiLorenzo, hidden::Generic, hidden::None>;

/// The vector hidden variable u, if the record has one (implied or explicit).
inline std::optional<UnitVec> u_of(const HiddenSample& h) {
  return std::visit(
      [](const auto& s) -> std::optional<UnitVec> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, hidden::DiLorenzo>) {
          return s.n;
        } else if constexpr (std::is_same_v<T, hidden::None>) {
          return std::nullopt;
        } else {
          return s.u;
        }
      },
      h);
}

/// The vector hidden variable v, if the record has one (implied or explicit).
inline std::optional<UnitVec> v_of(const HiddenSample& h) {
  return std::visit(
      [](const auto& s) -> std::optional<UnitVec> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, hidden::DiLorenzo>) {
          return -s.n;
        } else if constexpr (std::is_same_v<T, hidden::Hall>) {
          return -s.u;
        } else if constexpr (std::is_same_v<T, hidden::None>) {
          return std::nullopt;
        } else {
          return s.v;
        }
      },
      h);
}

/// Independently sampled vector fields (implied ones excluded).
inline std::vector<UnitVec> free_vectors(const HiddenSample& h) {
  return std::visit(
      [](const auto& s) -> std::vector<UnitVec> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, hidden::DiLorenzo>) {
          return {s.n};
        } else if constexpr (std::is_same_v<T, hidden::Hall>) {
          return {s.u};
        } else if constexpr (std::is_same_v<T, hidden::None>) {
          return {};
        } else {
          return {s.u, s.v};
        }
      },
      h);
}

/// Binary fields (α, β or x, y), in declaration order.
inline std::vector<Outcome> binary_fields(const HiddenSample& h) {
  if (const auto* b = std::get_if<hidden::Brans>(&h)) return {b->alpha, b->beta};
  if (const auto* c = std::get_if<hidden::CerfFull>(&h)) return {c->x, c->y};
  return {};
}

inline bool approx_equal(const UnitVec& p, const UnitVec& q, double tol) {
  return std::abs(p.x() - q.x()) <= tol && std::abs(p.y() - q.y()) <= tol &&
         std::abs(p.z() - q.z()) <= tol;
}

/// Same variant, binary fields equal, vector fields equal within tol.
inline bool approx_equal(const HiddenSample& p, const HiddenSample& q, double tol) {
  if (p.index() != q.index()) return false;
  if (binary_fields(p) != binary_fields(q)) return false;
  const auto vp = free_vectors(p), vq = free_vectors(q);
  for (std::size_t i = 0; i < vp.size(); ++i) {
    if (!approx_equal(vp[i], vq[i], tol)) return false;
  }
  if (const auto* g = std::get_if<hidden::Generic>(&p)) {
    const auto& h = std::get<hidden::Generic>(q);
    for (std::size_t i = 0; i < 4; ++i) {
      if (std::abs(g->l[i] - h.l[i]) > tol) return false;
    }
  }
  return true;
}

inline std::string describe(const HiddenSample& h) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, hidden::Brans>) {
          return "Brans{alpha=" + std::to_string(value(s.alpha)) +
                 ",beta=" + std::to_string(value(s.beta)) + ",u=" + to_string(s.u) +
                 ",v=" + to_string(s.v) + "}";
        } else if constexpr (std::is_same_v<T, hidden::TonerBacon>) {
          return "TonerBacon{u=" + to_string(s.u) + ",v=" + to_string(s.v) + "}";
        } else if constexpr (std::is_same_v<T, hidden::CerfFull>) {
          return "CerfFull{x=" + std::to_string(value(s.x)) + ",y=" + std::to_string(value(s.y)) +
                 ",u=" + to_string(s.u) + ",v=" + to_string(s.v) + "}";
        } else if constexpr (std::is_same_v<T, hidden::CerfReduced>) {
          return "CerfReduced{u=" + to_string(s.u) + ",v=" + to_string(s.v) + "}";
        } else if constexpr (std::is_same_v<T, hidden::Groblacher>) {
          return "Groblacher{u=" + to_string(s.u) + ",v=" + to_string(s.v) + "}";
        } else if constexpr (std::is_same_v<T, hidden::Hall>) {
          return "Hall{u=" + to_string(s.u) + "}";
        } else if constexpr (std::is_same_v<T, hidden::DiLorenzo>) {
          return "DiLorenzo{n=" + to_string(s.n) + "}";
        } else if constexpr (std::is_same_v<T, hidden::Generic>) {
          char buf[160];
          std::snprintf(buf, sizeof buf, ",l=(%.17g,%.17g,%.17g,%.17g)}", s.l[0], s.l[1], s.l[2],
                        s.l[3]);
          return "Generic{u=" + to_string(s.u) + ",v=" + to_string(s.v) + buf;
        } else {
          return "None{}";
        }
      },
      h);
}

}  // namespace hvs

#endif  // HVSINGLET_HIDDEN_HPP_
