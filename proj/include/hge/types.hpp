#pragma once

#include <compare>
#include <cstdint>

namespace hge {

using EntityId = std::int32_t;
using RelationId = std::int32_t;
using TimeId = std::int32_t;

/// A fact (s, p, o) anchored at a single time point id.
struct Quadruple {
  EntityId s = 0;
  RelationId p = 0;
  EntityId o = 0;
  TimeId t = 0;

  constexpr auto operator<=>(const Quadruple&) const = default;
};

}  // namespace hge
