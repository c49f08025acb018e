#pragma once

// Two-component hypercomplex numbers q = a + b*k with k^2 = -1 (complex),
// k^2 = +1 (split-complex) or k^2 = 0 (dual), and the per-dimension
// three-way products used by the scorer.

#include <array>
#include <cstdint>
#include <string_view>

namespace hge {

enum class Geometry : std::uint8_t { Complex = 0, SplitComplex = 1, Dual = 2 };

inline constexpr std::array<Geometry, 3> kAllGeometries = {
    Geometry::Complex, Geometry::SplitComplex, Geometry::Dual};

/// Square of the imaginary unit: -1, +1 or 0.
constexpr double unit_square(Geometry g) noexcept {
  switch (g) {
    case Geometry::Complex: return -1.0;
    case Geometry::SplitComplex: return 1.0;
    case Geometry::Dual: return 0.0;
  }
  return 0.0;
}

constexpr std::string_view geometry_name(Geometry g) noexcept {
  switch (g) {
    case Geometry::Complex: return "complex";
    case Geometry::SplitComplex: return "split";
    case Geometry::Dual: return "dual";
  }
  return "?";
}

struct HNum {
  double a = 0.0;  // real part
  double b = 0.0;  // imaginary / split / dual part

  constexpr bool operator==(const HNum&) const = default;

  constexpr HNum operator+(HNum o) const noexcept { return {a + o.a, b + o.b}; }
  constexpr HNum operator-(HNum o) const noexcept { return {a - o.a, b - o.b}; }
  constexpr HNum operator*(double k) const noexcept { return {a * k, b * k}; }
};

// (a + bk)(c + dk) = (ac + k^2 bd) + (ad + bc)k
constexpr HNum hmul(Geometry g, HNum x, HNum y) noexcept {
  return {x.a * y.a + unit_square(g) * x.b * y.b, x.a * y.b + x.b * y.a};
}

constexpr HNum conj(HNum x) noexcept { return {x.a, -x.b}; }

/// <s, p, o> = (s * p) * o. The object is not conjugated here; callers that
/// want the conjugated form pass conj(o).
constexpr HNum trilinear(Geometry g, HNum s, HNum p, HNum o) noexcept {
  return hmul(g, hmul(g, s, p), o);
}

/// Partial derivatives of one output component of trilinear() with respect
/// to the six scalar inputs.
struct TrilinearPartials {
  HNum ds;  // (d/ds_a, d/ds_b)
  HNum dp;
  HNum dopart;
};

struct TrilinearGrad {
  TrilinearPartials real;
  TrilinearPartials imag;
};

constexpr TrilinearGrad trilinear_grad(Geometry g, HNum s, HNum p, HNum o) noexcept {
  const double k = unit_square(g);
  // real = s_a p_a o_a + k s_b p_b o_a + k s_a p_b o_b + k s_b p_a o_b
  // imag = s_a p_a o_b + k s_b p_b o_b + s_a p_b o_a + s_b p_a o_a
  TrilinearGrad out{};
  out.real.ds = {p.a * o.a + k * p.b * o.b, k * p.b * o.a + k * p.a * o.b};
  out.real.dp = {s.a * o.a + k * s.b * o.b, k * s.b * o.a + k * s.a * o.b};
  out.real.dopart = {s.a * p.a + k * s.b * p.b, k * s.a * p.b + k * s.b * p.a};
  out.imag.ds = {p.a * o.b + p.b * o.a, k * p.b * o.b + p.a * o.a};
  out.imag.dp = {s.a * o.b + s.b * o.a, k * s.b * o.b + s.a * o.a};
  out.imag.dopart = {s.a * p.b + s.b * p.a, s.a * p.a + k * s.b * p.b};
  return out;
}

}  // namespace hge
