#pragma once

// Constructive checks of the symmetry, inverse, evolution and temporary
// propositions, evaluated through the model's own score().
//
// Every construction pins the attention weights w to zero (both relational
// branches weigh 0.5) and uses tau = (1, 0), the identity of the complex
// product, unless the case needs a second time point. Setting p_c = p_s = h
// then makes h the hybrid relation exactly.
//
// The proofs score against the conjugated object. Each case is evaluated in
// that form (which decides pass / fail) and in the unconjugated form, which is
// reported alongside.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hge/model.hpp"

namespace hge {

enum class Expectation : std::uint8_t {
  Equal,    // residual = |lhs - rhs|, must be <= 1e-12
  Unequal,  // counterexample: residual = |lhs - rhs|, must be > 0.1
  Gap,      // temporary: residual = max(0, 0.5 - (lhs - rhs)), must be <= 1e-12
  NoGap,    // static control: residual = max(0, 0.5 - (lhs - rhs)), must be > 0.1
};

struct PropositionCase {
  std::string name;
  int proposition = 0;
  Variant variant = Variant::SingleSplit;
  std::size_t dim = 1;
  Expectation expect = Expectation::Equal;
  ModelState model;  // built with conjugate_object = true
  Quadruple lhs{};
  Quadruple rhs{};
};

struct CaseOutcome {
  std::string name;
  int proposition = 0;
  Variant variant = Variant::SingleSplit;
  std::size_t dim = 1;
  Expectation expect = Expectation::Equal;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;          // conjugated-object form
  double residual_printed = 0.0;  // same embeddings, unconjugated form
  bool pass = false;
};

inline constexpr double kEqualityTolerance = 1e-12;
inline constexpr double kCounterexampleMargin = 0.1;
inline constexpr double kTemporaryGap = 0.5;

namespace detail {

inline double case_residual(Expectation e, double lhs, double rhs) {
  switch (e) {
    case Expectation::Equal:
    case Expectation::Unequal: return std::abs(lhs - rhs);
    case Expectation::Gap:
    case Expectation::NoGap: return std::max(0.0, kTemporaryGap - (lhs - rhs));
  }
  return 0.0;
}

inline bool case_passes(Expectation e, double residual) {
  return (e == Expectation::Equal || e == Expectation::Gap) ? residual <= kEqualityTolerance
                                                            : residual > kCounterexampleMargin;
}

// One grounded atom: the per-dimension values a construction assigns.
struct Atom {
  HNum s, o;          // entity 0 and entity 1
  HNum ps1, pc1;      // relation 0
  HNum ps2, pc2;      // relation 1
  HNum tau1{1, 0}, tau2{1, 0}, tau3{1, 0};  // time 0, 1, 2
};

// Block-diagonal assembly: atom k fills dimension k of every row.
inline ModelState assemble(Variant v, const std::vector<Atom>& atoms) {
  ModelConfig cfg;
  cfg.dim = atoms.size();
  cfg.entities = 2;
  cfg.relations = 2;
  cfg.times = 3;
  cfg.variant = v;
  cfg.conjugate_object = true;
  ModelState m(cfg);
  const std::size_t d = cfg.dim;
  auto put = [d](EmbeddingTable& t, std::size_t row, std::size_t k, HNum x) {
    t.row(row)[k] = x.a;
    t.row(row)[d + k] = x.b;
  };
  for (std::size_t k = 0; k < d; ++k) {
    const Atom& a = atoms[k];
    put(m.entity, 0, k, a.s);
    put(m.entity, 1, k, a.o);
    put(m.rel_static, 0, k, a.ps1);
    put(m.rel_dynamic, 0, k, a.pc1);
    put(m.rel_static, 1, k, a.ps2);
    put(m.rel_dynamic, 1, k, a.pc2);
    put(m.time, 0, k, a.tau1);
    put(m.time, 1, k, a.tau2);
    put(m.time, 2, k, a.tau3);
  }
  return m;
}

using AtomMaker = std::function<Atom(double, double)>;

// Two parameter draws per construction; the second fills dimension 2.
inline std::vector<Atom> atoms_for(const AtomMaker& make, std::size_t dim) {
  std::vector<Atom> out{make(0.7, -1.3)};
  if (dim > 1) out.push_back(make(-0.4, 0.9));
  return out;
}

}  // namespace detail

/// Base cases for one variant and dimension (1 or 2).
inline std::vector<PropositionCase> proposition_cases(Variant v, std::size_t dim) {
  using detail::Atom;
  std::vector<PropositionCase> out;
  auto add = [&](std::string name, int prop, Expectation e, const detail::AtomMaker& make, Quadruple lhs,
                 Quadruple rhs) {
    out.push_back({std::move(name), prop, v, dim, e, detail::assemble(v, detail::atoms_for(make, dim)), lhs, rhs});
  };
  const Quadruple fwd{0, 0, 1, 0};
  const Quadruple bwd{1, 0, 0, 0};

  // Symmetry, first branch: imaginary part of the relation is zero.
  add("symmetry_real_relation", 1, Expectation::Equal,
      [](double x, double y) {
        Atom a;
        a.s = {x + 1.3, y};
        a.o = {y - 0.2, x * 2};
        a.ps1 = a.pc1 = {x - y, 0};
        return a;
      },
      fwd, bwd);
  // Second branch: s_b o_a = s_a o_b with a free relation.
  add("symmetry_proportional_entities", 1, Expectation::Equal,
      [](double x, double y) {
        Atom a;
        a.s = {1 + x * 0.1, 2 + x * 0.2};
        a.o = {2 * (1 + x * 0.1), 2 * (2 + x * 0.2)};
        a.ps1 = a.pc1 = {x, y};
        return a;
      },
      fwd, bwd);
  // Counterexamples use s = (1, 1), o = (1, -1). The antisymmetric gap has
  // opposite signs in the complex and split geometries; with s_b o_b != 0 the
  // geometric attention differs between the two directions, so the mixture
  // does not cancel it.
  add("symmetry_counterexample", 1, Expectation::Unequal,
      [](double x, double) {
        Atom a;
        a.s = {1, 1};
        a.o = {1, -1};
        a.ps1 = a.pc1 = {2 + x, 1};
        return a;
      },
      fwd, bwd);

  // Inverse: relation 1 carries the mirrored hybrid (h_a, -h_b).
  add("inverse_mirrored", 2, Expectation::Equal,
      [](double x, double y) {
        Atom a;
        a.s = {x, y + 0.5};
        a.o = {y * 0.3 - 1, x + 0.8};
        a.ps1 = a.pc1 = {x, y};
        a.ps2 = a.pc2 = {x, -y};
        return a;
      },
      fwd, {1, 1, 0, 0});
  add("inverse_counterexample", 2, Expectation::Unequal,
      [](double x, double) {
        Atom a;
        a.s = {1, 1};
        a.o = {1, -1};
        a.ps1 = a.pc1 = {2 + x, 1};
        a.ps2 = a.pc2 = {2 + x, 1};
        return a;
      },
      fwd, {1, 1, 0, 0});
  // Delayed inverse: at time 1 (tau = i) relation 1 rotates p_c into (h_a, -h_b).
  add("delayed_inverse", 2, Expectation::Equal,
      [](double x, double y) {
        Atom a;
        a.s = {x + 0.25, -y};
        a.o = {y, x * x + 0.5};
        a.ps1 = a.pc1 = {x, y};
        a.ps2 = {x, -y};
        a.pc2 = {-y, -x};
        a.tau2 = {0, 1};
        return a;
      },
      fwd, {1, 1, 0, 1});
  add("delayed_inverse_counterexample", 2, Expectation::Unequal,
      [](double x, double y) {
        Atom a;
        a.s = {1, 0};
        a.o = {0, 1};
        a.ps1 = a.pc1 = {x, y};
        a.ps2 = {x, y};
        a.pc2 = {-y, -x};
        a.tau2 = {0, 1};
        return a;
      },
      fwd, {1, 1, 0, 1});

  // Evolve: relation 0 at time 0 and relation 1 at time 1 share hybrid h.
  add("evolve", 3, Expectation::Equal,
      [](double x, double y) {
        Atom a;
        a.s = {x * 0.5 + 1, y};
        a.o = {-y, x + 0.1};
        a.ps1 = a.pc1 = {x, y};
        a.ps2 = {x, y};
        a.pc2 = {y, -x};
        a.tau2 = {0, 1};
        return a;
      },
      fwd, {0, 1, 1, 1});
  // Relation 1 at time 1 evaluates to -h instead of h.
  add("evolve_counterexample", 3, Expectation::Unequal,
      [](double x, double y) {
        Atom a;
        a.s = {1, 1};
        a.o = {1, -1};
        a.ps1 = a.pc1 = {2 + x, y};
        a.ps2 = {-2 - x, -y};
        a.pc2 = {-y, 2 + x};
        a.tau2 = {0, 1};
        return a;
      },
      fwd, {0, 1, 1, 1});

  // Temporary: a purely time-driven relation, large at time 0 and near zero
  // at times 1 and 2; the static control cannot separate them.
  const std::size_t scale = dim;
  add("temporary_before", 4, Expectation::Gap,
      [scale](double, double) {
        Atom a;
        a.s = a.o = {1, 0};
        a.ps1 = {0, 0};
        a.pc1 = {1, 0};
        a.tau1 = {2.0 / static_cast<double>(scale), 0};
        a.tau2 = a.tau3 = {1e-3, 0};
        return a;
      },
      {0, 0, 1, 0}, {0, 0, 1, 1});
  add("temporary_after", 4, Expectation::Gap,
      [scale](double, double) {
        Atom a;
        a.s = a.o = {1, 0};
        a.ps1 = {0, 0};
        a.pc1 = {1, 0};
        a.tau1 = {2.0 / static_cast<double>(scale), 0};
        a.tau2 = a.tau3 = {1e-3, 0};
        return a;
      },
      {0, 0, 1, 0}, {0, 0, 1, 2});
  add("temporary_static_control", 4, Expectation::NoGap,
      [scale](double, double) {
        Atom a;
        a.s = a.o = {1, 0};
        a.ps1 = {2.0 / static_cast<double>(scale), 0};
        a.pc1 = {0, 0};
        a.tau1 = {2.0 / static_cast<double>(scale), 0};
        a.tau2 = a.tau3 = {1e-3, 0};
        return a;
      },
      {0, 0, 1, 0}, {0, 0, 1, 2});
  return out;
}

inline CaseOutcome check(const PropositionCase& c) {
  CaseOutcome r;
  r.name = c.name;
  r.proposition = c.proposition;
  r.variant = c.variant;
  r.dim = c.dim;
  r.expect = c.expect;
  r.lhs = score(c.model, c.lhs);
  r.rhs = score(c.model, c.rhs);
  r.residual = detail::case_residual(c.expect, r.lhs, r.rhs);
  r.pass = detail::case_passes(c.expect, r.residual);

  ModelConfig printed = c.model.config();
  printed.conjugate_object = false;
  ModelState plain(printed);
  plain.entity = c.model.entity;
  plain.rel_static = c.model.rel_static;
  plain.rel_dynamic = c.model.rel_dynamic;
  plain.rel_weight = c.model.rel_weight;
  plain.time = c.model.time;
  r.residual_printed = detail::case_residual(c.expect, score(plain, c.lhs), score(plain, c.rhs));
  return r;
}

/// Single split-complex geometry first, then the full mixture, at d = 1, 2.
inline std::vector<CaseOutcome> run_verifier() {
  std::vector<CaseOutcome> out;
  for (Variant v : {Variant::SingleSplit, Variant::HgeFull}) {
    for (std::size_t d : {1u, 2u}) {
      for (const PropositionCase& c : proposition_cases(v, d)) out.push_back(check(c));
    }
  }
  return out;
}

inline bool all_pass(const std::vector<CaseOutcome>& rows) {
  for (const CaseOutcome& r : rows) {
    if (!r.pass) return false;
  }
  return !rows.empty();
}

inline std::string verifier_table(const std::vector<CaseOutcome>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-32s %4s %-8s %3s %-10s %12s %12s %6s\n", "case", "prop", "variant", "d", "expect",
                "residual", "unconj.res", "result");
  out += buf;
  for (const CaseOutcome& r : rows) {
    const char* e = r.expect == Expectation::Equal     ? "equal"
                    : r.expect == Expectation::Unequal ? "unequal"
                    : r.expect == Expectation::Gap     ? "gap>0.5"
                                                       : "no-gap";
    std::snprintf(buf, sizeof buf, "%-32s %4d %-8s %3zu %-10s %12.3e %12.3e %6s\n", r.name.c_str(), r.proposition,
                  variant_name(r.variant).data(), r.dim, e, r.residual, r.residual_printed, r.pass ? "PASS" : "FAIL");
    out += buf;
  }
  return out;
}

}  // namespace hge
