#pragma once

// Test-side reference implementations. They read raw table values and
// re-derive every quantity from written-out formulas; none of them call the
// library's algebra, attention, ranking or pattern code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "hge/model.hpp"
#include "hge/types.hpp"

namespace oracle {

using hge::Quadruple;

struct C2 {
  double a = 0, b = 0;
};

inline C2 row_at(const hge::EmbeddingTable& t, std::size_t row, std::size_t k) {
  const auto r = t.row(row);
  return {r[k], r[t.dim() + k]};
}

// Term-by-term expansions of <s, p, o> for the three geometries.
inline C2 expand_complex(C2 s, C2 p, C2 o) {
  return {s.a * p.a * o.a - s.b * p.b * o.a - s.a * p.b * o.b - s.b * p.a * o.b,
          s.a * p.a * o.b + s.a * p.b * o.a + s.b * p.a * o.a - s.b * p.b * o.b};
}
inline C2 expand_split(C2 s, C2 p, C2 o) {
  return {s.a * p.a * o.a + s.b * p.b * o.a + s.a * p.b * o.b + s.b * p.a * o.b,
          s.a * p.a * o.b + s.a * p.b * o.a + s.b * p.a * o.a + s.b * p.b * o.b};
}
inline C2 expand_dual(C2 s, C2 p, C2 o) {
  return {s.a * p.a * o.a, s.a * p.a * o.b + s.a * p.b * o.a + s.b * p.a * o.a};
}
inline C2 expand(int g, C2 s, C2 p, C2 o) {
  return g == 0 ? expand_complex(s, p, o) : g == 1 ? expand_split(s, p, o) : expand_dual(s, p, o);
}

/// TNTComplEx: Re(sum_k s_k (pc_k tau_k + ps_k) conj(o_k)) in real arithmetic.
inline double tntcomplex_score(const hge::ModelState& m, const Quadruple& q, bool with_static = true) {
  const std::size_t d = m.dim();
  double acc = 0;
  for (std::size_t k = 0; k < d; ++k) {
    const C2 s = row_at(m.entity, q.s, k), o = row_at(m.entity, q.o, k);
    const C2 pc = row_at(m.rel_dynamic, q.p, k), ps = row_at(m.rel_static, q.p, k), t = row_at(m.time, q.t, k);
    double ra = pc.a * t.a - pc.b * t.b;
    double rb = pc.a * t.b + pc.b * t.a;
    if (with_static) {
      ra += ps.a;
      rb += ps.b;
    }
    acc += s.a * ra * o.a - s.b * rb * o.a + s.a * rb * o.b + s.b * ra * o.b;
  }
  return acc;
}

/// Reference HGE score for every variant, written from the model equations.
inline double hge_score(const hge::ModelState& m, const Quadruple& q) {
  using hge::Variant;
  const std::size_t d = m.dim();
  const Variant v = m.variant();
  const bool conj = m.config().conjugate_object;

  // Relation composition.
  std::vector<C2> dyn(d), ps(d), h(d);
  double lt = 0, ls = 0;
  for (std::size_t k = 0; k < d; ++k) {
    const C2 pc = row_at(m.rel_dynamic, q.p, k), t = row_at(m.time, q.t, k);
    dyn[k] = {pc.a * t.a - pc.b * t.b, pc.a * t.b + pc.b * t.a};
    ps[k] = row_at(m.rel_static, q.p, k);
    const C2 w = row_at(m.rel_weight, q.p, k);
    lt += w.a * dyn[k].a + w.b * dyn[k].b;
    ls += w.a * ps[k].a + w.b * ps[k].b;
  }
  const bool eq5 = v == Variant::HgeFull || v == Variant::TraOnly || v == Variant::SingleComplex ||
                   v == Variant::SingleSplit || v == Variant::SingleDual;
  const double at = eq5 ? 1.0 / (1.0 + std::exp(ls - lt)) : 1.0;
  const double as = eq5 ? 1.0 - at : (v == Variant::TComplex ? 0.0 : 1.0);
  for (std::size_t k = 0; k < d; ++k) h[k] = {at * dyn[k].a + as * ps[k].a, at * dyn[k].b + as * ps[k].b};

  std::vector<std::vector<C2>> c(3, std::vector<C2>(d));
  for (std::size_t k = 0; k < d; ++k) {
    const C2 s = row_at(m.entity, q.s, k);
    C2 o = row_at(m.entity, q.o, k);
    if (conj) o.b = -o.b;
    for (int g = 0; g < 3; ++g) c[g][k] = expand(g, s, h[k], o);
  }
  auto real_sum = [&](int g, std::size_t first, std::size_t last) {
    double acc = 0;
    for (std::size_t k = first; k < last; ++k) acc += c[g][k].a;
    return acc;
  };
  switch (v) {
    case Variant::SingleComplex:
    case Variant::TraOnly:
    case Variant::TComplex:
    case Variant::TNTComplex: return real_sum(0, 0, d);
    case Variant::SingleSplit: return real_sum(1, 0, d);
    case Variant::SingleDual: return real_sum(2, 0, d);
    case Variant::Stack: return real_sum(0, 0, d / 3) + real_sum(1, d / 3, 2 * d / 3) + real_sum(2, 2 * d / 3, d);
    case Variant::HgeFull:
    case Variant::TgaOnly: {
      double logit[3];
      for (int g = 0; g < 3; ++g) {
        logit[g] = 0;
        for (std::size_t k = 0; k < d; ++k) logit[g] += h[k].a * c[g][k].a + h[k].b * c[g][k].b;
      }
      const double mx = std::max({logit[0], logit[1], logit[2]});
      double z = 0, total = 0;
      for (int g = 0; g < 3; ++g) z += std::exp(logit[g] - mx);
      for (int g = 0; g < 3; ++g) total += std::exp(logit[g] - mx) / z * real_sum(g, 0, d);
      return total;
    }
  }
  return 0;
}

/// Random model with every table (including attention weights) drawn N(0, scale^2).
inline hge::ModelState random_model(const hge::ModelConfig& cfg, std::uint64_t seed, double scale = 0.5) {
  hge::ModelState m(cfg);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  for (hge::EmbeddingTable* t : {&m.entity, &m.rel_static, &m.rel_dynamic, &m.rel_weight, &m.time}) {
    for (double& x : t->data()) x = n(rng);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Ranking

struct BruteFact {
  int s, p, o, t;
};

/// Filtered rank by sorting the surviving candidates' scores.
inline std::size_t brute_rank(const hge::ModelState& m, const Quadruple& q, bool object_side,
                              const std::vector<BruteFact>& known) {
  const int n = static_cast<int>(m.config().entities);
  const int base = static_cast<int>(m.config().relations);
  std::vector<double> scores(n);
  for (int e = 0; e < n; ++e) {
    // Subject-side queries score (o, p^-1, e, t).
    scores[e] = object_side ? hge_score(m, {q.s, q.p, e, q.t}) : hge_score(m, {q.o, q.p + base, e, q.t});
  }
  const int answer = object_side ? q.o : q.s;
  std::vector<double> kept;
  for (int e = 0; e < n; ++e) {
    bool drop = false;
    if (e != answer) {
      for (const BruteFact& f : known) {
        const bool match = object_side ? (f.s == q.s && f.p == q.p && f.o == e && f.t == q.t)
                                       : (f.o == q.o && f.p == q.p && f.s == e && f.t == q.t);
        drop = drop || match;
      }
    }
    if (!drop) kept.push_back(scores[e]);
  }
  std::sort(kept.begin(), kept.end(), std::greater<>());
  const double target = scores[answer];
  std::size_t first = 0, last = 0;  // 1-based positions of the tie block
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] == target) {
      if (first == 0) first = i + 1;
      last = i + 1;
    }
  }
  // Mid-rank: lower median of the tie block's positions.
  return first + (last - first) / 2;
}

// ---------------------------------------------------------------------------
// Pattern enumeration straight from the definitions.

inline std::vector<Quadruple> dedupe(std::vector<Quadruple> f) {
  std::set<std::tuple<int, int, int, int>> seen;
  std::vector<Quadruple> out;
  for (const Quadruple& q : f) {
    if (seen.insert({q.s, q.p, q.o, q.t}).second) out.push_back(q);
  }
  return out;
}

inline std::uint64_t pairs(const std::vector<Quadruple>& f, const std::function<bool(const Quadruple&, const Quadruple&)>& ok) {
  std::uint64_t n = 0;
  for (const Quadruple& x : f) {
    for (const Quadruple& y : f) {
      if (ok(x, y)) ++n;
    }
  }
  return n;
}

inline bool static_symmetric(const Quadruple& x, const Quadruple& y) {
  return x.s != x.o && y.s == x.o && y.o == x.s && y.p == x.p && y.t == x.t;
}
inline bool static_inverse(const Quadruple& x, const Quadruple& y) {
  return x.s != x.o && y.s == x.o && y.o == x.s && y.p != x.p && y.t == x.t;
}
inline bool dynamic_symmetric(const Quadruple& x, const Quadruple& y) {
  return x.s != x.o && y.s == x.o && y.o == x.s && y.p == x.p && y.t != x.t;
}
inline bool dynamic_inverse(const Quadruple& x, const Quadruple& y) {
  return x.s != x.o && y.s == x.o && y.o == x.s && y.p != x.p && y.t != x.t;
}
inline bool evolve(const Quadruple& x, const Quadruple& y) {
  return y.s == x.s && y.o == x.o && y.p != x.p && x.t < y.t;
}
inline bool hierarchy(const Quadruple& x, const Quadruple& y) {
  return y.s == x.o && y.p == x.p && x.t < y.t && x.s != x.o && x.s != y.o && x.o != y.o;
}

/// Triples with an occurrence t1 that has absent times on both sides in [0, last].
inline std::uint64_t temporary(const std::vector<Quadruple>& f, int last) {
  std::set<std::tuple<int, int, int>> triples;
  for (const Quadruple& q : f) triples.insert({q.s, q.p, q.o});
  auto present = [&](int s, int p, int o, int t) {
    for (const Quadruple& q : f) {
      if (q.s == s && q.p == p && q.o == o && q.t == t) return true;
    }
    return false;
  };
  std::uint64_t n = 0;
  for (const auto& [s, p, o] : triples) {
    bool hit = false;
    for (int t1 = 0; t1 <= last && !hit; ++t1) {
      if (!present(s, p, o, t1)) continue;
      bool before = false, after = false;
      for (int t0 = 0; t0 < t1; ++t0) before = before || !present(s, p, o, t0);
      for (int t2 = t1 + 1; t2 <= last; ++t2) after = after || !present(s, p, o, t2);
      hit = before && after;
    }
    n += hit;
  }
  return n;
}

/// Whether n facts of one hub have pairwise distinct objects and distinct
/// times (which can then be listed at strictly increasing times).
inline bool star_search(const std::vector<Quadruple>& hub, std::size_t start, std::size_t need,
                        std::vector<const Quadruple*>& chosen) {
  if (need == 0) return true;
  for (std::size_t i = start; i < hub.size(); ++i) {
    bool clash = false;
    for (const Quadruple* c : chosen) clash = clash || c->o == hub[i].o || c->t == hub[i].t;
    if (clash) continue;
    chosen.push_back(&hub[i]);
    if (star_search(hub, i + 1, need - 1, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

inline std::uint64_t stars(const std::vector<Quadruple>& f, std::size_t n) {
  std::set<std::pair<int, int>> hubs;
  for (const Quadruple& q : f) hubs.insert({q.s, q.p});
  std::uint64_t count = 0;
  for (const auto& [s, p] : hubs) {
    std::vector<Quadruple> hub;
    for (const Quadruple& q : f) {
      if (q.s == s && q.p == p) hub.push_back(q);
    }
    std::vector<const Quadruple*> chosen;
    count += star_search(hub, 0, n, chosen);
  }
  return count;
}

/// Small random fact list over few ids so that patterns actually occur.
inline std::vector<Quadruple> random_facts(std::mt19937_64& rng, std::size_t n, int entities, int relations,
                                           int times) {
  std::uniform_int_distribution<int> e(0, entities - 1), r(0, relations - 1), t(0, times - 1);
  std::vector<Quadruple> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int s = e(rng), o = e(rng), p = r(rng), tt = t(rng);
    out.push_back({s, p, o, tt});
    // Plant mirrored and chained partners half of the time.
    if (i % 2 == 0 && out.size() < n) out.push_back({o, r(rng), s, (rng() & 1) ? tt : t(rng)});
    ++i;
  }
  out.resize(std::min(out.size(), n));
  return out;
}

}  // namespace oracle
