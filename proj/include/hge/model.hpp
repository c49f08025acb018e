#pragma once

// Embedding tables and the attention-based product-space scorer.
//
// Every entity, relation component and timestamp owns one (real, imaginary)
// vector pair that is read by all three geometries. A query (s, p, t) first
// builds a hybrid relation from the static and time-modulated relation
// embeddings, then scores an object in each geometry and mixes the three
// geometry scores with a softmax driven by the hybrid relation.

#include <algorithm>
#include <cctype>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hge/algebra.hpp"
#include "hge/errors.hpp"
#include "hge/types.hpp"

namespace hge {

// ---------------------------------------------------------------------------
// Vectors and tables

struct PairView {
  std::span<const double> a;
  std::span<const double> b;

  std::size_t dim() const noexcept { return a.size(); }
  HNum operator[](std::size_t k) const noexcept { return {a[k], b[k]}; }

  /// View over a flat [a | b] row.
  static PairView of_row(std::span<const double> row) noexcept {
    const std::size_t d = row.size() / 2;
    return {row.first(d), row.subspan(d, d)};
  }
};

struct PairVector {
  std::vector<double> a;
  std::vector<double> b;

  PairVector() = default;
  explicit PairVector(std::size_t d) : a(d, 0.0), b(d, 0.0) {}
  PairVector(std::vector<double> re, std::vector<double> im) : a(std::move(re)), b(std::move(im)) {
    if (a.size() != b.size() || a.empty()) {
      throw ConfigError("PairVector halves must have equal non-zero length");
    }
  }
  static PairVector copy_of(PairView v) {
    return PairVector({v.a.begin(), v.a.end()}, {v.b.begin(), v.b.end()});
  }

  std::size_t dim() const noexcept { return a.size(); }
  HNum operator[](std::size_t k) const noexcept { return {a[k], b[k]}; }
  void set(std::size_t k, HNum v) noexcept {
    a[k] = v.a;
    b[k] = v.b;
  }
  PairView view() const noexcept { return {a, b}; }

  std::vector<double> flatten() const {
    std::vector<double> out(a);
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  bool operator==(const PairVector&) const = default;
};

inline double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

inline double dot(PairView x, PairView y) { return dot(x.a, y.a) + dot(x.b, y.b); }

/// Dense row-major table; row i is stored flat as [a_0..a_{d-1}, b_0..b_{d-1}].
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t rows, std::size_t dim) : rows_(rows), dim_(dim), data_(rows * 2 * dim, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t width() const noexcept { return 2 * dim_; }

  std::span<double> row(std::size_t i) {
    check(i);
    return {data_.data() + i * width(), width()};
  }
  std::span<const double> row(std::size_t i) const {
    check(i);
    return {data_.data() + i * width(), width()};
  }
  PairView pair(std::size_t i) const { return PairView::of_row(row(i)); }

  void set(std::size_t i, PairView v) {
    if (v.dim() != dim_) throw ConfigError("row dimension mismatch");
    auto r = row(i);
    std::copy(v.a.begin(), v.a.end(), r.begin());
    std::copy(v.b.begin(), v.b.end(), r.begin() + static_cast<std::ptrdiff_t>(dim_));
  }
  void set(std::size_t i, const PairVector& v) { set(i, v.view()); }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool operator==(const EmbeddingTable&) const = default;

 private:
  void check(std::size_t i) const {
    if (i >= rows_) {
      throw LookupError("row " + std::to_string(i) + " outside table of " + std::to_string(rows_));
    }
  }

  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// ---------------------------------------------------------------------------
// Variants

enum class Variant : std::uint8_t {
  HgeFull = 0,
  TraOnly,
  TgaOnly,
  Stack,
  SingleComplex,
  SingleSplit,
  SingleDual,
  TComplex,
  TNTComplex,
};

inline constexpr std::array<Variant, 9> kAllVariants = {
    Variant::HgeFull,       Variant::TraOnly,     Variant::TgaOnly,    Variant::Stack,     Variant::SingleComplex,
    Variant::SingleSplit,   Variant::SingleDual,  Variant::TComplex,   Variant::TNTComplex};

constexpr std::string_view variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::HgeFull: return "hge";
    case Variant::TraOnly: return "tra";
    case Variant::TgaOnly: return "tga";
    case Variant::Stack: return "stack";
    case Variant::SingleComplex: return "complex";
    case Variant::SingleSplit: return "split";
    case Variant::SingleDual: return "dual";
    case Variant::TComplex: return "tcomplex";
    case Variant::TNTComplex: return "tntcomplex";
  }
  return "?";
}

inline Variant parse_variant(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (Variant v : kAllVariants) {
    if (t == variant_name(v)) return v;
  }
  if (t == "hge_full") return Variant::HgeFull;
  if (t == "tra_only") return Variant::TraOnly;
  if (t == "tga_only") return Variant::TgaOnly;
  if (t == "single_complex") return Variant::SingleComplex;
  if (t == "single_split") return Variant::SingleSplit;
  if (t == "single_dual") return Variant::SingleDual;
  throw ConfigError("unknown variant '" + std::string(text) + "'");
}

/// How the hybrid relation is formed from (p_s, p_c, tau).
enum class Composition : std::uint8_t {
  Attention,    // softmax blend of p_c * tau and p_s
  Sum,          // p_c * tau + p_s
  DynamicOnly,  // p_c * tau
};

/// How the per-geometry scores are combined.
enum class Mixing : std::uint8_t {
  Attention,  // softmax over geometries
  Single,     // one geometry only
  Stack,      // disjoint dimension blocks, summed
};

struct VariantTraits {
  Composition composition;
  Mixing mixing;
  Geometry single = Geometry::Complex;
};

constexpr VariantTraits traits(Variant v) noexcept {
  switch (v) {
    case Variant::HgeFull: return {Composition::Attention, Mixing::Attention};
    case Variant::TraOnly: return {Composition::Attention, Mixing::Single, Geometry::Complex};
    case Variant::TgaOnly: return {Composition::Sum, Mixing::Attention};
    case Variant::Stack: return {Composition::Sum, Mixing::Stack};
    case Variant::SingleComplex: return {Composition::Attention, Mixing::Single, Geometry::Complex};
    case Variant::SingleSplit: return {Composition::Attention, Mixing::Single, Geometry::SplitComplex};
    case Variant::SingleDual: return {Composition::Attention, Mixing::Single, Geometry::Dual};
    case Variant::TComplex: return {Composition::DynamicOnly, Mixing::Single, Geometry::Complex};
    case Variant::TNTComplex: return {Composition::Sum, Mixing::Single, Geometry::Complex};
  }
  return {Composition::Attention, Mixing::Attention};
}

/// Dimension block [first, last) scored by geometry g.
struct DimRange {
  std::size_t first = 0;
  std::size_t last = 0;
  bool contains(std::size_t k) const noexcept { return k >= first && k < last; }
};

inline DimRange geometry_range(Variant v, Geometry g, std::size_t dim) noexcept {
  const VariantTraits tr = traits(v);
  if (tr.mixing == Mixing::Stack) {
    const auto gi = static_cast<std::size_t>(g);
    const std::size_t block = dim / 3;
    return {gi * block, gi * block + block};
  }
  if (tr.mixing == Mixing::Single && tr.single != g) return {0, 0};
  return {0, dim};
}

inline bool geometry_active(Variant v, Geometry g) noexcept {
  const VariantTraits tr = traits(v);
  return tr.mixing != Mixing::Single || tr.single == g;
}

// ---------------------------------------------------------------------------
// Model state

struct ModelConfig {
  std::size_t dim = 0;
  std::size_t entities = 0;
  std::size_t relations = 0;  // base relations; the tables hold 2x for reciprocals
  std::size_t times = 0;
  Variant variant = Variant::HgeFull;
  std::uint64_t seed = 0;
  // Score against conj(o); false scores the plain trilinear product s * h * o.
  bool conjugate_object = true;

  bool operator==(const ModelConfig&) const = default;
};

class ModelState {
 public:
  ModelState() = default;

  /// Zero-filled tables.
  explicit ModelState(const ModelConfig& config) : config_(config) {
    if (config.dim == 0) throw ConfigError("model dimension must be positive");
    if (config.entities == 0 || config.relations == 0 || config.times == 0) {
      throw ConfigError("model vocabulary sizes must be positive");
    }
    if (config.variant == Variant::Stack && config.dim % 3 != 0) {
      throw ConfigError("stack variant needs a dimension divisible by 3");
    }
    const std::size_t rel_rows = 2 * config.relations;
    entity = EmbeddingTable(config.entities, config.dim);
    rel_static = EmbeddingTable(rel_rows, config.dim);
    rel_dynamic = EmbeddingTable(rel_rows, config.dim);
    rel_weight = EmbeddingTable(rel_rows, config.dim);
    time = EmbeddingTable(config.times, config.dim);
  }

  /// Embeddings i.i.d. N(0, init_scale^2); attention weights zero.
  static ModelState initialized(const ModelConfig& config, double init_scale = 1e-2) {
    ModelState m(config);
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, init_scale);
    for (EmbeddingTable* t : {&m.entity, &m.rel_static, &m.rel_dynamic, &m.time}) {
      for (double& x : t->data()) x = normal(rng);
    }
    return m;
  }

  const ModelConfig& config() const noexcept { return config_; }
  std::size_t dim() const noexcept { return config_.dim; }
  Variant variant() const noexcept { return config_.variant; }
  std::size_t relation_rows() const noexcept { return 2 * config_.relations; }

  /// Id of the reciprocal of relation r.
  RelationId reciprocal(RelationId r) const noexcept {
    const auto base = static_cast<RelationId>(config_.relations);
    return r < base ? r + base : r - base;
  }

  void check(EntityId s, RelationId r, EntityId o, TimeId t) const {
    check_entity(s);
    check_entity(o);
    check_query(s, r, t);
  }
  void check_query(EntityId s, RelationId r, TimeId t) const {
    check_entity(s);
    if (r < 0 || static_cast<std::size_t>(r) >= relation_rows()) {
      throw LookupError("relation id " + std::to_string(r) + " out of range");
    }
    if (t < 0 || static_cast<std::size_t>(t) >= config_.times) {
      throw LookupError("time id " + std::to_string(t) + " out of range");
    }
  }
  void check_entity(EntityId e) const {
    if (e < 0 || static_cast<std::size_t>(e) >= config_.entities) {
      throw LookupError("entity id " + std::to_string(e) + " out of range");
    }
  }

  bool operator==(const ModelState&) const = default;

  EmbeddingTable entity;
  EmbeddingTable rel_static;
  EmbeddingTable rel_dynamic;
  EmbeddingTable rel_weight;  // flat 2d attention weight per relation
  EmbeddingTable time;

 private:
  ModelConfig config_;
};

// ---------------------------------------------------------------------------
// Temporal-relational attention

struct HybridRelation {
  PairVector dynamic;  // p_c * tau, complex product
  PairVector hybrid;   // what the geometries score with
  double alpha_time = 0.0;
  double alpha_static = 0.0;
};

/// Numerically stable softmax over two logits.
inline std::array<double, 2> softmax2(double x, double y) noexcept {
  const double m = std::max(x, y);
  const double ex = std::exp(x - m);
  const double ey = std::exp(y - m);
  return {ex / (ex + ey), ey / (ex + ey)};
}

inline std::array<double, 3> softmax3(const std::array<double, 3>& z) noexcept {
  const double m = std::max({z[0], z[1], z[2]});
  std::array<double, 3> e{std::exp(z[0] - m), std::exp(z[1] - m), std::exp(z[2] - m)};
  const double sum = e[0] + e[1] + e[2];
  return {e[0] / sum, e[1] / sum, e[2] / sum};
}

inline PairVector complex_product(PairView x, PairView y) {
  if (x.dim() != y.dim()) throw ConfigError("dimension mismatch in elementwise product");
  PairVector out(x.dim());
  for (std::size_t k = 0; k < x.dim(); ++k) out.set(k, hmul(Geometry::Complex, x[k], y[k]));
  return out;
}

inline HybridRelation temporal_relational_attention(PairView p_static, PairView p_dynamic,
                                                    std::span<const double> weight, PairView time) {
  const std::size_t d = p_static.dim();
  if (p_dynamic.dim() != d || time.dim() != d || weight.size() != 2 * d) {
    throw ConfigError("dimension mismatch in temporal-relational attention");
  }
  HybridRelation out;
  out.dynamic = complex_product(p_dynamic, time);
  const double logit_time = dot(weight.first(d), out.dynamic.a) + dot(weight.subspan(d), out.dynamic.b);
  const double logit_static = dot(weight.first(d), p_static.a) + dot(weight.subspan(d), p_static.b);
  const auto alpha = softmax2(logit_time, logit_static);
  out.alpha_time = alpha[0];
  out.alpha_static = alpha[1];
  out.hybrid = PairVector(d);
  for (std::size_t k = 0; k < d; ++k) {
    out.hybrid.a[k] = alpha[0] * out.dynamic.a[k] + alpha[1] * p_static.a[k];
    out.hybrid.b[k] = alpha[0] * out.dynamic.b[k] + alpha[1] * p_static.b[k];
  }
  return out;
}

/// Hybrid relation for (r, t) according to the model's variant.
inline HybridRelation compose_relation(const ModelState& m, RelationId r, TimeId t) {
  const auto ri = static_cast<std::size_t>(r);
  const auto ti = static_cast<std::size_t>(t);
  const PairView ps = m.rel_static.pair(ri);
  const PairView pc = m.rel_dynamic.pair(ri);
  const PairView tau = m.time.pair(ti);
  switch (traits(m.variant()).composition) {
    case Composition::Attention:
      return temporal_relational_attention(ps, pc, m.rel_weight.row(ri), tau);
    case Composition::Sum: {
      HybridRelation out;
      out.dynamic = complex_product(pc, tau);
      out.hybrid = out.dynamic;
      for (std::size_t k = 0; k < m.dim(); ++k) {
        out.hybrid.a[k] += ps.a[k];
        out.hybrid.b[k] += ps.b[k];
      }
      out.alpha_time = 1.0;
      out.alpha_static = 1.0;
      return out;
    }
    case Composition::DynamicOnly: {
      HybridRelation out;
      out.dynamic = complex_product(pc, tau);
      out.hybrid = out.dynamic;
      out.alpha_time = 1.0;
      out.alpha_static = 0.0;
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Geometry products and temporal-geometric attention

struct GeometryProducts {
  std::array<PairVector, 3> c;
  std::array<bool, 3> active{};

  const PairVector& operator[](Geometry g) const { return c[static_cast<std::size_t>(g)]; }
};

inline GeometryProducts geometry_products(PairView s, PairView h, PairView o, Variant variant) {
  const std::size_t d = s.dim();
  if (h.dim() != d || o.dim() != d) throw ConfigError("dimension mismatch in geometry products");
  GeometryProducts out;
  for (Geometry g : kAllGeometries) {
    const auto gi = static_cast<std::size_t>(g);
    out.c[gi] = PairVector(d);
    out.active[gi] = geometry_active(variant, g);
    if (!out.active[gi]) continue;
    for (std::size_t k = 0; k < d; ++k) out.c[gi].set(k, trilinear(g, s[k], h[k], o[k]));
  }
  return out;
}

/// Softmax over dot(flat(h), flat(c_g)) for the three geometries.
inline std::array<double, 3> temporal_geometric_attention(PairView h, const std::array<PairVector, 3>& c) {
  std::array<double, 3> logits{};
  for (std::size_t g = 0; g < 3; ++g) {
    if (c[g].dim() != h.dim()) throw ConfigError("temporal-geometric attention needs all three geometries");
    logits[g] = dot(h, c[g].view());
  }
  return softmax3(logits);
}

// ---------------------------------------------------------------------------
// Scoring

struct ScoreBreakdown {
  GeometryProducts products;
  std::array<double, 3> partial{};  // dimension-summed real part per geometry
  std::array<double, 3> beta{};     // weights applied to `partial`
  PairVector hybrid;
  PairVector dynamic;
  double alpha_time = 0.0;
  double alpha_static = 0.0;
  double total = 0.0;
};

namespace detail {

inline PairVector object_view_for(const ModelState& m, EntityId o) {
  PairVector obj = PairVector::copy_of(m.entity.pair(static_cast<std::size_t>(o)));
  if (m.config().conjugate_object) {
    for (double& x : obj.b) x = -x;
  }
  return obj;
}

inline std::array<double, 3> mixing_weights(Variant v, const std::array<double, 3>& attention) {
  const VariantTraits tr = traits(v);
  switch (tr.mixing) {
    case Mixing::Attention: return attention;
    case Mixing::Stack: return {1.0, 1.0, 1.0};
    case Mixing::Single: {
      std::array<double, 3> w{};
      w[static_cast<std::size_t>(tr.single)] = 1.0;
      return w;
    }
  }
  return attention;
}

}  // namespace detail

inline ScoreBreakdown score_breakdown(const ModelState& m, const Quadruple& q) {
  m.check(q.s, q.p, q.o, q.t);
  ScoreBreakdown out;
  HybridRelation rel = compose_relation(m, q.p, q.t);
  const PairVector obj = detail::object_view_for(m, q.o);
  const Variant v = m.variant();
  out.products = geometry_products(m.entity.pair(static_cast<std::size_t>(q.s)), rel.hybrid.view(), obj.view(), v);
  for (Geometry g : kAllGeometries) {
    const auto gi = static_cast<std::size_t>(g);
    const DimRange range = geometry_range(v, g, m.dim());
    double acc = 0.0;
    for (std::size_t k = range.first; k < range.last; ++k) acc += out.products.c[gi].a[k];
    out.partial[gi] = acc;
  }
  std::array<double, 3> attention{1.0 / 3, 1.0 / 3, 1.0 / 3};
  if (traits(v).mixing == Mixing::Attention) attention = temporal_geometric_attention(rel.hybrid.view(), out.products.c);
  out.beta = detail::mixing_weights(v, attention);
  for (std::size_t g = 0; g < 3; ++g) out.total += out.beta[g] * out.partial[g];
  out.hybrid = std::move(rel.hybrid);
  out.dynamic = std::move(rel.dynamic);
  out.alpha_time = rel.alpha_time;
  out.alpha_static = rel.alpha_static;
  return out;
}

inline double score(const ModelState& m, const Quadruple& q) { return score_breakdown(m, q).total; }

/// Linearised scorer for one (subject, relation, time) query. Against a fixed
/// hybrid relation, each geometry's partial score and attention logit are
/// linear in the object row, so every candidate costs a handful of dot
/// products.
class QueryKernel {
 public:
  struct Candidate {
    std::array<double, 3> partial{};
    std::array<double, 3> logit{};
    std::array<double, 3> weight{};
    double total = 0.0;
  };

  QueryKernel(const ModelState& m, EntityId subject, RelationId relation, TimeId time)
      : dim_(m.dim()), variant_(m.variant()), sign_(m.config().conjugate_object ? -1.0 : 1.0) {
    m.check_query(subject, relation, time);
    rel_ = compose_relation(m, relation, time);
    const PairView s = m.entity.pair(static_cast<std::size_t>(subject));
    const PairView h = rel_.hybrid.view();
    const bool attention = traits(variant_).mixing == Mixing::Attention;
    for (Geometry g : kAllGeometries) {
      const auto gi = static_cast<std::size_t>(g);
      active_[gi] = geometry_active(variant_, g);
      if (!active_[gi]) continue;
      const double k2 = unit_square(g);
      const DimRange range = geometry_range(variant_, g, dim_);
      std::vector<double>& u = u_[gi];
      std::vector<double>& rc = rcoef_[gi];
      std::vector<double>& lc = lcoef_[gi];
      u.assign(2 * dim_, 0.0);
      rc.assign(2 * dim_, 0.0);
      lc.assign(attention ? 2 * dim_ : 0, 0.0);
      for (std::size_t k = 0; k < dim_; ++k) {
        const HNum uk = hmul(g, s[k], h[k]);
        u[k] = uk.a;
        u[dim_ + k] = uk.b;
        if (range.contains(k)) {
          rc[k] = uk.a;
          rc[dim_ + k] = sign_ * k2 * uk.b;
        }
        if (attention) {
          lc[k] = h.a[k] * uk.a + h.b[k] * uk.b;
          lc[dim_ + k] = sign_ * (k2 * h.a[k] * uk.b + h.b[k] * uk.a);
        }
      }
    }
  }

  Candidate evaluate(std::span<const double> object_row) const {
    Candidate c;
    const bool attention = traits(variant_).mixing == Mixing::Attention;
    for (std::size_t g = 0; g < 3; ++g) {
      if (!active_[g]) continue;
      c.partial[g] = dot(rcoef_[g], object_row);
      if (attention) c.logit[g] = dot(lcoef_[g], object_row);
    }
    c.weight = detail::mixing_weights(variant_, attention ? softmax3(c.logit) : std::array<double, 3>{});
    for (std::size_t g = 0; g < 3; ++g) c.total += c.weight[g] * c.partial[g];
    return c;
  }

  const HybridRelation& relation() const noexcept { return rel_; }
  bool active(std::size_t g) const noexcept { return active_[g]; }
  Variant variant() const noexcept { return variant_; }
  std::size_t dim() const noexcept { return dim_; }

  /// d(partial_g)/d(object row) and d(logit_g)/d(object row), flat.
  std::span<const double> partial_coefficients(std::size_t g) const noexcept { return rcoef_[g]; }
  std::span<const double> logit_coefficients(std::size_t g) const noexcept { return lcoef_[g]; }

  /// Chain rule from the coefficient vectors back to the subject row and the
  /// hybrid relation. `partial_adjoint[g]` and `logit_adjoint[g]` are
  /// sum_j dL/dpartial_g(j) * o_j and sum_j dL/dlogit_g(j) * o_j.
  void backpropagate(const ModelState& m, EntityId subject, const std::array<std::vector<double>, 3>& partial_adjoint,
                     const std::array<std::vector<double>, 3>& logit_adjoint, std::span<double> d_subject,
                     std::span<double> d_hybrid) const {
    const PairView s = m.entity.pair(static_cast<std::size_t>(subject));
    const PairView h = rel_.hybrid.view();
    const bool attention = traits(variant_).mixing == Mixing::Attention;
    const std::size_t d = dim_;
    for (Geometry g : kAllGeometries) {
      const auto gi = static_cast<std::size_t>(g);
      if (!active_[gi]) continue;
      const double k2 = unit_square(g);
      const DimRange range = geometry_range(variant_, g, d);
      const std::vector<double>& ra = partial_adjoint[gi];
      const std::vector<double>& u = u_[gi];
      for (std::size_t k = 0; k < d; ++k) {
        double du_a = 0.0;
        double du_b = 0.0;
        if (range.contains(k)) {
          du_a += ra[k];
          du_b += sign_ * k2 * ra[d + k];
        }
        if (attention) {
          const std::vector<double>& la = logit_adjoint[gi];
          const double lo_a = la[k];
          const double lo_b = la[d + k];
          du_a += h.a[k] * lo_a + sign_ * h.b[k] * lo_b;
          du_b += h.b[k] * lo_a + sign_ * k2 * h.a[k] * lo_b;
          d_hybrid[k] += u[k] * lo_a + sign_ * k2 * u[d + k] * lo_b;
          d_hybrid[d + k] += u[d + k] * lo_a + sign_ * u[k] * lo_b;
        }
        // u = s * h in geometry g
        d_subject[k] += du_a * h.a[k] + du_b * h.b[k];
        d_subject[d + k] += k2 * du_a * h.b[k] + du_b * h.a[k];
        d_hybrid[k] += du_a * s.a[k] + du_b * s.b[k];
        d_hybrid[d + k] += k2 * du_a * s.b[k] + du_b * s.a[k];
      }
    }
  }

 private:
  std::size_t dim_;
  Variant variant_;
  double sign_;
  HybridRelation rel_;
  std::array<bool, 3> active_{};
  std::array<std::vector<double>, 3> u_;
  std::array<std::vector<double>, 3> rcoef_;
  std::array<std::vector<double>, 3> lcoef_;
};

/// Scores of (subject, relation, x, time) for every entity x.
inline std::vector<double> score_all_objects(const ModelState& m, EntityId subject, RelationId relation, TimeId time) {
  const QueryKernel kernel(m, subject, relation, time);
  std::vector<double> out(m.config().entities);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = kernel.evaluate(m.entity.row(j)).total;
  return out;
}

}  // namespace hge
