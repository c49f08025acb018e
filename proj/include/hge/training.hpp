#pragma once

// Full-softmax cross-entropy with reciprocal relations, N3 and temporal
// smoothness regularisers, analytic gradients through both attention
// mechanisms, and an Adagrad training loop.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "hge/data.hpp"
#include "hge/errors.hpp"
#include "hge/model.hpp"

namespace hge {

/// Regulariser weights grid searched over for the embedding penalty.
inline constexpr std::array<double, 8> kRegularizerGrid = {5e-4, 3e-3, 5e-3, 3e-3, 1e-3, 3e-2, 1e-2, 1e-1};

struct Regularization {
  double embedding = 0.0;  // N3 weight
  double temporal = 0.0;   // smoothness weight on consecutive time embeddings
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 200;
  std::size_t batch_size = 1000;
  Regularization reg;
  std::size_t dim = 32;
  std::uint64_t seed = 0;
  Variant variant = Variant::HgeFull;
  bool conjugate_object = true;
  double init_scale = 1e-2;
  std::size_t valid_every = 0;  // 0: validate after the last epoch only

  void validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (batch_size == 0) throw ConfigError("batch size must be positive");
    if (dim == 0) throw ConfigError("dimension must be positive");
    if (reg.embedding < 0.0 || reg.temporal < 0.0) throw ConfigError("regulariser weights must be non-negative");
    if (!(init_scale > 0.0)) throw ConfigError("init scale must be positive");
  }
};

/// Dense gradient tables shaped like the model, with per-row touch flags.
class GradientBuffer {
 public:
  GradientBuffer() = default;
  explicit GradientBuffer(const ModelState& m)
      : entity(m.entity.rows(), m.dim()),
        rel_static(m.rel_static.rows(), m.dim()),
        rel_dynamic(m.rel_dynamic.rows(), m.dim()),
        rel_weight(m.rel_weight.rows(), m.dim()),
        time(m.time.rows(), m.dim()),
        entity_touched(m.entity.rows(), 0),
        relation_touched(m.rel_static.rows(), 0),
        time_touched(m.time.rows(), 0) {}

  void clear() {
    for (EmbeddingTable* t : tables()) t->fill(0.0);
    std::fill(entity_touched.begin(), entity_touched.end(), 0);
    std::fill(relation_touched.begin(), relation_touched.end(), 0);
    std::fill(time_touched.begin(), time_touched.end(), 0);
  }

  std::array<EmbeddingTable*, 5> tables() { return {&entity, &rel_static, &rel_dynamic, &rel_weight, &time}; }
  std::array<const EmbeddingTable*, 5> tables() const {
    return {&entity, &rel_static, &rel_dynamic, &rel_weight, &time};
  }

  EmbeddingTable entity;
  EmbeddingTable rel_static;
  EmbeddingTable rel_dynamic;
  EmbeddingTable rel_weight;
  EmbeddingTable time;
  std::vector<char> entity_touched;
  std::vector<char> relation_touched;
  std::vector<char> time_touched;
};

struct LossTerms {
  double data = 0.0;
  double n3 = 0.0;
  double smoothness = 0.0;
  double total() const noexcept { return data + n3 + smoothness; }
};

namespace detail {

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

/// sum_k |z_k|^3 over a flat [a | b] row, and optionally its gradient.
inline double n3_term(std::span<const double> row, std::span<double> grad, double scale) {
  const std::size_t d = row.size() / 2;
  double acc = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double a = row[k];
    const double b = row[d + k];
    const double mod = std::sqrt(a * a + b * b);
    acc += mod * mod * mod;
    if (!grad.empty()) {
      grad[k] += scale * 3.0 * mod * a;
      grad[d + k] += scale * 3.0 * mod * b;
    }
  }
  return acc;
}

/// Back-propagate dL/d(hybrid relation) into p_s, p_c, w_p and tau.
inline void backprop_composition(const ModelState& m, RelationId r, TimeId t, const HybridRelation& rel,
                                 std::span<const double> d_hybrid, GradientBuffer& g) {
  const std::size_t d = m.dim();
  const auto ri = static_cast<std::size_t>(r);
  const auto ti = static_cast<std::size_t>(t);
  const auto ps = m.rel_static.row(ri);
  const auto pc = m.rel_dynamic.row(ri);
  const auto w = m.rel_weight.row(ri);
  const auto tau = m.time.row(ti);
  const std::vector<double> dyn = rel.dynamic.flatten();

  std::vector<double> d_dyn(2 * d, 0.0);
  auto d_ps = g.rel_static.row(ri);
  switch (traits(m.variant()).composition) {
    case Composition::Attention: {
      const double at = rel.alpha_time;
      const double as = rel.alpha_static;
      const double d_at = dot(d_hybrid, dyn);
      const double d_as = dot(d_hybrid, ps);
      const double mean = at * d_at + as * d_as;
      const double d_lt = at * (d_at - mean);
      const double d_ls = as * (d_as - mean);
      axpy(at, d_hybrid, d_dyn);
      axpy(d_lt, w, d_dyn);
      axpy(as, d_hybrid, d_ps);
      axpy(d_ls, w, d_ps);
      auto d_w = g.rel_weight.row(ri);
      axpy(d_lt, dyn, d_w);
      axpy(d_ls, ps, d_w);
      break;
    }
    case Composition::Sum:
      axpy(1.0, d_hybrid, d_dyn);
      axpy(1.0, d_hybrid, d_ps);
      break;
    case Composition::DynamicOnly:
      axpy(1.0, d_hybrid, d_dyn);
      break;
  }
  // dyn = p_c * tau (complex)
  auto d_pc = g.rel_dynamic.row(ri);
  auto d_tau = g.time.row(ti);
  for (std::size_t k = 0; k < d; ++k) {
    const double ga = d_dyn[k];
    const double gb = d_dyn[d + k];
    const double ca = pc[k], cb = pc[d + k];
    const double ta = tau[k], tb = tau[d + k];
    d_pc[k] += ga * ta + gb * tb;
    d_pc[d + k] += -ga * tb + gb * ta;
    d_tau[k] += ga * ca + gb * cb;
    d_tau[d + k] += -ga * cb + gb * ca;
  }
  g.relation_touched[ri] = 1;
  g.time_touched[ti] = 1;
}

}  // namespace detail

/// Mean cross-entropy over the batch (each fact queried in both directions)
/// plus regularisers. When `grad` is given it is cleared and filled with the
/// exact gradient of the returned total.
inline LossTerms loss_and_gradient(const ModelState& m, std::span<const Quadruple> batch, const Regularization& reg,
                                   GradientBuffer* grad) {
  if (batch.empty()) throw ConfigError("loss of an empty batch");
  if (grad != nullptr) grad->clear();
  const std::size_t n_entities = m.config().entities;
  const std::size_t d = m.dim();
  const double inv_queries = 1.0 / static_cast<double>(2 * batch.size());
  const bool attention = traits(m.variant()).mixing == Mixing::Attention;

  LossTerms loss;
  std::vector<QueryKernel::Candidate> cand(n_entities);
  std::array<std::vector<double>, 3> partial_adj;
  std::array<std::vector<double>, 3> logit_adj;
  std::vector<double> d_subject(2 * d);
  std::vector<double> d_hybrid(2 * d);

  for (const Quadruple& fact : batch) {
    m.check(fact.s, fact.p, fact.o, fact.t);
    if (static_cast<std::size_t>(fact.p) >= m.config().relations) {
      throw LookupError("training fact relation must be a base relation id");
    }
    for (int direction = 0; direction < 2; ++direction) {
      const EntityId subject = direction == 0 ? fact.s : fact.o;
      const EntityId target = direction == 0 ? fact.o : fact.s;
      const RelationId relation = direction == 0 ? fact.p : m.reciprocal(fact.p);
      const QueryKernel kernel(m, subject, relation, fact.t);

      double max_score = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < n_entities; ++j) {
        cand[j] = kernel.evaluate(m.entity.row(j));
        max_score = std::max(max_score, cand[j].total);
      }
      double sum = 0.0;
      for (std::size_t j = 0; j < n_entities; ++j) sum += std::exp(cand[j].total - max_score);
      const double lse = max_score + std::log(sum);
      loss.data += inv_queries * (lse - cand[static_cast<std::size_t>(target)].total);

      const double n3_scale = reg.embedding * inv_queries;
      const auto target_row = m.entity.row(static_cast<std::size_t>(target));
      const auto subject_row = m.entity.row(static_cast<std::size_t>(subject));
      const std::vector<double> hybrid = kernel.relation().hybrid.flatten();
      if (reg.embedding > 0.0) {
        const std::span<double> none;
        loss.n3 += n3_scale * (detail::n3_term(subject_row, none, 0.0) + detail::n3_term(hybrid, none, 0.0) +
                               detail::n3_term(target_row, none, 0.0));
      }
      if (grad == nullptr) continue;

      for (std::size_t g = 0; g < 3; ++g) {
        partial_adj[g].assign(kernel.active(g) ? 2 * d : 0, 0.0);
        logit_adj[g].assign(kernel.active(g) && attention ? 2 * d : 0, 0.0);
      }
      for (std::size_t j = 0; j < n_entities; ++j) {
        const QueryKernel::Candidate& c = cand[j];
        const double prob = std::exp(c.total - lse);
        const double g_score = inv_queries * (prob - (j == static_cast<std::size_t>(target) ? 1.0 : 0.0));
        const auto row = m.entity.row(j);
        auto g_row = grad->entity.row(j);
        for (std::size_t g = 0; g < 3; ++g) {
          if (!kernel.active(g)) continue;
          const double rho = g_score * c.weight[g];
          detail::axpy(rho, kernel.partial_coefficients(g), g_row);
          detail::axpy(rho, row, partial_adj[g]);
          if (attention) {
            const double lambda = g_score * c.weight[g] * (c.partial[g] - c.total);
            detail::axpy(lambda, kernel.logit_coefficients(g), g_row);
            detail::axpy(lambda, row, logit_adj[g]);
          }
        }
        grad->entity_touched[j] = 1;
      }
      std::fill(d_subject.begin(), d_subject.end(), 0.0);
      std::fill(d_hybrid.begin(), d_hybrid.end(), 0.0);
      kernel.backpropagate(m, subject, partial_adj, logit_adj, d_subject, d_hybrid);
      if (reg.embedding > 0.0) {
        detail::n3_term(subject_row, d_subject, n3_scale);
        detail::n3_term(hybrid, d_hybrid, n3_scale);
        detail::n3_term(target_row, grad->entity.row(static_cast<std::size_t>(target)), n3_scale);
      }
      detail::axpy(1.0, d_subject, grad->entity.row(static_cast<std::size_t>(subject)));
      detail::backprop_composition(m, relation, fact.t, kernel.relation(), d_hybrid, *grad);
    }
  }

  const std::size_t n_times = m.config().times;
  if (reg.temporal > 0.0 && n_times > 1) {
    const double scale = reg.temporal / static_cast<double>(n_times - 1);
    std::vector<double> diff(2 * d);
    std::vector<double> g_diff(2 * d);
    for (std::size_t t = 0; t + 1 < n_times; ++t) {
      const auto cur = m.time.row(t);
      const auto next = m.time.row(t + 1);
      for (std::size_t i = 0; i < 2 * d; ++i) diff[i] = next[i] - cur[i];
      std::fill(g_diff.begin(), g_diff.end(), 0.0);
      loss.smoothness += scale * detail::n3_term(diff, grad ? std::span<double>(g_diff) : std::span<double>(), scale);
      if (grad != nullptr) {
        detail::axpy(1.0, g_diff, grad->time.row(t + 1));
        detail::axpy(-1.0, g_diff, grad->time.row(t));
        grad->time_touched[t] = 1;
        grad->time_touched[t + 1] = 1;
      }
    }
  }
  return loss;
}

inline double loss(const ModelState& m, std::span<const Quadruple> batch, const Regularization& reg = {}) {
  return loss_and_gradient(m, batch, reg, nullptr).total();
}

inline GradientBuffer backward(const ModelState& m, std::span<const Quadruple> batch, const Regularization& reg = {}) {
  GradientBuffer g(m);
  loss_and_gradient(m, batch, reg, &g);
  return g;
}

/// Per-coordinate adaptive step: acc += g^2, x -= lr * g / (sqrt(acc) + eps).
class Adagrad {
 public:
  Adagrad(const ModelState& m, double learning_rate, double eps = 1e-10)
      : lr_(learning_rate), eps_(eps), acc_(m) {}

  void step(ModelState& m, const GradientBuffer& g) {
    update(m.entity, g.entity, acc_.entity, g.entity_touched);
    update(m.rel_static, g.rel_static, acc_.rel_static, g.relation_touched);
    update(m.rel_dynamic, g.rel_dynamic, acc_.rel_dynamic, g.relation_touched);
    update(m.rel_weight, g.rel_weight, acc_.rel_weight, g.relation_touched);
    update(m.time, g.time, acc_.time, g.time_touched);
  }

 private:
  void update(EmbeddingTable& param, const EmbeddingTable& grad, EmbeddingTable& acc,
              const std::vector<char>& touched) const {
    for (std::size_t r = 0; r < param.rows(); ++r) {
      if (!touched[r]) continue;
      auto x = param.row(r);
      auto gr = grad.row(r);
      auto a = acc.row(r);
      for (std::size_t i = 0; i < x.size(); ++i) {
        a[i] += gr[i] * gr[i];
        x[i] -= lr_ * gr[i] / (std::sqrt(a[i]) + eps_);
      }
    }
  }

  double lr_;
  double eps_;
  GradientBuffer acc_;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  std::optional<double> valid_mrr;
};

using Validator = std::function<double(const ModelState&)>;

/// Model sized for `ds` and configured from `cfg`.
inline ModelState make_model(const Dataset& ds, const TrainConfig& cfg) {
  ModelConfig mc;
  mc.dim = cfg.dim;
  mc.entities = ds.entities.size();
  mc.relations = ds.relations.size();
  mc.times = ds.times.size();
  mc.variant = cfg.variant;
  mc.seed = cfg.seed;
  mc.conjugate_object = cfg.conjugate_object;
  return ModelState::initialized(mc, cfg.init_scale);
}

/// Epoch source: returns the training facts for a given epoch.
using EpochFacts = std::function<std::vector<Quadruple>(std::size_t epoch, std::mt19937_64& rng)>;

inline std::vector<EpochRecord> fit(ModelState& m, const EpochFacts& facts_for_epoch, const TrainConfig& cfg,
                                    const Validator& validate = {}) {
  cfg.validate();
  std::vector<EpochRecord> trace;
  if (cfg.epochs == 0) return trace;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  Adagrad opt(m, cfg.learning_rate);
  GradientBuffer grad(m);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<Quadruple> facts = facts_for_epoch(epoch, rng);
    if (facts.empty()) throw ConfigError("no training facts");
    std::shuffle(facts.begin(), facts.end(), rng);
    double weighted = 0.0;
    for (std::size_t start = 0; start < facts.size(); start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, facts.size() - start);
      const std::span<const Quadruple> batch(facts.data() + start, count);
      const LossTerms terms = loss_and_gradient(m, batch, cfg.reg, &grad);
      const double total = terms.total();
      if (!std::isfinite(total)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch) + ", batch starting at fact " +
                            std::to_string(start) + " (data " + std::to_string(terms.data) + ", n3 " +
                            std::to_string(terms.n3) + ", smoothness " + std::to_string(terms.smoothness) + ")");
      }
      weighted += total * static_cast<double>(count);
      opt.step(m, grad);
    }
    EpochRecord rec{epoch, weighted / static_cast<double>(facts.size()), std::nullopt};
    const bool due = cfg.valid_every == 0 ? epoch == cfg.epochs : (epoch % cfg.valid_every == 0 || epoch == cfg.epochs);
    if (validate && due) rec.valid_mrr = validate(m);
    trace.push_back(rec);
  }
  return trace;
}

inline std::vector<EpochRecord> fit(ModelState& m, std::span<const Quadruple> train, const TrainConfig& cfg,
                                    const Validator& validate = {}) {
  std::vector<Quadruple> facts(train.begin(), train.end());
  return fit(m, [&](std::size_t, std::mt19937_64&) { return facts; }, cfg, validate);
}

/// Interval facts are re-sampled to a uniform time point inside their
/// (normalised) interval every epoch.
inline std::vector<EpochRecord> fit(ModelState& m, const Dataset& ds, const TrainConfig& cfg,
                                    const Validator& validate = {}) {
  if (ds.entities.size() != m.config().entities || ds.relations.size() != m.config().relations ||
      ds.times.size() != m.config().times) {
    throw ConfigError("dataset vocabulary does not match model tables");
  }
  if (!ds.interval) {
    const auto facts = ds.quadruples(Split::Train);
    return fit(m, facts, cfg, validate);
  }
  return fit(
      m,
      [&](std::size_t, std::mt19937_64& rng) {
        std::vector<Quadruple> out;
        out.reserve(ds.train.size());
        for (const Fact& f : ds.train) {
          const TimeInterval iv = ds.normalized(f.time);
          std::uniform_int_distribution<TimeId> pick(*iv.begin, *iv.end);
          out.push_back({f.s, f.p, f.o, pick(rng)});
        }
        return out;
      },
      cfg, validate);
}

}  // namespace hge
