#pragma once

// Time-aware filtered link prediction: ranks, interval time sampling and
// MRR / Hits@k aggregation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hge/data.hpp"
#include "hge/errors.hpp"
#include "hge/model.hpp"

namespace hge {

enum class Side : std::uint8_t { Subject, Object };

enum class SideSelection : std::uint8_t { Subject, Object, Both };

inline SideSelection parse_sides(const std::string& text) {
  if (text == "subject") return SideSelection::Subject;
  if (text == "object") return SideSelection::Object;
  if (text == "both") return SideSelection::Both;
  throw ConfigError("sides must be subject, object or both");
}

/// Every known fact, looked up by (entity, relation) from either end.
class FilterIndex {
 public:
  struct Entry {
    EntityId other;
    TimeInterval time;
  };

  FilterIndex() = default;

  void add(const Fact& f) {
    by_subject_[key(f.s, f.p)].push_back({f.o, f.time});
    by_object_[key(f.o, f.p)].push_back({f.s, f.time});
    ++size_;
  }
  void add(const Quadruple& q) { add(Fact{q.s, q.p, q.o, TimeInterval::point(q.t)}); }

  static FilterIndex from_dataset(const Dataset& ds) {
    FilterIndex idx;
    for (Split s : kAllSplits) {
      for (const Fact& f : ds.split(s)) idx.add(f);
    }
    return idx;
  }

  /// Entities x such that (s, p, x, t) (side Object) or (x, p, o, t) (side
  /// Subject) is a known fact at time t.
  std::vector<EntityId> known(Side side, EntityId anchor, RelationId p, TimeId t) const {
    const auto& map = side == Side::Object ? by_subject_ : by_object_;
    std::vector<EntityId> out;
    auto it = map.find(key(anchor, p));
    if (it == map.end()) return out;
    for (const Entry& e : it->second) {
      if (e.time.contains(t)) out.push_back(e.other);
    }
    return out;
  }

  bool contains(const Quadruple& q) const {
    for (EntityId o : known(Side::Object, q.s, q.p, q.t)) {
      if (o == q.o) return true;
    }
    return false;
  }

  std::size_t size() const noexcept { return size_; }

 private:
  static std::uint64_t key(EntityId e, RelationId p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e)) << 32) | static_cast<std::uint32_t>(p);
  }

  std::unordered_map<std::uint64_t, std::vector<Entry>> by_subject_;
  std::unordered_map<std::uint64_t, std::vector<Entry>> by_object_;
  std::size_t size_ = 0;
};

struct RankResult {
  std::size_t filtered = 0;
  std::size_t raw = 0;
};

/// 1 + #(strictly greater) + floor((#equal - 1) / 2), where #equal counts the
/// answer itself. Scores flagged in `excluded` are ignored.
inline std::size_t mid_rank(const std::vector<double>& scores, std::size_t answer, const std::vector<char>* excluded) {
  const double target = scores[answer];
  std::size_t greater = 0;
  std::size_t equal = 0;
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (excluded != nullptr && (*excluded)[j]) continue;
    if (scores[j] > target) ++greater;
    else if (scores[j] == target) ++equal;
  }
  return 1 + greater + (equal - 1) / 2;
}

/// Subject-side queries are answered through the reciprocal relation:
/// (?, p, o, t) is scored as (o, p^-1, ?, t).
inline std::vector<double> candidate_scores(const ModelState& m, const Quadruple& q, Side side) {
  if (q.p < 0 || static_cast<std::size_t>(q.p) >= m.config().relations) {
    throw LookupError("query relation must be a base relation id");
  }
  return side == Side::Object ? score_all_objects(m, q.s, q.p, q.t)
                              : score_all_objects(m, q.o, m.reciprocal(q.p), q.t);
}

inline RankResult rank_query(const ModelState& m, const Quadruple& q, Side side, const FilterIndex& filter) {
  const std::vector<double> scores = candidate_scores(m, q, side);
  const EntityId answer = side == Side::Object ? q.o : q.s;
  const EntityId anchor = side == Side::Object ? q.s : q.o;
  std::vector<char> excluded(scores.size(), 0);
  for (EntityId e : filter.known(side, anchor, q.p, q.t)) {
    if (e != answer) excluded[static_cast<std::size_t>(e)] = 1;
  }
  const auto a = static_cast<std::size_t>(answer);
  return {mid_rank(scores, a, &excluded), mid_rank(scores, a, nullptr)};
}

/// Uniform draw among the dataset time points inside the normalised interval.
inline TimeId sample_interval_time(const TimeInterval& interval, const Dataset& ds, std::mt19937_64& rng) {
  const TimeInterval iv = ds.normalized(interval);
  const TimeId lo = std::max<TimeId>(*iv.begin, 0);
  const TimeId hi = std::min<TimeId>(*iv.end, ds.last_time());
  if (lo > hi) throw DataError("no dataset time point inside the interval");
  return std::uniform_int_distribution<TimeId>(lo, hi)(rng);
}

/// Point queries for a split; interval facts get one sampled time each.
inline std::vector<Quadruple> evaluation_queries(const Dataset& ds, Split split, std::uint64_t seed) {
  if (!ds.interval) return ds.quadruples(split);
  std::mt19937_64 rng(seed);
  std::vector<Quadruple> out;
  out.reserve(ds.split(split).size());
  for (const Fact& f : ds.split(split)) out.push_back({f.s, f.p, f.o, sample_interval_time(f.time, ds, rng)});
  return out;
}

struct RankedQuery {
  Quadruple query;
  Side side;
  std::size_t rank;
};

struct RankingReport {
  std::vector<RankedQuery> ranks;
  double mrr = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  std::size_t queries = 0;

  std::string summary() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "queries=%zu MRR=%.4f Hits@1=%.4f Hits@3=%.4f Hits@10=%.4f", queries, mrr, hits1,
                  hits3, hits10);
    return buf;
  }
};

/// Aggregates over pooled ranks (each side of each fact is one query).
inline void aggregate(RankingReport& r) {
  r.queries = r.ranks.size();
  double rr = 0.0;
  std::size_t h1 = 0, h3 = 0, h10 = 0;
  for (const RankedQuery& q : r.ranks) {
    rr += 1.0 / static_cast<double>(q.rank);
    h1 += q.rank <= 1;
    h3 += q.rank <= 3;
    h10 += q.rank <= 10;
  }
  const double n = r.queries == 0 ? 1.0 : static_cast<double>(r.queries);
  r.mrr = rr / n;
  r.hits1 = static_cast<double>(h1) / n;
  r.hits3 = static_cast<double>(h3) / n;
  r.hits10 = static_cast<double>(h10) / n;
}

inline RankingReport evaluate(const ModelState& m, const std::vector<Quadruple>& queries, const FilterIndex& filter,
                              SideSelection sides = SideSelection::Both, unsigned threads = 1) {
  std::vector<Side> side_list;
  if (sides != SideSelection::Subject) side_list.push_back(Side::Object);
  if (sides != SideSelection::Object) side_list.push_back(Side::Subject);

  RankingReport report;
  report.ranks.resize(queries.size() * side_list.size());
  auto work = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      const Quadruple& q = queries[i / side_list.size()];
      const Side side = side_list[i % side_list.size()];
      report.ranks[i] = {q, side, rank_query(m, q, side, filter).filtered};
    }
  };
  const std::size_t n = report.ranks.size();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t first = std::min(n, t * chunk);
      const std::size_t last = std::min(n, first + chunk);
      pool.emplace_back(work, first, last);
    }
    for (auto& th : pool) th.join();
  }
  aggregate(report);
  return report;
}

inline nlohmann::json report_json(const RankingReport& r, const Dataset* names = nullptr, bool per_query = false) {
  nlohmann::json j{{"mrr", r.mrr},
                   {"hits@1", r.hits1},
                   {"hits@3", r.hits3},
                   {"hits@10", r.hits10},
                   {"queries", r.queries},
                   {"tie_breaking", "mid-rank: 1 + greater + floor((equal - 1) / 2)"},
                   {"pooling", "subject-side and object-side queries pooled; each side is one query"},
                   {"filter", "time-aware: other true answers at the query timestamp removed"}};
  if (per_query) {
    auto& arr = j["ranks"] = nlohmann::json::array();
    for (const RankedQuery& q : r.ranks) {
      nlohmann::json row{{"side", q.side == Side::Object ? "object" : "subject"}, {"rank", q.rank}};
      if (names != nullptr) {
        row["s"] = names->entities.name(q.query.s);
        row["p"] = names->relations.name(q.query.p);
        row["o"] = names->entities.name(q.query.o);
        row["t"] = names->times.name(q.query.t);
      } else {
        row["s"] = q.query.s;
        row["p"] = q.query.p;
        row["o"] = q.query.o;
        row["t"] = q.query.t;
      }
      arr.push_back(std::move(row));
    }
  }
  return j;
}

}  // namespace hge
