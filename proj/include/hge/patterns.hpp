#pragma once

// Logical and structural temporal pattern census over point-time facts.
//
// Counting conventions (each kind reports ordered and unordered counts):
//   STATIC_SYMMETRIC    (s,p,o,t),(o,p,s,t), s != o
//   STATIC_INVERSE      (s,p1,o,t),(o,p2,s,t), p1 != p2, s != o
//   DYNAMIC_SYMMETRIC   (s,p,o,t1),(o,p,s,t2), t1 != t2, s != o
//   DYNAMIC_INVERSE     (s,p1,o,t1),(o,p2,s,t2), p1 != p2, t1 != t2, s != o
//   DYNAMIC_EVOLVE      (s,p1,o,t1),(s,p2,o,t2), p1 != p2, t1 < t2
//   TEMPORAL_HIERARCHY  (v1,p,v2,t1),(v2,p,v3,t2), t1 < t2, v1 v2 v3 distinct
//   TEMPORAL_STAR(n)    hubs (s,p) reaching n distinct objects at n distinct,
//                       hence orderable, times
//   TEMPORARY           triples (s,p,o) with an occurrence t1 that has a
//                       non-occurrence strictly before and strictly after it
// For the four two-way kinds "ordered" counts ordered fact pairs and
// "unordered" is half of it. For the directional kinds both are equal.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hge/data.hpp"
#include "hge/errors.hpp"
#include "hge/types.hpp"

namespace hge {

enum class PatternKind : std::uint8_t {
  StaticSymmetric,
  StaticInverse,
  DynamicSymmetric,
  DynamicInverse,
  DynamicEvolve,
  Temporary,
  TemporalStar,
  TemporalHierarchy,
};

inline constexpr std::array<PatternKind, 8> kAllPatternKinds = {
    PatternKind::StaticSymmetric, PatternKind::StaticInverse, PatternKind::DynamicSymmetric,
    PatternKind::DynamicInverse,  PatternKind::DynamicEvolve, PatternKind::Temporary,
    PatternKind::TemporalStar,    PatternKind::TemporalHierarchy};

inline std::string pattern_name(PatternKind k, std::size_t star_size = 0) {
  switch (k) {
    case PatternKind::StaticSymmetric: return "STATIC_SYMMETRIC";
    case PatternKind::StaticInverse: return "STATIC_INVERSE";
    case PatternKind::DynamicSymmetric: return "DYNAMIC_SYMMETRIC";
    case PatternKind::DynamicInverse: return "DYNAMIC_INVERSE";
    case PatternKind::DynamicEvolve: return "DYNAMIC_EVOLVE";
    case PatternKind::Temporary: return "TEMPORARY";
    case PatternKind::TemporalStar: return "TEMPORAL_STAR(" + std::to_string(star_size) + ")";
    case PatternKind::TemporalHierarchy: return "TEMPORAL_HIERARCHY";
  }
  return "?";
}

inline PatternKind parse_pattern_kind(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (text.rfind("TEMPORAL_STAR", 0) == 0) return PatternKind::TemporalStar;
  for (PatternKind k : kAllPatternKinds) {
    if (pattern_name(k) == text) return k;
  }
  throw ConfigError("unknown pattern kind '" + text + "'");
}

struct PatternCount {
  PatternKind kind = PatternKind::StaticSymmetric;
  std::size_t star_size = 0;
  std::uint64_t ordered = 0;
  std::uint64_t unordered = 0;
  std::vector<std::vector<Quadruple>> examples;
};

struct PatternOptions {
  std::size_t star_size = 3;
  std::size_t max_examples = 3;
  // Interval facts are only accepted when reduced to their begin points.
  bool reduce_intervals = false;
};

/// Point facts of the selected splits, sorted and deduplicated.
inline std::vector<Quadruple> pattern_facts(const Dataset& ds, std::initializer_list<Split> splits,
                                            bool reduce_intervals) {
  if (ds.interval && !reduce_intervals) {
    throw DataError("interval dataset: pattern counting needs intervals reduced to begin points");
  }
  std::vector<Quadruple> out;
  for (Split s : splits) {
    const auto part = ds.interval ? ds.begin_points(s) : ds.quadruples(s);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Hash-join indices over a deduplicated fact list.
class PatternIndex {
 public:
  PatternIndex(std::vector<Quadruple> facts, TimeId last_time) : facts_(std::move(facts)), last_time_(last_time) {
    std::sort(facts_.begin(), facts_.end());
    facts_.erase(std::unique(facts_.begin(), facts_.end()), facts_.end());
    for (const Quadruple& f : facts_) {
      if (f.s < 0 || f.p < 0 || f.o < 0 || f.t < 0) throw DataError("negative id in pattern facts");
      last_time_ = std::max(last_time_, f.t);
      triple_times_[triple_key(f.s, f.p, f.o)].push_back(f.t);
      pair_facts_[pair_key(f.s, f.o)].push_back(f);
      pair_times_[pair_key(f.s, f.o)].push_back(f.t);
      hub_facts_[pair_key(f.s, f.p)].push_back(f);
      incoming_[pair_key(f.o, f.p)].push_back(f);
      ++pair_time_count_[triple_key(f.s, f.o, f.t)];
    }
    // facts_ is sorted by (s, p, o, t), so triple time lists are sorted.
    for (auto& [k, v] : pair_times_) std::sort(v.begin(), v.end());
    for (auto& [k, v] : hub_facts_) {
      std::sort(v.begin(), v.end(), [](const Quadruple& x, const Quadruple& y) { return x.t < y.t; });
    }
  }

  const std::vector<Quadruple>& facts() const noexcept { return facts_; }
  TimeId last_time() const noexcept { return last_time_; }

  bool contains(const Quadruple& q) const {
    const auto* ts = times(q.s, q.p, q.o);
    return ts != nullptr && std::binary_search(ts->begin(), ts->end(), q.t);
  }

  PatternCount count(PatternKind kind, const PatternOptions& opt = {}) const {
    PatternCount out;
    out.kind = kind;
    out.star_size = kind == PatternKind::TemporalStar ? opt.star_size : 0;
    switch (kind) {
      case PatternKind::StaticSymmetric:
      case PatternKind::StaticInverse:
      case PatternKind::DynamicSymmetric:
      case PatternKind::DynamicInverse:
        count_two_way(kind, opt, out);
        out.unordered = out.ordered / 2;
        break;
      case PatternKind::DynamicEvolve:
      case PatternKind::TemporalHierarchy:
        count_directional(kind, opt, out);
        out.unordered = out.ordered;
        break;
      case PatternKind::Temporary:
        for (const auto& [key, ts] : triple_times_) {
          if (temporary_occurrence(ts).has_value()) ++out.ordered;
        }
        out.unordered = out.ordered;
        collect_temporary_examples(opt, out);
        break;
      case PatternKind::TemporalStar: {
        std::vector<std::uint64_t> hubs;
        for (const auto& [key, fs] : hub_facts_) {
          if (star_matching(fs, opt.star_size) >= opt.star_size) hubs.push_back(key);
        }
        out.ordered = out.unordered = hubs.size();
        std::sort(hubs.begin(), hubs.end());
        for (std::size_t i = 0; i < hubs.size() && out.examples.size() < opt.max_examples; ++i) {
          out.examples.push_back(star_witness(hub_facts_.at(hubs[i]), opt.star_size));
        }
        break;
      }
    }
    return out;
  }

  /// True when fact f takes part in at least one instance of `kind`.
  bool participates(const Quadruple& f, PatternKind kind, std::size_t star_size) const {
    switch (kind) {
      case PatternKind::StaticSymmetric:
      case PatternKind::StaticInverse:
      case PatternKind::DynamicSymmetric:
      case PatternKind::DynamicInverse:
        return two_way_partners(f, kind) > 0;
      case PatternKind::DynamicEvolve:
        return evolve_after(f) > 0 || evolve_before(f) > 0;
      case PatternKind::TemporalHierarchy:
        return hierarchy_after(f) > 0 || hierarchy_before(f);
      case PatternKind::Temporary: {
        const auto* ts = times(f.s, f.p, f.o);
        if (ts == nullptr || !std::binary_search(ts->begin(), ts->end(), f.t)) return false;
        const auto i = static_cast<std::size_t>(std::lower_bound(ts->begin(), ts->end(), f.t) - ts->begin());
        return temporary_at(*ts, i);
      }
      case PatternKind::TemporalStar: {
        auto it = hub_facts_.find(pair_key(f.s, f.p));
        return it != hub_facts_.end() && contains(f) && star_matching(it->second, star_size) >= star_size;
      }
    }
    return false;
  }

 private:
  static std::uint64_t triple_key(std::int64_t a, std::int64_t b, std::int64_t c) {
    check_width(a, 24);
    check_width(b, 16);
    check_width(c, 24);
    return (static_cast<std::uint64_t>(a) << 40) | (static_cast<std::uint64_t>(b) << 24) | static_cast<std::uint64_t>(c);
  }
  static std::uint64_t pair_key(std::int64_t a, std::int64_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }
  static void check_width(std::int64_t v, int bits) {
    if (v >= (std::int64_t{1} << bits)) throw DataError("id too large for the pattern index");
  }

  const std::vector<TimeId>* times(EntityId s, RelationId p, EntityId o) const {
    auto it = triple_times_.find(triple_key(s, p, o));
    return it == triple_times_.end() ? nullptr : &it->second;
  }
  std::size_t triple_count(EntityId s, RelationId p, EntityId o) const {
    const auto* ts = times(s, p, o);
    return ts == nullptr ? 0 : ts->size();
  }
  std::size_t pair_count(EntityId s, EntityId o) const {
    auto it = pair_times_.find(pair_key(s, o));
    return it == pair_times_.end() ? 0 : it->second.size();
  }
  std::size_t pair_time_count(EntityId s, EntityId o, TimeId t) const {
    auto it = pair_time_count_.find(triple_key(s, o, t));
    return it == pair_time_count_.end() ? 0 : it->second;
  }
  static std::size_t count_after(const std::vector<TimeId>& sorted, TimeId t) {
    return static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
  }
  static std::size_t count_before(const std::vector<TimeId>& sorted, TimeId t) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
  }

  static bool two_way_match(PatternKind kind, const Quadruple& f, const Quadruple& g) {
    if (f.s == f.o || g.s != f.o || g.o != f.s) return false;
    switch (kind) {
      case PatternKind::StaticSymmetric: return g.p == f.p && g.t == f.t;
      case PatternKind::StaticInverse: return g.p != f.p && g.t == f.t;
      case PatternKind::DynamicSymmetric: return g.p == f.p && g.t != f.t;
      case PatternKind::DynamicInverse: return g.p != f.p && g.t != f.t;
      default: return false;
    }
  }

  /// Number of facts g completing a two-way instance with f as first fact.
  std::uint64_t two_way_partners(const Quadruple& f, PatternKind kind) const {
    if (f.s == f.o) return 0;
    const bool mirror = contains({f.o, f.p, f.s, f.t});
    switch (kind) {
      case PatternKind::StaticSymmetric: return mirror ? 1 : 0;
      case PatternKind::StaticInverse: return pair_time_count(f.o, f.s, f.t) - (mirror ? 1 : 0);
      case PatternKind::DynamicSymmetric: return triple_count(f.o, f.p, f.s) - (mirror ? 1 : 0);
      case PatternKind::DynamicInverse:
        return pair_count(f.o, f.s) - triple_count(f.o, f.p, f.s) - pair_time_count(f.o, f.s, f.t) + (mirror ? 1 : 0);
      default: return 0;
    }
  }

  void count_two_way(PatternKind kind, const PatternOptions& opt, PatternCount& out) const {
    for (const Quadruple& f : facts_) {
      const std::uint64_t n = two_way_partners(f, kind);
      out.ordered += n;
      if (n == 0 || out.examples.size() >= opt.max_examples || f.s > f.o) continue;
      for (const Quadruple& g : pair_facts_.at(pair_key(f.o, f.s))) {
        if (two_way_match(kind, f, g)) {
          out.examples.push_back({f, g});
          break;
        }
      }
    }
  }

  std::uint64_t evolve_after(const Quadruple& f) const {
    return count_after(pair_times_.at(pair_key(f.s, f.o)), f.t) - count_after(*times(f.s, f.p, f.o), f.t);
  }
  std::uint64_t evolve_before(const Quadruple& f) const {
    return count_before(pair_times_.at(pair_key(f.s, f.o)), f.t) - count_before(*times(f.s, f.p, f.o), f.t);
  }

  /// Chains with f = (v1, p, v2, t1) as first link.
  std::uint64_t hierarchy_after(const Quadruple& f) const {
    if (f.s == f.o) return 0;
    auto it = hub_facts_.find(pair_key(f.o, f.p));
    if (it == hub_facts_.end()) return 0;
    const auto& out_facts = it->second;
    const auto later = static_cast<std::uint64_t>(
        out_facts.end() - std::upper_bound(out_facts.begin(), out_facts.end(), f.t,
                                           [](TimeId t, const Quadruple& q) { return t < q.t; }));
    std::uint64_t excluded = 0;
    if (const auto* ts = times(f.o, f.p, f.s)) excluded += count_after(*ts, f.t);
    if (const auto* ts = times(f.o, f.p, f.o)) excluded += count_after(*ts, f.t);
    return later - excluded;
  }
  /// Whether some (v1, p, v2, t1) with t1 < f.t precedes f = (v2, p, v3, t2).
  bool hierarchy_before(const Quadruple& f) const {
    if (f.s == f.o) return false;
    auto it = incoming_.find(pair_key(f.s, f.p));
    if (it == incoming_.end()) return false;
    for (const Quadruple& g : it->second) {
      if (g.t < f.t && g.s != f.s && g.s != f.o) return true;
    }
    return false;
  }

  void count_directional(PatternKind kind, const PatternOptions& opt, PatternCount& out) const {
    for (const Quadruple& f : facts_) {
      const std::uint64_t n = kind == PatternKind::DynamicEvolve ? evolve_after(f) : hierarchy_after(f);
      out.ordered += n;
      if (n == 0 || out.examples.size() >= opt.max_examples) continue;
      const std::vector<Quadruple>& pool =
          kind == PatternKind::DynamicEvolve ? pair_facts_.at(pair_key(f.s, f.o)) : hub_facts_.at(pair_key(f.o, f.p));
      for (const Quadruple& g : pool) {
        const bool ok = kind == PatternKind::DynamicEvolve ? (g.p != f.p && g.t > f.t)
                                                           : (g.t > f.t && g.o != f.s && g.o != f.o);
        if (ok) {
          out.examples.push_back({f, g});
          break;
        }
      }
    }
  }

  // Occurrence i of a sorted unique time list is temporary when some time
  // before it and some time after it (within [0, last]) is absent.
  bool temporary_at(const std::vector<TimeId>& ts, std::size_t i) const {
    const TimeId t = ts[i];
    const bool gap_before = static_cast<std::size_t>(t) > i;
    const bool gap_after = static_cast<std::size_t>(last_time_ - t) > ts.size() - 1 - i;
    return gap_before && gap_after;
  }
  std::optional<std::size_t> temporary_occurrence(const std::vector<TimeId>& ts) const {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (temporary_at(ts, i)) return i;
    }
    return std::nullopt;
  }
  void collect_temporary_examples(const PatternOptions& opt, PatternCount& out) const {
    for (std::size_t i = 0; i < facts_.size() && out.examples.size() < opt.max_examples; ++i) {
      const Quadruple& f = facts_[i];
      if (i > 0 && facts_[i - 1].s == f.s && facts_[i - 1].p == f.p && facts_[i - 1].o == f.o) continue;
      const auto& ts = *times(f.s, f.p, f.o);
      if (auto k = temporary_occurrence(ts)) out.examples.push_back({{f.s, f.p, f.o, ts[*k]}});
    }
  }

  // Maximum matching between distinct objects and distinct times of one hub,
  // stopping once `target` is reached.
  static std::size_t star_matching(const std::vector<Quadruple>& fs, std::size_t target,
                                   std::vector<std::pair<EntityId, TimeId>>* pairs = nullptr) {
    std::vector<EntityId> objects;
    std::vector<TimeId> time_ids;
    for (const Quadruple& f : fs) {
      objects.push_back(f.o);
      time_ids.push_back(f.t);
    }
    std::sort(objects.begin(), objects.end());
    objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
    std::sort(time_ids.begin(), time_ids.end());
    time_ids.erase(std::unique(time_ids.begin(), time_ids.end()), time_ids.end());
    if (std::min(objects.size(), time_ids.size()) < target) return std::min(objects.size(), time_ids.size());

    std::vector<std::vector<std::size_t>> adj(objects.size());
    for (const Quadruple& f : fs) {
      const auto oi = static_cast<std::size_t>(std::lower_bound(objects.begin(), objects.end(), f.o) - objects.begin());
      const auto ti =
          static_cast<std::size_t>(std::lower_bound(time_ids.begin(), time_ids.end(), f.t) - time_ids.begin());
      adj[oi].push_back(ti);
    }
    std::vector<long> match_time(time_ids.size(), -1);
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t u) {
      for (std::size_t t : adj[u]) {
        if (seen[t]) continue;
        seen[t] = 1;
        if (match_time[t] < 0 || augment(static_cast<std::size_t>(match_time[t]))) {
          match_time[t] = static_cast<long>(u);
          return true;
        }
      }
      return false;
    };
    std::size_t size = 0;
    for (std::size_t u = 0; u < objects.size() && size < target; ++u) {
      seen.assign(time_ids.size(), 0);
      if (augment(u)) ++size;
    }
    if (pairs != nullptr) {
      for (std::size_t t = 0; t < time_ids.size(); ++t) {
        if (match_time[t] >= 0) pairs->emplace_back(objects[static_cast<std::size_t>(match_time[t])], time_ids[t]);
      }
    }
    return size;
  }
  static std::vector<Quadruple> star_witness(const std::vector<Quadruple>& fs, std::size_t n) {
    std::vector<std::pair<EntityId, TimeId>> pairs;
    star_matching(fs, n, &pairs);
    std::vector<Quadruple> out;
    for (const auto& [o, t] : pairs) out.push_back({fs.front().s, fs.front().p, o, t});
    std::sort(out.begin(), out.end(), [](const Quadruple& x, const Quadruple& y) { return x.t < y.t; });
    if (out.size() > n) out.resize(n);
    return out;
  }

  std::vector<Quadruple> facts_;
  TimeId last_time_ = 0;
  std::unordered_map<std::uint64_t, std::vector<TimeId>> triple_times_;
  std::unordered_map<std::uint64_t, std::vector<Quadruple>> pair_facts_;
  std::unordered_map<std::uint64_t, std::vector<TimeId>> pair_times_;
  std::unordered_map<std::uint64_t, std::vector<Quadruple>> hub_facts_;
  std::unordered_map<std::uint64_t, std::vector<Quadruple>> incoming_;
  std::unordered_map<std::uint64_t, std::uint32_t> pair_time_count_;
};

inline PatternCount count_pattern(std::span<const Quadruple> facts, PatternKind kind, const PatternOptions& opt = {},
                                  TimeId last_time = 0) {
  return PatternIndex(std::vector<Quadruple>(facts.begin(), facts.end()), last_time).count(kind, opt);
}

/// Census over the train split (the convention for reported statistics).
inline PatternCount count_pattern(const Dataset& ds, PatternKind kind, const PatternOptions& opt = {}) {
  return PatternIndex(pattern_facts(ds, {Split::Train}, opt.reduce_intervals), ds.last_time()).count(kind, opt);
}

struct PatternCensus {
  std::vector<PatternCount> counts;
};

inline PatternCensus pattern_census(const PatternIndex& index, const PatternOptions& opt = {}) {
  PatternCensus c;
  for (PatternKind k : kAllPatternKinds) c.counts.push_back(index.count(k, opt));
  return c;
}

inline PatternCensus pattern_census(const Dataset& ds, const PatternOptions& opt = {}) {
  return pattern_census(PatternIndex(pattern_facts(ds, {Split::Train}, opt.reduce_intervals), ds.last_time()), opt);
}

/// Test facts taking part in the pattern, judged against every split.
inline std::vector<Quadruple> extract_subset(const Dataset& ds, PatternKind kind, const PatternOptions& opt = {}) {
  const PatternIndex full(pattern_facts(ds, {Split::Train, Split::Valid, Split::Test}, opt.reduce_intervals),
                          ds.last_time());
  std::vector<Quadruple> out;
  for (const Quadruple& f : pattern_facts(ds, {Split::Test}, opt.reduce_intervals)) {
    if (full.participates(f, kind, opt.star_size)) out.push_back(f);
  }
  return out;
}

namespace detail {

inline std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_instance(const std::vector<Quadruple>& inst, const Dataset* names) {
  std::ostringstream os;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    const Quadruple& q = inst[i];
    if (i > 0) os << "; ";
    if (names != nullptr) {
      os << '(' << names->entities.name(q.s) << ", " << names->relations.name(q.p) << ", "
         << names->entities.name(q.o) << ", " << names->times.name(q.t) << ')';
    } else {
      os << '(' << q.s << ", " << q.p << ", " << q.o << ", " << q.t << ')';
    }
  }
  return os.str();
}

}  // namespace detail

/// CSV with columns kind, ordered_count, unordered_count, example.
inline std::string census_csv(const PatternCensus& census, const Dataset* names = nullptr) {
  std::ostringstream os;
  os << "kind,ordered_count,unordered_count,example\n";
  for (const PatternCount& c : census.counts) {
    const std::string example = c.examples.empty() ? "" : detail::format_instance(c.examples.front(), names);
    os << detail::csv_field(pattern_name(c.kind, c.star_size)) << ',' << c.ordered << ',' << c.unordered << ','
       << detail::csv_field(example) << '\n';
  }
  return os.str();
}

/// Subset written in the point-time TSV layout.
inline void write_subset(const std::string& path, const std::vector<Quadruple>& subset, const Dataset& names) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  for (const Quadruple& q : subset) {
    out << names.entities.name(q.s) << '\t' << names.relations.name(q.p) << '\t' << names.entities.name(q.o) << '\t'
        << names.times.name(q.t) << '\n';
  }
}

}  // namespace hge
