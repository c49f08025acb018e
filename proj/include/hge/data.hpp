#pragma once

// Temporal knowledge graph datasets: TSV ingestion for time-point and
// time-interval benchmarks, sorted vocabularies, Allen interval relations and
// dataset statistics.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hge/errors.hpp"
#include "hge/types.hpp"

namespace hge {

/// Closed interval of time ids; a missing end is open on that side.
struct TimeInterval {
  std::optional<TimeId> begin;
  std::optional<TimeId> end;

  static TimeInterval point(TimeId t) { return {t, t}; }

  bool bounded() const noexcept { return begin.has_value() && end.has_value(); }
  bool is_point() const noexcept { return bounded() && *begin == *end; }
  bool contains(TimeId t) const noexcept {
    return (!begin || *begin <= t) && (!end || t <= *end);
  }
  bool operator==(const TimeInterval&) const = default;
};

struct Fact {
  EntityId s = 0;
  RelationId p = 0;
  EntityId o = 0;
  TimeInterval time;

  bool operator==(const Fact&) const = default;
};

enum class Split : std::uint8_t { Train, Valid, Test };

inline constexpr std::array<Split, 3> kAllSplits = {Split::Train, Split::Valid, Split::Test};

inline std::string_view split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Valid: return "valid";
    case Split::Test: return "test";
  }
  return "?";
}

class Vocabulary {
 public:
  Vocabulary() = default;

  /// Ids follow the order of `names`, which must be unique.
  explicit Vocabulary(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (!index_.emplace(names_[i], static_cast<std::int32_t>(i)).second) {
        throw DataError("duplicate vocabulary entry '" + names_[i] + "'");
      }
    }
  }

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::int32_t id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= names_.size()) throw LookupError("vocabulary id out of range");
    return names_[static_cast<std::size_t>(id)];
  }
  std::int32_t id(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw LookupError("unknown vocabulary entry '" + name + "'");
    return it->second;
  }
  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool operator==(const Vocabulary& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::int32_t> index_;
};

struct DatasetStats {
  std::size_t entities = 0;
  std::size_t relations = 0;
  std::size_t times = 0;
  std::size_t train = 0;
  std::size_t valid = 0;
  std::size_t test = 0;

  bool operator==(const DatasetStats&) const = default;
};

class Dataset {
 public:
  Vocabulary entities;
  Vocabulary relations;
  Vocabulary times;
  std::vector<Fact> train;
  std::vector<Fact> valid;
  std::vector<Fact> test;
  bool interval = false;

  const std::vector<Fact>& split(Split s) const {
    switch (s) {
      case Split::Train: return train;
      case Split::Valid: return valid;
      case Split::Test: return test;
    }
    return train;
  }
  std::vector<Fact>& split(Split s) { return const_cast<std::vector<Fact>&>(std::as_const(*this).split(s)); }

  TimeId last_time() const noexcept { return static_cast<TimeId>(times.size()) - 1; }

  /// Open ends replaced by the first / last dataset time point.
  TimeInterval normalized(const TimeInterval& iv) const {
    return {iv.begin.value_or(0), iv.end.value_or(last_time())};
  }

  /// Point facts of a split; throws if any fact spans more than one point.
  std::vector<Quadruple> quadruples(Split s) const {
    std::vector<Quadruple> out;
    out.reserve(split(s).size());
    for (const Fact& f : split(s)) {
      if (!f.time.is_point()) throw DataError("split holds interval facts; reduce or sample them first");
      out.push_back({f.s, f.p, f.o, *f.time.begin});
    }
    return out;
  }

  /// Every fact reduced to its (normalised) begin point.
  std::vector<Quadruple> begin_points(Split s) const {
    std::vector<Quadruple> out;
    out.reserve(split(s).size());
    for (const Fact& f : split(s)) out.push_back({f.s, f.p, f.o, *normalized(f.time).begin});
    return out;
  }

  std::vector<Fact> all_facts() const {
    std::vector<Fact> out(train);
    out.insert(out.end(), valid.begin(), valid.end());
    out.insert(out.end(), test.begin(), test.end());
    return out;
  }

  /// Snapshot index: for each time id, the facts (over all splits) valid then.
  std::vector<std::vector<Fact>> snapshots() const {
    std::vector<std::vector<Fact>> out(times.size());
    for (const Fact& f : all_facts()) {
      const TimeInterval iv = normalized(f.time);
      for (TimeId t = *iv.begin; t <= *iv.end; ++t) out[static_cast<std::size_t>(t)].push_back(f);
    }
    return out;
  }

  DatasetStats stats() const {
    return {entities.size(), relations.size(), times.size(), train.size(), valid.size(), test.size()};
  }
};

inline nlohmann::json stats_json(const DatasetStats& s) {
  return nlohmann::json{{"entities", s.entities}, {"relations", s.relations}, {"times", s.times},
                        {"train", s.train},       {"valid", s.valid},         {"test", s.test}};
}

// ---------------------------------------------------------------------------
// Loading

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

inline std::optional<std::filesystem::path> find_split_file(const std::filesystem::path& dir, Split s) {
  const std::string base(split_name(s));
  for (const std::string& candidate : {base + ".txt", base, base + ".tsv"}) {
    const auto p = dir / candidate;
    if (std::filesystem::is_regular_file(p)) return p;
  }
  return std::nullopt;
}

inline bool parse_int(const std::string& s, long long& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

/// Time tokens sort numerically when every token is an integer, otherwise
/// lexicographically (ISO dates sort chronologically either way).
inline std::vector<std::string> sorted_time_tokens(const std::set<std::string>& tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  bool numeric = true;
  long long dummy = 0;
  for (const auto& t : out) {
    if (!parse_int(t, dummy)) {
      numeric = false;
      break;
    }
  }
  if (numeric) {
    std::sort(out.begin(), out.end(), [](const std::string& x, const std::string& y) {
      long long a = 0;
      long long b = 0;
      parse_int(x, a);
      parse_int(y, b);
      return a < b;
    });
  }
  return out;
}

struct RawFact {
  std::string s, p, o;
  std::optional<std::string> begin, end;
};

using RawSplits = std::array<std::vector<RawFact>, 3>;

inline Dataset build_dataset(const RawSplits& raw, bool interval) {
  std::set<std::string> ents;
  std::set<std::string> rels;
  std::set<std::string> times;
  for (const auto& facts : raw) {
    for (const RawFact& f : facts) {
      ents.insert(f.s);
      ents.insert(f.o);
      rels.insert(f.p);
      if (f.begin) times.insert(*f.begin);
      if (f.end) times.insert(*f.end);
    }
  }
  Dataset ds;
  ds.interval = interval;
  ds.entities = Vocabulary({ents.begin(), ents.end()});
  ds.relations = Vocabulary({rels.begin(), rels.end()});
  ds.times = Vocabulary(sorted_time_tokens(times));
  for (Split s : kAllSplits) {
    auto& out = ds.split(s);
    for (const RawFact& f : raw[static_cast<std::size_t>(s)]) {
      Fact fact{ds.entities.id(f.s), ds.relations.id(f.p), ds.entities.id(f.o), {}};
      if (f.begin) fact.time.begin = ds.times.id(*f.begin);
      if (f.end) fact.time.end = ds.times.id(*f.end);
      out.push_back(fact);
    }
  }
  return ds;
}

template <class LineFn>
void for_each_line(const std::filesystem::path& path, LineFn&& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    fn(line, number);
  }
}

inline std::array<std::filesystem::path, 3> require_split_files(const std::filesystem::path& dir) {
  std::array<std::filesystem::path, 3> files;
  std::size_t found = 0;
  for (Split s : kAllSplits) {
    if (auto p = find_split_file(dir, s)) {
      files[static_cast<std::size_t>(s)] = *p;
      ++found;
    }
  }
  if (found == 0) throw DataError("no train/valid/test files in " + dir.string());
  for (Split s : kAllSplits) {
    if (files[static_cast<std::size_t>(s)].empty()) {
      throw DataError("missing " + std::string(split_name(s)) + " file in " + dir.string());
    }
  }
  return files;
}

}  // namespace detail

/// Directory with train/valid/test files of "s \t p \t o \t time" lines.
inline Dataset load_pointwise(const std::filesystem::path& dir) {
  const auto files = detail::require_split_files(dir);
  detail::RawSplits raw;
  for (Split s : kAllSplits) {
    const auto& path = files[static_cast<std::size_t>(s)];
    detail::for_each_line(path, [&](const std::string& line, std::size_t number) {
      auto cols = detail::split_tabs(line);
      if (cols.size() != 4 || cols[0].empty() || cols[1].empty() || cols[2].empty() || cols[3].empty()) {
        throw DataError(path.string() + ":" + std::to_string(number) + ": expected 4 tab-separated fields");
      }
      raw[static_cast<std::size_t>(s)].push_back({cols[0], cols[1], cols[2], cols[3], cols[3]});
    });
  }
  return detail::build_dataset(raw, false);
}

/// Column layout of interval files. Tokens listed in `open_tokens` (and empty
/// fields) mark an open interval end.
struct ColumnMap {
  std::size_t subject = 0;
  std::size_t relation = 1;
  std::size_t object = 2;
  std::size_t begin = 3;
  std::size_t end = 4;
  std::vector<std::string> open_tokens = {"", "####", "-", "None", "none", "nan"};
  // Keep only the leading (signed) integer of a time token, e.g. "1995-##-##" -> "1995".
  bool year_only = false;
};

inline Dataset load_interval(const std::filesystem::path& dir, const ColumnMap& columns = {}) {
  const auto files = detail::require_split_files(dir);
  const std::size_t needed = std::max({columns.subject, columns.relation, columns.object, columns.begin, columns.end}) + 1;
  auto time_token = [&](const std::string& tok) -> std::optional<std::string> {
    if (std::find(columns.open_tokens.begin(), columns.open_tokens.end(), tok) != columns.open_tokens.end()) {
      return std::nullopt;
    }
    if (!columns.year_only) return tok;
    std::size_t n = (!tok.empty() && tok[0] == '-') ? 1 : 0;
    while (n < tok.size() && std::isdigit(static_cast<unsigned char>(tok[n]))) ++n;
    std::string year = tok.substr(0, n);
    if (year.empty() || year == "-") return std::nullopt;
    return year;
  };
  detail::RawSplits raw;
  for (Split s : kAllSplits) {
    const auto& path = files[static_cast<std::size_t>(s)];
    detail::for_each_line(path, [&](const std::string& line, std::size_t number) {
      auto cols = detail::split_tabs(line);
      // A trailing empty end column is often dropped entirely.
      if (cols.size() + 1 == needed && columns.end + 1 == needed) cols.emplace_back();
      if (cols.size() < needed) {
        throw DataError(path.string() + ":" + std::to_string(number) + ": expected " + std::to_string(needed) +
                        " tab-separated fields");
      }
      detail::RawFact f{cols[columns.subject], cols[columns.relation], cols[columns.object],
                        time_token(cols[columns.begin]), time_token(cols[columns.end])};
      if (f.s.empty() || f.p.empty() || f.o.empty()) {
        throw DataError(path.string() + ":" + std::to_string(number) + ": empty entity or relation");
      }
      raw[static_cast<std::size_t>(s)].push_back(std::move(f));
    });
  }
  Dataset ds = detail::build_dataset(raw, true);
  for (Split s : kAllSplits) {
    for (const Fact& f : ds.split(s)) {
      if (f.time.bounded() && *f.time.begin > *f.time.end) {
        throw DataError("interval with begin after end in " + std::string(split_name(s)) + " split");
      }
    }
  }
  return ds;
}

/// Facts written in the loaders' TSV layout (4 columns for point datasets,
/// 5 for interval datasets with empty fields for open ends).
inline void write_facts(std::ostream& out, const Dataset& ds, const std::vector<Fact>& facts) {
  for (const Fact& f : facts) {
    out << ds.entities.name(f.s) << '\t' << ds.relations.name(f.p) << '\t' << ds.entities.name(f.o) << '\t';
    if (ds.interval) {
      out << (f.time.begin ? ds.times.name(*f.time.begin) : "") << '\t'
          << (f.time.end ? ds.times.name(*f.time.end) : "");
    } else {
      out << ds.times.name(*f.time.begin);
    }
    out << '\n';
  }
}

inline void write_dataset(const std::filesystem::path& dir, const Dataset& ds) {
  std::filesystem::create_directories(dir);
  for (Split s : kAllSplits) {
    std::ofstream out(dir / (std::string(split_name(s)) + ".txt"));
    if (!out) throw DataError("cannot write dataset split to " + dir.string());
    write_facts(out, ds, ds.split(s));
  }
}

// ---------------------------------------------------------------------------
// Allen relations

enum class AllenRelation : std::uint8_t {
  Before,
  Meets,
  Overlaps,
  Starts,
  During,
  Finishes,
  Equals,
  FinishedBy,
  Contains,
  StartedBy,
  OverlappedBy,
  MetBy,
  After,
};

inline constexpr std::size_t kAllenRelationCount = 13;

inline std::string_view allen_name(AllenRelation r) {
  static constexpr std::array<std::string_view, kAllenRelationCount> names = {
      "before",   "meets",       "overlaps", "starts",    "during",        "finishes", "equals",
      "finished_by", "contains", "started_by", "overlapped_by", "met_by", "after"};
  return names[static_cast<std::size_t>(r)];
}

/// Converse label: allen_relation(y, x) == converse(allen_relation(x, y)).
constexpr AllenRelation converse(AllenRelation r) noexcept {
  return static_cast<AllenRelation>(kAllenRelationCount - 1 - static_cast<std::size_t>(r));
}

/// Relation between closed intervals [m1, n1] and [m2, n2]. Degenerate
/// (single point) intervals are allowed; meets / met-by are reserved for two
/// proper intervals so the 13 labels stay pairwise disjoint.
inline AllenRelation allen_relation(const TimeInterval& x, const TimeInterval& y) {
  if (!x.bounded() || !y.bounded()) throw DataError("Allen relations need bounded intervals");
  const TimeId a = *x.begin, b = *x.end, c = *y.begin, d = *y.end;
  if (a > b || c > d) throw DataError("interval begins after it ends");
  if (a == c) {
    if (b == d) return AllenRelation::Equals;
    return b < d ? AllenRelation::Starts : AllenRelation::StartedBy;
  }
  if (a < c) {
    if (b < c) return AllenRelation::Before;
    if (b == c) return c < d ? AllenRelation::Meets : AllenRelation::FinishedBy;
    if (b < d) return AllenRelation::Overlaps;
    return b == d ? AllenRelation::FinishedBy : AllenRelation::Contains;
  }
  // a > c
  if (d < a) return AllenRelation::After;
  if (d == a) return a < b ? AllenRelation::MetBy : AllenRelation::Finishes;
  if (b < d) return AllenRelation::During;
  return b == d ? AllenRelation::Finishes : AllenRelation::OverlappedBy;
}

}  // namespace hge
