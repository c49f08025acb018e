#pragma once

// Seeded generator for small pattern-rich temporal knowledge graphs.
//
// Every planted triple is active over a contiguous window of time points and
// becomes one fact per point. Structures:
//   symmetric    (a, r, b) and (b, r, a) over the same window
//   hierarchy    chains v1 -> v2 -> ... whose link windows follow each other
//   star         a hub linking to several objects at increasing start times
//   evolve_from / evolve_to   (s, from, o) over one window, then (s, to, o)
//                over the window right after it
//   temporary    triples active strictly inside the timeline
// Facts are deduplicated, shuffled and split into train / valid / test.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "hge/data.hpp"
#include "hge/errors.hpp"
#include "hge/training.hpp"

namespace hge {

struct ToyConfig {
  std::size_t entities = 40;
  std::size_t times = 20;
  std::uint64_t seed = 2024;
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
  std::size_t symmetric_pairs = 40;
  std::size_t hierarchy_chains = 16;
  std::size_t hierarchy_length = 4;  // entities per chain
  std::size_t stars = 8;
  std::size_t star_size = 5;
  std::size_t evolve_pairs = 40;
  std::size_t temporary_triples = 50;
};

inline Dataset generate_toy(const ToyConfig& cfg) {
  if (cfg.entities < std::max<std::size_t>(cfg.hierarchy_length, cfg.star_size + 1) || cfg.times < 8) {
    throw ConfigError("toy graph needs more entities / time points");
  }
  std::mt19937_64 rng(cfg.seed);
  const auto T = static_cast<int>(cfg.times);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto distinct_entities = [&](std::size_t n) {
    std::vector<int> pool(cfg.entities);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(n);
    return pool;
  };

  using Key = std::tuple<int, std::string, int, int>;
  std::set<Key> facts;
  auto add_window = [&](int s, const std::string& r, int o, int first, int last) {
    first = std::max(first, 0);
    last = std::min(last, T - 1);
    for (int t = first; t <= last; ++t) facts.emplace(s, r, o, t);
  };

  for (std::size_t i = 0; i < cfg.symmetric_pairs; ++i) {
    const auto e = distinct_entities(2);
    const int len = uniform(5, 10);
    const int start = uniform(0, T - len);
    add_window(e[0], "symmetric", e[1], start, start + len - 1);
    add_window(e[1], "symmetric", e[0], start, start + len - 1);
  }
  const int links = static_cast<int>(cfg.hierarchy_length) - 1;
  for (std::size_t i = 0; i < cfg.hierarchy_chains; ++i) {
    const auto e = distinct_entities(cfg.hierarchy_length);
    const int len = std::max(2, std::min(6, T / links));
    const int start = uniform(0, T - len * links);
    for (int l = 0; l < links; ++l) {
      add_window(e[static_cast<std::size_t>(l)], "hierarchy", e[static_cast<std::size_t>(l) + 1], start + l * len,
                 start + (l + 1) * len - 1);
    }
  }
  for (std::size_t i = 0; i < cfg.stars; ++i) {
    const auto e = distinct_entities(cfg.star_size + 1);
    const int step = 2;
    const int len = 6;
    const int start = uniform(0, std::max(0, T - static_cast<int>(cfg.star_size) * step - 1));
    for (std::size_t k = 0; k < cfg.star_size; ++k) {
      const int first = start + static_cast<int>(k) * step;
      add_window(e[0], "star", e[k + 1], first, first + len - 1);
    }
  }
  for (std::size_t i = 0; i < cfg.evolve_pairs; ++i) {
    const auto e = distinct_entities(2);
    const int len1 = uniform(4, 6);
    const int len2 = uniform(4, 6);
    const int start = uniform(0, T - len1 - len2);
    add_window(e[0], "evolve_from", e[1], start, start + len1 - 1);
    add_window(e[0], "evolve_to", e[1], start + len1, start + len1 + len2 - 1);
  }
  for (std::size_t i = 0; i < cfg.temporary_triples; ++i) {
    const auto e = distinct_entities(2);
    const int len = uniform(3, 8);
    const int start = uniform(1, T - len - 1);
    add_window(e[0], "temporary", e[1], start, start + len - 1);
  }

  std::vector<Key> all(facts.begin(), facts.end());
  std::shuffle(all.begin(), all.end(), rng);
  const auto n = all.size();
  const auto n_test = static_cast<std::size_t>(static_cast<double>(n) * cfg.test_fraction);
  const auto n_valid = static_cast<std::size_t>(static_cast<double>(n) * cfg.valid_fraction);

  const int width = cfg.entities >= 100 ? 3 : 2;
  auto pad = [](int v, int w) {
    std::string s = std::to_string(v);
    return std::string(static_cast<std::size_t>(std::max(0, w - static_cast<int>(s.size()))), '0') + s;
  };
  const int twidth = cfg.times >= 100 ? 3 : 2;
  detail::RawSplits raw;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [s, r, o, t] = all[i];
    const Split split = i < n_test ? Split::Test : (i < n_test + n_valid ? Split::Valid : Split::Train);
    const std::string time = "t" + pad(t, twidth);
    raw[static_cast<std::size_t>(split)].push_back({"e" + pad(s, width), r, "e" + pad(o, width), time, time});
  }
  return detail::build_dataset(raw, false);
}

/// Desk-scale recipe for the toy graph: d = 32, 200 epochs, batches of 100,
/// N3 weight 1e-2 from the grid, smoothness 1e-2. Initial std 0.3 instead of
/// the library default: with tiny embeddings the geometry attention stays
/// uniform for most of the run, and a uniform mixture of the three conjugated
/// real scores reduces to the symmetric product s_a h_a o_a.
inline TrainConfig toy_train_config(Variant variant, std::uint64_t seed = 1) {
  TrainConfig cfg;
  cfg.dim = 32;
  cfg.epochs = 200;
  cfg.batch_size = 100;
  cfg.learning_rate = 0.1;
  cfg.reg.embedding = 1e-2;
  cfg.reg.temporal = 1e-2;
  cfg.init_scale = 0.3;
  cfg.seed = seed;
  cfg.variant = variant;
  return cfg;
}

}  // namespace hge
