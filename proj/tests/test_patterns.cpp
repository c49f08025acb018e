#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hge/patterns.hpp"
#include "hge/toy.hpp"
#include "oracles.hpp"

using hge::PatternKind;
using hge::PatternOptions;
using hge::Quadruple;

namespace {

constexpr int kTimes = 6;

std::uint64_t ordered(const std::vector<Quadruple>& f, PatternKind k, std::size_t star = 3) {
  PatternOptions opt;
  opt.star_size = star;
  return hge::count_pattern(f, k, opt, kTimes - 1).ordered;
}

hge::Dataset named_dataset(const std::vector<Quadruple>& train, const std::vector<Quadruple>& test) {
  hge::Dataset ds;
  ds.entities = hge::Vocabulary({"Iraq", "Iran", "Syria", "Turkey"});
  ds.relations = hge::Vocabulary({"sign formal agreement", "host a visit"});
  ds.times = hge::Vocabulary({"2014-04-05", "2014-04-06", "2014-04-07"});
  for (const Quadruple& q : train) ds.train.push_back({q.s, q.p, q.o, hge::TimeInterval::point(q.t)});
  for (const Quadruple& q : test) ds.test.push_back({q.s, q.p, q.o, hge::TimeInterval::point(q.t)});
  return ds;
}

}  // namespace

TEST(Patterns, CountsMatchNestedLoopOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 20 + rng() % 181;
    const auto raw = oracle::random_facts(rng, n, 3 + trial % 8, 1 + trial % 3, kTimes);
    const auto f = oracle::dedupe(raw);
    EXPECT_EQ(ordered(raw, PatternKind::StaticSymmetric), oracle::pairs(f, oracle::static_symmetric));
    EXPECT_EQ(ordered(raw, PatternKind::StaticInverse), oracle::pairs(f, oracle::static_inverse));
    EXPECT_EQ(ordered(raw, PatternKind::DynamicSymmetric), oracle::pairs(f, oracle::dynamic_symmetric));
    EXPECT_EQ(ordered(raw, PatternKind::DynamicInverse), oracle::pairs(f, oracle::dynamic_inverse));
    EXPECT_EQ(ordered(raw, PatternKind::DynamicEvolve), oracle::pairs(f, oracle::evolve));
    EXPECT_EQ(ordered(raw, PatternKind::TemporalHierarchy), oracle::pairs(f, oracle::hierarchy));
    EXPECT_EQ(ordered(raw, PatternKind::Temporary), oracle::temporary(f, kTimes - 1));
    for (std::size_t star : {2, 3, 4}) {
      EXPECT_EQ(ordered(raw, PatternKind::TemporalStar, star), oracle::stars(f, star)) << star;
    }
  }
}

TEST(Patterns, ParticipationMatchesOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = oracle::dedupe(oracle::random_facts(rng, 60, 5, 2, kTimes));
    const hge::PatternIndex idx(f, kTimes - 1);
    for (const Quadruple& x : f) {
      bool sym = false, hier = false, evo = false;
      for (const Quadruple& y : f) {
        sym = sym || oracle::static_symmetric(x, y);
        hier = hier || oracle::hierarchy(x, y) || oracle::hierarchy(y, x);
        evo = evo || oracle::evolve(x, y) || oracle::evolve(y, x);
      }
      EXPECT_EQ(idx.participates(x, PatternKind::StaticSymmetric, 3), sym);
      EXPECT_EQ(idx.participates(x, PatternKind::TemporalHierarchy, 3), hier);
      EXPECT_EQ(idx.participates(x, PatternKind::DynamicEvolve, 3), evo);
    }
  }
}

TEST(Patterns, UnorderedConventions) {
  std::mt19937_64 rng(3);
  const auto f = oracle::random_facts(rng, 150, 5, 2, kTimes);
  for (PatternKind k : hge::kAllPatternKinds) {
    const auto c = hge::count_pattern(f, k, {}, kTimes - 1);
    const bool two_way = k == PatternKind::StaticSymmetric || k == PatternKind::StaticInverse ||
                         k == PatternKind::DynamicSymmetric || k == PatternKind::DynamicInverse;
    if (two_way) {
      EXPECT_EQ(c.ordered % 2, 0u) << hge::pattern_name(k);
      EXPECT_EQ(c.unordered, c.ordered / 2);
    } else {
      EXPECT_EQ(c.unordered, c.ordered);
    }
  }
}

TEST(Patterns, MirroredAgreementIsStaticSymmetric) {
  // (Iraq, sign formal agreement, Iran, 2014-04-06) and its mirror.
  const std::vector<Quadruple> f = {{0, 0, 1, 1}, {1, 0, 0, 1}};
  const auto c = hge::count_pattern(f, PatternKind::StaticSymmetric);
  EXPECT_EQ(c.ordered, 2u);
  EXPECT_EQ(c.unordered, 1u);
  ASSERT_FALSE(c.examples.empty());
  const hge::Dataset ds = named_dataset(f, {});
  const std::string csv = hge::census_csv(hge::pattern_census(ds), &ds);
  EXPECT_NE(csv.find("Iraq"), std::string::npos);
  EXPECT_NE(csv.find("sign formal agreement"), std::string::npos);
  EXPECT_EQ(csv.rfind("kind,ordered_count,unordered_count,example", 0), 0u);
}

TEST(Patterns, SingleFactHasNoPairs) {
  const std::vector<Quadruple> f = {{0, 0, 1, 2}};
  for (PatternKind k : hge::kAllPatternKinds) {
    if (k == PatternKind::Temporary) continue;
    EXPECT_EQ(hge::count_pattern(f, k, {}, kTimes - 1).ordered, 0u) << hge::pattern_name(k);
  }
  // A lone occurrence strictly inside the horizon is temporary.
  EXPECT_EQ(hge::count_pattern(f, PatternKind::Temporary, {}, kTimes - 1).ordered, 1u);
  EXPECT_EQ(hge::count_pattern(std::vector<Quadruple>{{0, 0, 1, 0}}, PatternKind::Temporary, {}, 5).ordered, 0u);
}

TEST(Patterns, ReorderingAndEntityRelabelingInvariance) {
  std::mt19937_64 rng(4);
  const auto f = oracle::random_facts(rng, 120, 6, 2, kTimes);
  auto shuffled = f;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::vector<int> perm = {3, 5, 0, 1, 4, 2};
  std::vector<Quadruple> relabeled;
  for (const Quadruple& q : f) relabeled.push_back({perm[q.s], q.p, perm[q.o], q.t});
  for (PatternKind k : hge::kAllPatternKinds) {
    EXPECT_EQ(ordered(f, k), ordered(shuffled, k));
    EXPECT_EQ(ordered(f, k), ordered(relabeled, k));
  }
}

TEST(Patterns, DuplicatesIgnored) {
  std::mt19937_64 rng(5);
  const auto f = oracle::random_facts(rng, 80, 5, 2, kTimes);
  auto doubled = f;
  doubled.insert(doubled.end(), f.begin(), f.end());
  for (PatternKind k : hge::kAllPatternKinds) EXPECT_EQ(ordered(f, k), ordered(doubled, k));
}

TEST(Patterns, StarNeedsDistinctTimes) {
  // Three objects all at one time: no star of size 3.
  std::vector<Quadruple> f = {{0, 0, 1, 2}, {0, 0, 2, 2}, {0, 0, 3, 2}};
  EXPECT_EQ(ordered(f, PatternKind::TemporalStar), 0u);
  f.push_back({0, 0, 3, 4});
  f.push_back({0, 0, 2, 1});
  const auto c = hge::count_pattern(f, PatternKind::TemporalStar);
  EXPECT_EQ(c.ordered, 1u);
  ASSERT_EQ(c.examples.size(), 1u);
  ASSERT_EQ(c.examples[0].size(), 3u);
  for (std::size_t i = 1; i < 3; ++i) EXPECT_LT(c.examples[0][i - 1].t, c.examples[0][i].t);
  EXPECT_EQ(hge::pattern_name(PatternKind::TemporalStar, 3), "TEMPORAL_STAR(3)");
}

TEST(Patterns, SubsetIsInsideTestAndParticipates) {
  hge::ToyConfig tc;
  const hge::Dataset ds = hge::generate_toy(tc);
  const auto test = hge::pattern_facts(ds, {hge::Split::Test}, false);
  const hge::PatternIndex all(hge::pattern_facts(ds, {hge::Split::Train, hge::Split::Valid, hge::Split::Test}, false),
                              ds.last_time());
  const auto all_facts = all.facts();
  for (PatternKind k : {PatternKind::StaticSymmetric, PatternKind::TemporalHierarchy, PatternKind::TemporalStar}) {
    const auto subset = hge::extract_subset(ds, k);
    EXPECT_FALSE(subset.empty()) << hge::pattern_name(k, 3);
    for (const Quadruple& q : subset) {
      EXPECT_TRUE(std::binary_search(test.begin(), test.end(), q));
      // Recheck against the definitions with the test fact as one end.
      bool ok = false;
      for (const Quadruple& y : all_facts) {
        if (k == PatternKind::StaticSymmetric) ok = ok || oracle::static_symmetric(q, y);
        if (k == PatternKind::TemporalHierarchy) ok = ok || oracle::hierarchy(q, y) || oracle::hierarchy(y, q);
      }
      if (k == PatternKind::TemporalStar) {
        std::vector<Quadruple> hub;
        for (const Quadruple& y : all_facts) {
          if (y.s == q.s && y.p == q.p) hub.push_back(y);
        }
        std::vector<const Quadruple*> chosen;
        ok = oracle::star_search(hub, 0, 3, chosen);
      }
      EXPECT_TRUE(ok) << hge::pattern_name(k, 3);
    }
  }
}

TEST(Patterns, IntervalDatasetNeedsReduction) {
  hge::Dataset ds = named_dataset({{0, 0, 1, 0}}, {});
  ds.interval = true;
  ds.train.push_back({1, 0, 0, {0, 2}});
  EXPECT_THROW(hge::count_pattern(ds, PatternKind::StaticSymmetric), hge::DataError);
  PatternOptions opt;
  opt.reduce_intervals = true;
  EXPECT_EQ(hge::count_pattern(ds, PatternKind::StaticSymmetric, opt).ordered, 2u);
}

TEST(Patterns, ParseNames) {
  for (PatternKind k : hge::kAllPatternKinds) EXPECT_EQ(hge::parse_pattern_kind(hge::pattern_name(k, 3)), k);
  EXPECT_EQ(hge::parse_pattern_kind("static_symmetric"), PatternKind::StaticSymmetric);
  EXPECT_THROW(hge::parse_pattern_kind("nope"), hge::ConfigError);
}
