#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "hge/data.hpp"
#include "hge/toy.hpp"

namespace fs = std::filesystem;
using hge::AllenRelation;
using hge::TimeInterval;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("hge_data_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  void write(const std::string& name, const std::string& body) const { std::ofstream(path_ / name) << body; }

 private:
  fs::path path_;
};

TimeInterval iv(int a, int b) { return {a, b}; }

}  // namespace

TEST(Data, LoadsPointwiseSplits) {
  TempDir d;
  d.write("train.txt", "a\tr\tb\t2014-01-02\nb\tr\ta\t2014-01-01\n");
  d.write("valid.txt", "a\tq\tc\t2014-01-03\n");
  d.write("test.txt", "c\tq\ta\t2014-01-02\n");
  const hge::Dataset ds = hge::load_pointwise(d.path());
  EXPECT_EQ(ds.stats(), (hge::DatasetStats{3, 2, 3, 2, 1, 1}));
  EXPECT_FALSE(ds.interval);
  // Times are ordered chronologically.
  EXPECT_EQ(ds.times.id("2014-01-01"), 0);
  EXPECT_EQ(ds.times.id("2014-01-03"), 2);
  const auto q = ds.quadruples(hge::Split::Train);
  EXPECT_EQ(q[0], (hge::Quadruple{ds.entities.id("a"), ds.relations.id("r"), ds.entities.id("b"), 1}));
}

TEST(Data, NumericTimesSortNumerically) {
  TempDir d;
  d.write("train.txt", "a\tr\tb\t10\na\tr\tb\t9\na\tr\tb\t100\n");
  d.write("valid.txt", "");
  d.write("test.txt", "");
  const auto ds = hge::load_pointwise(d.path());
  EXPECT_EQ(ds.times.names(), (std::vector<std::string>{"9", "10", "100"}));
}

TEST(Data, MalformedLineReportsFileAndLine) {
  TempDir d;
  d.write("train.txt", "a\tr\tb\t1\na\tr\tb\n");
  d.write("valid.txt", "");
  d.write("test.txt", "");
  try {
    hge::load_pointwise(d.path());
    FAIL() << "expected DataError";
  } catch (const hge::DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("train.txt:2"), std::string::npos) << msg;
  }
}

TEST(Data, MissingSplitIsAnError) {
  TempDir d;
  d.write("train.txt", "a\tr\tb\t1\n");
  d.write("test.txt", "a\tr\tb\t1\n");
  try {
    hge::load_pointwise(d.path());
    FAIL() << "expected DataError";
  } catch (const hge::DataError& e) {
    EXPECT_NE(std::string(e.what()).find("valid"), std::string::npos);
  }
  EXPECT_THROW(hge::load_pointwise(d.path() / "nowhere"), hge::DataError);
}

TEST(Data, IntervalOpenEnds) {
  TempDir d;
  d.write("train.txt", "a\tr\tb\t1990\t####\nb\tr\tc\t\t1995\nc\tr\ta\t1993\t1993\n");
  d.write("valid.txt", "a\tr\tc\t1991\n");
  d.write("test.txt", "a\tq\tc\t1990\t1995\n");
  const auto ds = hge::load_interval(d.path());
  EXPECT_TRUE(ds.interval);
  EXPECT_FALSE(ds.train[0].time.end.has_value());
  EXPECT_FALSE(ds.train[1].time.begin.has_value());
  EXPECT_TRUE(ds.train[2].time.is_point());
  EXPECT_FALSE(ds.valid[0].time.end.has_value());
  const TimeInterval norm = ds.normalized(ds.train[0].time);
  EXPECT_EQ(*norm.begin, ds.times.id("1990"));
  EXPECT_EQ(*norm.end, ds.last_time());
  EXPECT_THROW(ds.quadruples(hge::Split::Train), hge::DataError);
}

TEST(Data, IntervalBeginAfterEndRejected) {
  TempDir d;
  d.write("train.txt", "a\tr\tb\t1995\t1990\n");
  d.write("valid.txt", "");
  d.write("test.txt", "");
  EXPECT_THROW(hge::load_interval(d.path()), hge::DataError);
}

TEST(Data, YearOnlyColumnMap) {
  TempDir d;
  d.write("train.txt", "x\ta\tr\tb\t1995-##-##\t2001-03-04\n");
  d.write("valid.txt", "");
  d.write("test.txt", "");
  hge::ColumnMap cols{1, 2, 3, 4, 5};
  cols.year_only = true;
  const auto ds = hge::load_interval(d.path(), cols);
  EXPECT_EQ(ds.times.names(), (std::vector<std::string>{"1995", "2001"}));
  EXPECT_EQ(ds.entities.name(ds.train[0].s), "a");
}

TEST(Data, WriteThenLoadRoundTrip) {
  TempDir d;
  hge::ToyConfig tc;
  tc.seed = 7;
  const hge::Dataset ds = hge::generate_toy(tc);
  hge::write_dataset(d.path(), ds);
  const hge::Dataset back = hge::load_pointwise(d.path());
  EXPECT_EQ(back.stats(), ds.stats());
  EXPECT_EQ(back.entities, ds.entities);
  EXPECT_EQ(back.times, ds.times);
  ASSERT_EQ(back.test.size(), ds.test.size());
  for (std::size_t i = 0; i < ds.test.size(); ++i) EXPECT_EQ(back.test[i], ds.test[i]);
}

TEST(Data, ToyGeneratorIsSeeded) {
  hge::ToyConfig tc;
  const auto a = hge::generate_toy(tc), b = hge::generate_toy(tc);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  tc.seed = 1;
  EXPECT_NE(hge::generate_toy(tc).train, a.train);
  EXPECT_EQ(a.stats().entities, 40u);
  EXPECT_EQ(a.stats().times, 20u);
}

TEST(Data, SnapshotsCoverIntervals) {
  hge::Dataset ds;
  ds.entities = hge::Vocabulary({"a", "b"});
  ds.relations = hge::Vocabulary({"r"});
  ds.times = hge::Vocabulary({"0", "1", "2", "3"});
  ds.interval = true;
  ds.train = {{0, 0, 1, {1, std::nullopt}}};
  ds.test = {{1, 0, 0, {std::nullopt, 0}}};
  const auto snaps = ds.snapshots();
  EXPECT_EQ(snaps[0].size(), 1u);
  EXPECT_EQ(snaps[1].size(), 1u);
  EXPECT_EQ(snaps[3].size(), 1u);
  EXPECT_EQ(snaps[0][0].s, 1);
}

TEST(Data, VocabularyErrors) {
  EXPECT_THROW(hge::Vocabulary({"a", "a"}), hge::DataError);
  const hge::Vocabulary v({"a"});
  EXPECT_THROW(v.id("b"), hge::LookupError);
  EXPECT_THROW(v.name(1), hge::LookupError);
}

TEST(Allen, ContainsExample) {
  EXPECT_EQ(hge::allen_relation(iv(1, 10), iv(3, 5)), AllenRelation::Contains);
  EXPECT_EQ(hge::allen_relation(iv(3, 5), iv(1, 10)), AllenRelation::During);
}

TEST(Allen, PointIntervalsAllowed) {
  EXPECT_EQ(hge::allen_relation(iv(5, 5), iv(5, 5)), AllenRelation::Equals);
  EXPECT_EQ(hge::allen_relation(iv(5, 5), iv(6, 6)), AllenRelation::Before);
}

TEST(Allen, BeginAfterEndRejected) {
  EXPECT_THROW(hge::allen_relation(iv(6, 5), iv(1, 2)), hge::DataError);
  EXPECT_THROW(hge::allen_relation({1, std::nullopt}, iv(1, 2)), hge::DataError);
}

namespace {

// Endpoint predicates for the thirteen labels; meets and met-by need two
// proper intervals.
bool holds(AllenRelation r, int a, int b, int c, int d) {
  const bool px = a < b, py = c < d;
  switch (r) {
    case AllenRelation::Before: return b < c;
    case AllenRelation::Meets: return px && py && b == c;
    case AllenRelation::Overlaps: return a < c && c < b && b < d;
    case AllenRelation::Starts: return a == c && b < d;
    case AllenRelation::During: return c < a && b < d;
    case AllenRelation::Finishes: return c < a && b == d;
    case AllenRelation::Equals: return a == c && b == d;
    case AllenRelation::FinishedBy: return a < c && b == d;
    case AllenRelation::Contains: return a < c && d < b;
    case AllenRelation::StartedBy: return a == c && d < b;
    case AllenRelation::OverlappedBy: return c < a && a < d && d < b;
    case AllenRelation::MetBy: return px && py && d == a;
    case AllenRelation::After: return d < a;
  }
  return false;
}

}  // namespace

TEST(Allen, ExhaustiveOverSmallGrid) {
  for (int a = 0; a <= 4; ++a) {
    for (int b = a; b <= 4; ++b) {
      for (int c = 0; c <= 4; ++c) {
        for (int d = c; d <= 4; ++d) {
          const AllenRelation got = hge::allen_relation(iv(a, b), iv(c, d));
          int matches = 0;
          for (std::size_t k = 0; k < hge::kAllenRelationCount; ++k) {
            matches += holds(static_cast<AllenRelation>(k), a, b, c, d);
          }
          EXPECT_EQ(matches, 1) << a << b << c << d;
          EXPECT_TRUE(holds(got, a, b, c, d)) << a << b << c << d << " " << hge::allen_name(got);
          EXPECT_EQ(hge::allen_relation(iv(c, d), iv(a, b)), hge::converse(got));
        }
      }
    }
  }
}
