#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <thread>

#include "oracle.hpp"
#include "rsdkit/canonical.hpp"
#include "rsdkit/enumerate.hpp"

using rsdkit::EnumParams;
using rsdkit::IntSet;
using rsdkit::Predicate;

namespace {

rsdkit::EnumerationReport run(std::int64_t k, std::int64_t n, Predicate pred, int shards = 1,
                              int threads = 1, bool list = false) {
  EnumParams p;
  p.k = k;
  p.n = n;
  p.predicate = pred;
  p.list_witnesses = list;
  p.shard_count = shards;
  p.thread_count = threads;
  return rsdkit::count_classes(p);
}

bool oracle_sd(const oracle::Elems& a) {
  return oracle::sumset(a).size() > oracle::difference_set(a).size();
}

bool oracle_rsd(const oracle::Elems& a) {
  return oracle::restricted_sumset(a).size() > oracle::difference_set(a).size();
}

}  // namespace

TEST_CASE("canonical enumeration equals canonicalize-and-dedup for all k<=5, n<=12") {
  for (int k = 1; k <= 5; ++k) {
    for (int n = k - 1; n <= 12; ++n) {
      const auto got = run(k, n, Predicate::ALL).matching_classes;
      const auto want = oracle::count_classes_dedup(k, n, [](const oracle::Elems&) { return true; });
      INFO("k=" << k << " n=" << n);
      CHECK(got == want);
    }
  }
}

TEST_CASE("predicate counts match the oracle on small ranges") {
  for (int k = 3; k <= 5; ++k) {
    for (int n = k; n <= 11; ++n) {
      INFO("k=" << k << " n=" << n);
      CHECK(run(k, n, Predicate::SD).matching_classes ==
            oracle::count_classes_dedup(k, n, oracle_sd));
      CHECK(run(k, n, Predicate::RSD).matching_classes ==
            oracle::count_classes_dedup(k, n, oracle_rsd));
    }
  }
}

TEST_CASE("hand-checked class counts") {
  // k=3 within {0..3}: {0,1,2} and {0,1,3}; {0,2,3} collapses onto {0,1,3}.
  CHECK(run(3, 3, Predicate::ALL).matching_classes == 2);
  CHECK(run(2, 10, Predicate::ALL).matching_classes == 1);  // every pair is an AP
  CHECK(run(1, 5, Predicate::ALL).matching_classes == 1);   // the singleton class
}

TEST_CASE("the unique 8-element sum-dominant class at diameter 14") {
  const auto report = run(8, 14, Predicate::SD, 1, 2, true);
  REQUIRE(report.matching_classes == 1);
  REQUIRE(report.witnesses.size() == 1);
  CHECK(report.witnesses[0] == IntSet::parse("0,2,3,4,7,11,12,14"));
}

TEST_CASE("reports are identical across shard and thread counts") {
  const auto baseline = run(6, 16, Predicate::SD, 1, 1, true);
  for (const auto& [shards, threads] :
       {std::pair{1, 4}, std::pair{64, 1}, std::pair{64, 4}, std::pair{3, 2}}) {
    const auto other = run(6, 16, Predicate::SD, shards, threads, true);
    CHECK(other.matching_classes == baseline.matching_classes);
    CHECK(other.classes_examined == baseline.classes_examined);
    CHECK(other.witnesses == baseline.witnesses);
    CHECK(std::accumulate(other.per_shard_counts.begin(), other.per_shard_counts.end(),
                          std::int64_t{0}) == other.matching_classes);
  }
}

TEST_CASE("witnesses are canonical and satisfy the predicate") {
  const auto report = run(4, 10, Predicate::SD, 4, 2, true);
  const auto all = run(4, 10, Predicate::ALL, 4, 2, true);
  CHECK(all.matching_classes == all.classes_examined);
  for (const auto& w : all.witnesses) {
    CHECK(rsdkit::canonicalize(w).representative == w);
  }
  for (const auto& w : report.witnesses) {
    CHECK(rsdkit::analyze(w).is_sd);
  }
}

TEST_CASE("monotonicity and RSD within SD on computed ranges") {
  std::int64_t prev_sd = 0, prev_all = 0;
  for (int n = 7; n <= 14; ++n) {
    const auto sd = run(8, n, Predicate::SD).matching_classes;
    const auto rsd = run(8, n, Predicate::RSD).matching_classes;
    const auto all = run(8, n, Predicate::ALL).matching_classes;
    CHECK(sd >= prev_sd);
    CHECK(all >= prev_all);
    CHECK(rsd <= sd);
    prev_sd = sd;
    prev_all = all;
  }
}

TEST_CASE("budget errors report the bound hit") {
  EnumParams p;
  p.k = 8;
  p.n = 40;
  p.budget = 1000;
  try {
    rsdkit::count_classes(p);
    FAIL("expected BudgetError");
  } catch (const rsdkit::BudgetError& e) {
    CHECK(e.budget == 1000);
    CHECK(e.required > 1000);
  }
}

TEST_CASE("search_delta finds the smallest witnesses in order") {
  // delta({0}) = 1, diameter 0, the very first candidate.
  const auto w1 = rsdkit::search_delta(-1, 5, 3);
  REQUIRE(w1.has_value());
  CHECK(*w1 == IntSet::of({0}));

  // delta({0,1}) = 2 at diameter 1 precedes the interval {0,1,2}.
  const auto w2 = rsdkit::search_delta(-2, 10, 6);
  REQUIRE(w2.has_value());
  CHECK(*w2 == IntSet::of({0, 1}));
  CHECK(rsdkit::analyze(*w2).delta == 2);

  // No set with delta = -4 exists within diameter 20 and cardinality 10
  // (full sweep: the minimum delta over that whole range is 2).
  rsdkit::SearchOptions opts;
  opts.thread_count = 4;
  CHECK(!rsdkit::search_delta(4, 20, 10, opts).has_value());
}

TEST_CASE("search_delta result is independent of thread count") {
  const auto serial = rsdkit::search_delta(-3, 12, 8);
  REQUIRE(serial.has_value());
  CHECK(rsdkit::analyze(*serial).delta == 3);
  for (int threads : {2, 4}) {
    rsdkit::SearchOptions opts;
    opts.thread_count = threads;
    const auto w = rsdkit::search_delta(-3, 12, 8, opts);
    REQUIRE(w.has_value());
    CHECK(*w == *serial);
  }
}

TEST_CASE("search_delta budget exhaustion is an error with context") {
  rsdkit::SearchOptions opts;
  opts.budget = 50;
  CHECK_THROWS_AS(rsdkit::search_delta(0, 30, 12, opts), rsdkit::BudgetError);
}

TEST_CASE("profile_enumeration agrees across thread counts") {
  EnumParams p;
  p.k = 8;
  p.n = 14;
  p.predicate = Predicate::SD;
  p.thread_count = 4;
  const auto report = rsdkit::profile_enumeration(p);
  CHECK(report.consistent);
  REQUIRE(!report.entries.empty());
  for (const auto& entry : report.entries) {
    CHECK(entry.matching_classes == 1);
  }
}

TEST_CASE("concurrent enumerations in one process stay independent") {
  std::int64_t a = 0, b = 0;
  {
    std::jthread t1([&] { a = run(8, 14, Predicate::SD, 4, 2).matching_classes; });
    std::jthread t2([&] { b = run(7, 14, Predicate::SD, 4, 2).matching_classes; });
  }
  CHECK(a == 1);
  CHECK(b == 0);
}
