#include <doctest.h>

#include <cmath>
#include <set>

#include "brute_force.hpp"
#include "cindex/data_model.hpp"
#include "cindex/error.hpp"

using namespace cindex;

TEST_CASE("validate_dataset accepts well-formed data") {
  SurvivalDataset ds({{"a", 1.0, 1}, {"b", 2.0, 0}});
  CHECK(validate_dataset(ds).ok());
}

TEST_CASE("validate_dataset reports negative time") {
  SurvivalDataset ds({{"a", -1.0, 1}});
  const auto report = validate_dataset(ds);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().message == "negative time");
  CHECK(report.violations.front().row == 0u);
  CHECK_THROWS_AS(require_valid(ds), InputError);
}

TEST_CASE("validate_dataset reports covariate dimension mismatch") {
  SurvivalDataset ds({{"a", 1.0, 1}, {"b", 2.0, 1}}, {{1, 2, 3}, {1, 2, 3, 4}});
  const auto report = validate_dataset(ds);
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) found |= v.message == "covariate dimension mismatch";
  CHECK(found);
}

TEST_CASE("validate_dataset reports non-binary events and non-finite times") {
  SurvivalDataset ds({{"a", 1.0, 2}, {"b", NAN, 1}});
  const auto report = validate_dataset(ds);
  CHECK(report.violations.size() == 2);
}

TEST_CASE("classify_pair examples") {
  CHECK(classify_pair(1, 1, 2, 1, RankRelation::greater) == PairCase::c1A);
  CHECK(classify_pair(3, 1, 3, 0, RankRelation::tied) == PairCase::c6C);
  CHECK(classify_pair(5, 0, 5, 0, RankRelation::greater) == PairCase::c8);
  CHECK(classify_pair(4, 1, 2, 1, RankRelation::greater) == PairCase::later);
}

TEST_CASE("classify_pair is total and agrees with a first-principles labelling") {
  const RankRelation rels[] = {RankRelation::greater, RankRelation::less, RankRelation::tied};
  const int rel_code[] = {1, -1, 0};
  std::set<PairCase> seen;
  for (double tj : {1.0, 2.0, 3.0}) {
    for (int di : {0, 1}) {
      for (int dj : {0, 1}) {
        for (int r = 0; r < 3; ++r) {
          const PairCase c = classify_pair(2.0, di, tj, dj, rels[r]);
          CHECK(to_string(c) == oracle::case_label(2.0, di, tj, dj, rel_code[r]));
          seen.insert(c);
        }
      }
    }
  }
  CHECK(seen.size() == kPairCaseCount);
}

TEST_CASE("pair case labels round-trip") {
  for (PairCase c : kAllPairCases) CHECK(parse_pair_case(to_string(c)) == c);
  CHECK_FALSE(parse_pair_case("9Z").has_value());
}

TEST_CASE("swapping distinct-time pairs maps families 1/2 onto 3/4") {
  for (int di : {0, 1}) {
    for (int dj : {0, 1}) {
      const PairCase fwd = classify_pair(1, di, 2, dj, RankRelation::greater);
      const PairCase rev = classify_pair(2, dj, 1, di, RankRelation::less);
      CHECK(rev == PairCase::later);
      if (di == 1) CHECK((fwd == PairCase::c1A || fwd == PairCase::c2A));
      if (di == 0) CHECK((fwd == PairCase::c3 || fwd == PairCase::c4));
    }
  }
}

TEST_CASE("compare_risks uses an inclusive tolerance") {
  CHECK(compare_risks(1.0, 1.0, 0.0) == RankRelation::tied);
  CHECK(compare_risks(1.0, 1.0 + 1e-9, 1e-8) == RankRelation::tied);
  CHECK(compare_risks(1.0 + 1e-7, 1.0, 1e-8) == RankRelation::greater);
  CHECK(compare_risks(0.5, 0.7, 0.0) == RankRelation::less);
}

TEST_CASE("RiskVector rejects non-finite values") {
  CHECK_THROWS_AS(RiskVector({1.0, NAN}), InputError);
  CHECK_THROWS_AS(RiskVector({INFINITY}), InputError);
}

TEST_CASE("TimeGrid invariants") {
  CHECK_THROWS_AS(TimeGrid({0.0, 1.0, 1.0}), InputError);
  CHECK_THROWS_AS(TimeGrid({-1.0, 1.0}), InputError);
  const TimeGrid g = TimeGrid::regular(0, 355, 1);
  CHECK(g.size() == 356);
  CHECK(g.back() == 355.0);
  CHECK_FALSE(g.floor_index(-0.5).has_value());
  CHECK(g.floor_index(2.5) == 2u);
  CHECK(g.floor_index(400) == 355u);
}

TEST_CASE("SurvivalMatrix clamps tiny wiggles and rejects larger ones") {
  const TimeGrid g({0, 1, 2});
  SurvivalMatrix ok(g, 1, {1.0, 0.5, 0.5 + 5e-10});
  CHECK(ok.at(0, 2) <= ok.at(0, 1));
  CHECK_THROWS_AS(SurvivalMatrix(g, 1, {1.0, 0.5, 0.6}), InputError);
  CHECK_THROWS_AS(SurvivalMatrix(g, 1, {1.2, 0.5, 0.4}), InputError);
  CHECK_THROWS_AS(SurvivalMatrix(g, 2, {1.0, 0.5, 0.4}), InputError);
}

TEST_CASE("SurvivalMatrix step lookup") {
  const SurvivalMatrix sm(TimeGrid({1, 2}), 1, {0.8, 0.4});
  CHECK(sm.step_value(0, 0.5) == 1.0);
  CHECK(sm.step_value(0, 1.0) == 0.8);
  CHECK(sm.step_value(0, 1.9) == 0.8);
  CHECK(sm.step_value(0, 7.0) == 0.4);
}

TEST_CASE("dataset subset and flipped events") {
  SurvivalDataset ds({{"a", 1.0, 1}, {"b", 2.0, 0}, {"c", 3.0, 1}});
  const std::size_t idx[] = {2, 0, 2};
  const auto sub = ds.subset(idx);
  CHECK(sub.size() == 3);
  CHECK(sub.id(0) == "c");
  CHECK(sub.id(1) == "a");
  const auto flipped = ds.with_flipped_events();
  CHECK(flipped.event(0) == 0);
  CHECK(flipped.event(1) == 1);
  CHECK(ds.event_count() == 2);
}
