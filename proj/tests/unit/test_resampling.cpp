#include <doctest.h>

#include <algorithm>

#include "cindex/engine.hpp"
#include "cindex/error.hpp"
#include "cindex/resampling.hpp"
#include "cindex/rng.hpp"

using namespace cindex;

namespace {

SurvivalDataset strata(std::size_t events, std::size_t censored) {
  std::vector<SurvivalRecord> recs;
  for (std::size_t i = 0; i < events + censored; ++i) {
    recs.push_back({std::to_string(i), static_cast<double>(i + 1), i < events ? 1 : 0});
  }
  return SurvivalDataset(recs);
}

}  // namespace

TEST_CASE("stratified folds with exact divisibility") {
  const auto ds = strata(10, 10);
  const auto folds = stratified_kfold(ds, 5, 1);
  REQUIRE(folds.size() == 5);
  std::vector<int> seen(ds.size(), 0);
  for (const auto& f : folds) {
    std::size_t ev = 0;
    for (std::size_t i : f.test) {
      ev += ds.event(i);
      ++seen[i];
    }
    CHECK(ev == 2);
    CHECK(f.test.size() == 4);
    CHECK(f.train.size() + f.test.size() == ds.size());
    std::vector<std::size_t> both;
    std::set_intersection(f.train.begin(), f.train.end(), f.test.begin(), f.test.end(),
                          std::back_inserter(both));
    CHECK(both.empty());
  }
  for (int s : seen) CHECK(s == 1);
}

TEST_CASE("stratified folds on uneven strata") {
  const auto ds = strata(3, 2);
  const auto folds = stratified_kfold(ds, 2, 5);
  std::vector<std::size_t> ev;
  for (const auto& f : folds) {
    std::size_t e = 0;
    for (std::size_t i : f.test) e += ds.event(i);
    ev.push_back(e);
  }
  std::sort(ev.begin(), ev.end());
  CHECK(ev == std::vector<std::size_t>{1, 2});
}

TEST_CASE("stratified folds are seed-deterministic and validated") {
  const auto ds = strata(17, 9);
  const auto a = stratified_kfold(ds, 3, 11);
  const auto b = stratified_kfold(ds, 3, 11);
  for (std::size_t f = 0; f < 3; ++f) CHECK(a[f].test == b[f].test);
  CHECK_THROWS_AS(stratified_kfold(ds, 1, 1), InputError);
  CHECK_THROWS_AS(stratified_kfold(strata(2, 5), 3, 1), InputError);
}

TEST_CASE("bootstrap of a constant estimator") {
  std::vector<std::size_t> pop(30);
  for (std::size_t i = 0; i < pop.size(); ++i) pop[i] = i;
  const auto r = bootstrap_ci(pop, [](std::span<const std::size_t>) { return 1.0; },
                              {50, 30, 0.95, 3});
  CHECK(r.lo == 1.0);
  CHECK(r.hi == 1.0);
  CHECK(r.samples.size() == 50);
}

TEST_CASE("bootstrap with a single replicate") {
  std::vector<std::size_t> pop = {0, 1, 2, 3, 4};
  auto mean = [](std::span<const std::size_t> idx) {
    double s = 0;
    for (auto i : idx) s += static_cast<double>(i);
    return s / static_cast<double>(idx.size());
  };
  const auto r = bootstrap_ci(pop, mean, {1, 5, 0.95, 9});
  CHECK(r.lo == r.hi);
  CHECK(r.lo == r.samples[0]);
  CHECK(r.point == 2.0);
}

TEST_CASE("bootstrap failures") {
  std::vector<std::size_t> pop = {0, 1, 2};
  int calls = 0;
  auto flaky = [&](std::span<const std::size_t>) -> double {
    if (calls++ % 2 == 0) return 0.5;
    throw NoComparablePairs();
  };
  const auto r = bootstrap_ci(pop, flaky, {10, 3, 0.9, 1});
  CHECK(r.failed == 5);
  CHECK(r.samples.size() == 5);
  auto never = [&](std::span<const std::size_t> idx) -> double {
    if (idx.size() == 3 && idx.data() == pop.data()) return 0.5;
    throw NoComparablePairs();
  };
  CHECK_THROWS_AS(bootstrap_ci(pop, never, {4, 3, 0.9, 1}), ComputationError);
  CHECK_THROWS_AS(bootstrap_ci(pop, flaky, {0, 3, 0.9, 1}), InputError);
  CHECK_THROWS_AS(bootstrap_ci(pop, flaky, {3, 3, 1.0, 1}), InputError);
}

TEST_CASE("bootstrap intervals stay ordered and within [0, 1]") {
  std::vector<SurvivalRecord> recs;
  std::vector<double> risk;
  Rng rng = Rng::stream(51, {1});
  for (int i = 0; i < 60; ++i) {
    recs.push_back({std::to_string(i), rng.uniform(0, 10), rng.uniform() < 0.7 ? 1 : 0});
    risk.push_back(rng.normal());
  }
  SurvivalDataset ds(recs);
  std::vector<std::size_t> pop(60);
  for (std::size_t i = 0; i < 60; ++i) pop[i] = i;
  auto est = [&](std::span<const std::size_t> idx) {
    const RiskVector r(risk);
    return concordance(ds.subset(idx), r.subset(idx), harrell_policy()).estimate;
  };
  const auto res = bootstrap_ci(pop, est, {100, 60, 0.95, 2});
  CHECK(res.lo <= res.hi);
  CHECK(res.lo >= 0.0);
  CHECK(res.hi <= 1.0);
}

TEST_CASE("type-7 quantiles") {
  const std::vector<double> v = {1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.5) == 2.5);
}
