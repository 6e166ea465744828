#include "cindex/resampling.hpp"

#include <algorithm>
#include <cmath>

#include "cindex/error.hpp"
#include "cindex/rng.hpp"

namespace cindex {
namespace {

enum : std::uint64_t { kFoldShuffle = 0x666f6c64, kBootstrap = 0x626f6f74 };

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t k = v.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(rng.below(k));
    std::swap(v[k - 1], v[j]);
  }
}

}  // namespace

std::vector<Fold> stratified_kfold(const SurvivalDataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("k must be at least 2");
  require_valid(ds);

  std::vector<std::size_t> strata[2];
  for (std::size_t i = 0; i < ds.size(); ++i) strata[ds.event(i) == 1 ? 1 : 0].push_back(i);

  std::vector<std::vector<std::size_t>> test(k);
  for (std::uint64_t s = 0; s < 2; ++s) {
    auto& members = strata[s];
    if (members.empty()) continue;
    if (members.size() < k) {
      throw InputError(std::string(s == 1 ? "event" : "censored") + " stratum has " +
                       std::to_string(members.size()) + " subjects, fewer than k = " +
                       std::to_string(k));
    }
    Rng rng = Rng::stream(seed, {kFoldShuffle, s});
    shuffle(members, rng);
    for (std::size_t m = 0; m < members.size(); ++m) test[m % k].push_back(members[m]);
  }

  std::vector<Fold> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::sort(test[f].begin(), test[f].end());
    std::vector<char> in_test(ds.size(), 0);
    for (std::size_t i : test[f]) in_test[i] = 1;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (!in_test[i]) folds[f].train.push_back(i);
    }
    folds[f].test = std::move(test[f]);
  }
  return folds;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BootstrapResult bootstrap_ci(std::span<const std::size_t> population,
                             const IndexedEstimator& estimator, const BootstrapOptions& options) {
  if (options.replicates < 1) throw InputError("bootstrap needs at least one replicate");
  if (!(options.level > 0.0 && options.level < 1.0)) {
    throw InputError("confidence level must lie in (0, 1)");
  }
  if (population.empty() || options.sample_size == 0) {
    throw InputError("bootstrap needs a nonempty population and sample size");
  }

  BootstrapResult out;
  out.point = estimator(population);

  std::vector<std::size_t> draw(options.sample_size);
  for (std::uint64_t b = 0; b < options.replicates; ++b) {
    Rng rng = Rng::stream(options.seed, {kBootstrap, b});
    for (auto& idx : draw) idx = population[static_cast<std::size_t>(rng.below(population.size()))];
    try {
      out.samples.push_back(estimator(draw));
    } catch (const NoComparablePairs&) {
      ++out.failed;
    }
  }
  if (out.samples.empty()) throw ComputationError("all bootstrap replicates failed");

  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  const double alpha = 1.0 - options.level;
  out.lo = quantile_sorted(sorted, alpha / 2.0);
  out.hi = quantile_sorted(sorted, 1.0 - alpha / 2.0);
  return out;
}

}  // namespace cindex
