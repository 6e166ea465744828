#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cindex/data_model.hpp"

namespace cindex {

struct Fold {
  std::vector<std::size_t> train;  // sorted
  std::vector<std::size_t> test;   // sorted
};

/// Stratified k-fold split: events and censored subjects are shuffled and
/// dealt round-robin into k folds independently, so every fold gets a
/// near-equal share of each. An empty stratum is skipped; a nonempty stratum
/// with fewer than k members is an InputError.
std::vector<Fold> stratified_kfold(const SurvivalDataset& ds, std::size_t k, std::uint64_t seed);

struct BootstrapOptions {
  std::size_t replicates = 100;
  std::size_t sample_size = 1000;
  double level = 0.95;
  std::uint64_t seed = 1;
};

struct BootstrapResult {
  double point = 0.0;            // estimator on the full index set
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> samples;   // successful replicates, in replicate order
  std::size_t failed = 0;        // replicates without comparable pairs
};

/// Estimator over an index set into some caller-owned data. Throwing
/// NoComparablePairs marks a replicate as failed.
using IndexedEstimator = std::function<double(std::span<const std::size_t>)>;

/// Percentile bootstrap. Replicate b draws sample_size indices with
/// replacement from `population` using its own RNG stream, so replicates are
/// reproducible independently of each other. Throws ComputationError when
/// every replicate fails.
BootstrapResult bootstrap_ci(std::span<const std::size_t> population,
                             const IndexedEstimator& estimator, const BootstrapOptions& options);

/// Sample quantile with linear interpolation between order statistics
/// (R's type 7). `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double p);

}  // namespace cindex
