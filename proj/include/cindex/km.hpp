#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cindex/data_model.hpp"

namespace cindex {

/// Right-continuous, nonincreasing step function starting at 1. values[k]
/// holds on [jump_times[k], jump_times[k+1]).
class StepFunction {
 public:
  StepFunction() = default;
  /// Throws InputError unless jump_times is strictly increasing and values is
  /// nonincreasing within [0, 1].
  StepFunction(std::vector<double> jump_times, std::vector<double> values);

  std::span<const double> jump_times() const noexcept { return jump_times_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t jumps() const noexcept { return jump_times_.size(); }

  /// Value at t (right-continuous).
  double eval(double t) const noexcept;
  /// Limit from the left at t.
  double eval_left(double t) const noexcept;

 private:
  std::vector<double> jump_times_;
  std::vector<double> values_;
};

enum class KmTarget { event, censoring };

/// Product-limit estimate. With target=censoring the roles of events and
/// censorings are swapped, giving the censoring survivor function G(t).
///
/// Risk sets are n_k = #{T >= t_k}: subjects with the other status at t_k
/// are still at risk when the target status is counted. Throws InputError
/// when ds is empty or invalid.
StepFunction km_fit(const SurvivalDataset& ds, KmTarget target);

enum class WeightScheme { uniform, uno_squared, pec_product };

/// Per-subject inverse-probability-of-censoring weights, anchored at T_i:
///   uno_squared  1 / G(T_i)^2
///   pec_product  1 / (G(T_i-) G(T_i))
///   uniform      1
/// A subject whose weight would need G = 0 gets nullopt.
std::vector<std::optional<double>> ipcw_weights(const StepFunction& g, const SurvivalDataset& ds,
                                                WeightScheme scheme);

}  // namespace cindex
