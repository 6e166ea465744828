#include "cindex/km.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cindex/error.hpp"

namespace cindex {

StepFunction::StepFunction(std::vector<double> jump_times, std::vector<double> values)
    : jump_times_(std::move(jump_times)), values_(std::move(values)) {
  if (jump_times_.size() != values_.size()) {
    throw InputError("step function needs one value per jump time");
  }
  double prev = 1.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (k > 0 && !(jump_times_[k] > jump_times_[k - 1])) {
      throw InputError("step function jump times must be strictly increasing");
    }
    if (!(values_[k] >= 0.0 && values_[k] <= prev)) {
      throw InputError("step function values must be nonincreasing in [0, 1]");
    }
    prev = values_[k];
  }
}

double StepFunction::eval(double t) const noexcept {
  auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return 1.0;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepFunction::eval_left(double t) const noexcept {
  auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return 1.0;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

StepFunction km_fit(const SurvivalDataset& ds, KmTarget target) {
  if (ds.empty()) throw InputError("no records");
  require_valid(ds);

  const std::size_t n = ds.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ds.time(a) < ds.time(b); });

  const int counted = target == KmTarget::event ? 1 : 0;

  // Between two times at which subjects leave without being counted, the
  // product of (n_k - d_k) / n_k telescopes to at_risk / base. Keeping the
  // product in that form makes the estimate exact (one rounding) whenever
  // there is nothing to remove, e.g. the empirical survivor function.
  double scale = 1.0;
  std::size_t base = n;
  std::size_t at_risk = n;

  std::vector<double> jumps;
  std::vector<double> values;
  std::size_t k = 0;
  while (k < n) {
    const double t = ds.time(order[k]);
    std::size_t d = 0;
    std::size_t c = 0;
    for (; k < n && ds.time(order[k]) == t; ++k) {
      if (ds.event(order[k]) == counted) ++d; else ++c;
    }
    if (d > 0) {
      at_risk -= d;
      jumps.push_back(t);
      values.push_back(scale * (static_cast<double>(at_risk) / static_cast<double>(base)));
    }
    if (c > 0) {
      at_risk -= c;
      scale = values.empty() ? 1.0 : values.back();
      base = at_risk;
    }
  }
  return StepFunction(std::move(jumps), std::move(values));
}

std::vector<std::optional<double>> ipcw_weights(const StepFunction& g, const SurvivalDataset& ds,
                                                WeightScheme scheme) {
  std::vector<std::optional<double>> w(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double t = ds.time(i);
    switch (scheme) {
      case WeightScheme::uniform:
        w[i] = 1.0;
        break;
      case WeightScheme::uno_squared: {
        const double gt = g.eval(t);
        if (gt > 0.0) w[i] = 1.0 / (gt * gt);
        break;
      }
      case WeightScheme::pec_product: {
        const double gt = g.eval(t);
        const double gl = g.eval_left(t);
        if (gt > 0.0 && gl > 0.0) w[i] = 1.0 / (gl * gt);
        break;
      }
    }
  }
  return w;
}

}  // namespace cindex
