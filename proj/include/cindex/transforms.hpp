#pragma once

#include "cindex/data_model.hpp"

namespace cindex {

// Common evaluation grid for cross-model comparison: 0, 1, ..., 355.
inline constexpr double kDefaultGridEnd = 355.0;
inline constexpr double kDefaultTStar = 355.0;

TimeGrid default_common_grid();

/// Linear interpolation of every row onto `dst`. Before the first source
/// point the curve is 1 when the source grid starts after 0, otherwise the
/// first value; past the last source point the last value is carried forward.
SurvivalMatrix interpolate(const SurvivalMatrix& sm, const TimeGrid& dst);

/// M_i = 1 - S(t | x_i), S read by step lookup.
RiskVector risk_at_time(const SurvivalMatrix& sm, double t);

/// M_i = sum over grid points of -log S(t | x_i). Zero entries are replaced by
/// the smallest positive entry of the whole matrix. Throws ComputationError
/// ("degenerate matrix") when no entry is positive.
RiskVector expected_mortality(const SurvivalMatrix& sm);

/// M_i = -sum_{t_k < t_star} S(t_k | x_i) * (min(t_{k+1}, t_star) - t_k), a left
/// Riemann sum of the survival curve over [t_0, t_star]. The last grid point's
/// rectangle extends to t_star. Throws InputError unless t_star > t_0.
RiskVector neg_rmst(const SurvivalMatrix& sm, double t_star);

}  // namespace cindex
