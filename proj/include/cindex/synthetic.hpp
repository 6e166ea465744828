#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cindex/data_model.hpp"
#include "cindex/policy.hpp"

namespace cindex {

/// Weibull proportional hazards: h(t | x) = gamma t^(gamma-1) lambda exp(x'beta),
/// so S(t | x) = exp(-lambda t^gamma exp(x'beta)).
struct WeibullPHParams {
  double gamma = 1.0;
  double lambda = 1.0;
  std::vector<double> beta;

  void validate() const;  // throws InputError
  double linear_predictor(std::span<const double> x) const;
  double survival(double t, std::span<const double> x) const;
};

struct CensoringMechanism {
  enum class Kind { weibull_scaled, age_informed, uniform_quantile };

  Kind kind = Kind::weibull_scaled;
  double gamma_c = 1.0;
  double lambda_c = 1.0;
  double beta_age = 0.0;         // age_informed only
  std::size_t age_column = 0;    // age_informed only: covariate index holding age
  double epsilon = 0.0;          // censoring intensity

  static CensoringMechanism weibull_scaled(double gamma_c, double lambda_c, double epsilon);
  static CensoringMechanism age_informed(double gamma_c, double lambda_c, double beta_age,
                                         std::size_t age_column, double epsilon);
  static CensoringMechanism uniform_quantile(double epsilon);

  void validate() const;  // throws InputError
};

const char* to_string(CensoringMechanism::Kind k) noexcept;
std::optional<CensoringMechanism::Kind> parse_censoring_kind(std::string_view s) noexcept;

/// Inverse-transform draw for one subject: [-log u / (lambda exp(x'beta))]^(1/gamma).
double weibull_ph_time(const WeibullPHParams& params, std::span<const double> x, double u);

/// Subject i draws from its own stream of `seed`.
std::vector<double> generate_event_times(const WeibullPHParams& params,
                                         const std::vector<std::vector<double>>& covariates,
                                         std::uint64_t seed);

/// weibull_scaled: C = [-log U / (eps lambda_C)]^(1/gamma_C), +inf when eps = 0.
/// age_informed:   the same with eps lambda_C exp(beta_age * age).
/// uniform_quantile: C ~ Uniform(min T, Q_{1-eps}(T)), Q the type-7 quantile.
/// Censoring draws use streams independent of the event-time streams, and the
/// same U is reused across epsilon values for a given seed.
std::vector<double> generate_censoring(const CensoringMechanism& mechanism,
                                       std::span<const double> event_times,
                                       const std::vector<std::vector<double>>& covariates,
                                       std::uint64_t seed);

/// T = min(T~, C) and event = [T~ < C]. Ids are "1".."n".
SurvivalDataset assemble(std::span<const double> event_times, std::span<const double> censor_times,
                         std::vector<std::vector<double>> covariates = {});

/// Standard-normal covariates, p columns.
std::vector<std::vector<double>> generate_covariates(std::size_t n, std::size_t p,
                                                     std::uint64_t seed);

/// True survival curves on `grid`.
SurvivalMatrix true_survival_matrix(const WeibullPHParams& params,
                                    const std::vector<std::vector<double>>& covariates,
                                    const TimeGrid& grid);

struct OracleGrid {
  double step = 1.0;
  std::optional<double> t_star;  // default: the largest evaluated time
};

/// Grid {0, step, 2 step, ...} up to t_star, with t_star.
TimeGrid oracle_time_grid(double t_star, double step);

/// Negative RMST of the true curves on the oracle grid up to t_star.
RiskVector true_neg_rmst(const WeibullPHParams& params,
                         const std::vector<std::vector<double>>& covariates, double t_star,
                         double step = 1.0);

/// Concordance of true-curve RMST risks against uncensored times (all events).
/// `policy` defaults to Harrell's.
double oracle_cindex(const WeibullPHParams& params,
                     const std::vector<std::vector<double>>& covariates,
                     std::span<const double> uncensored_times, const OracleGrid& grid = {},
                     const ConcordancePolicy& policy = harrell_policy());

/// Seed of dataset `index` within a run seeded with `seed`.
std::uint64_t dataset_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace cindex
