#include "cindex/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cindex/engine.hpp"
#include "cindex/error.hpp"
#include "cindex/resampling.hpp"
#include "cindex/rng.hpp"
#include "cindex/transforms.hpp"

namespace cindex {
namespace {

enum : std::uint64_t {
  kEventStream = 0x6576656e74,
  kCensorStream = 0x63656e736f72,
  kCovariateStream = 0x636f76,
  kDatasetStream = 0x64617461,
};

void check_dims(const WeibullPHParams& params, const std::vector<std::vector<double>>& covariates) {
  for (std::size_t i = 0; i < covariates.size(); ++i) {
    if (covariates[i].size() != params.beta.size()) {
      throw InputError("covariate row " + std::to_string(i) + " has dimension " +
                       std::to_string(covariates[i].size()) + ", beta has " +
                       std::to_string(params.beta.size()));
    }
  }
}

}  // namespace

void WeibullPHParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be > 0");
  for (double b : beta) {
    if (!std::isfinite(b)) throw InputError("beta must be finite");
  }
}

double WeibullPHParams::linear_predictor(std::span<const double> x) const {
  double lp = 0.0;
  for (std::size_t k = 0; k < beta.size(); ++k) lp += x[k] * beta[k];
  return lp;
}

double WeibullPHParams::survival(double t, std::span<const double> x) const {
  if (t <= 0.0) return 1.0;
  return std::exp(-lambda * std::pow(t, gamma) * std::exp(linear_predictor(x)));
}

CensoringMechanism CensoringMechanism::weibull_scaled(double gamma_c, double lambda_c,
                                                      double epsilon) {
  return {Kind::weibull_scaled, gamma_c, lambda_c, 0.0, 0, epsilon};
}

CensoringMechanism CensoringMechanism::age_informed(double gamma_c, double lambda_c,
                                                    double beta_age, std::size_t age_column,
                                                    double epsilon) {
  return {Kind::age_informed, gamma_c, lambda_c, beta_age, age_column, epsilon};
}

CensoringMechanism CensoringMechanism::uniform_quantile(double epsilon) {
  CensoringMechanism m;
  m.kind = Kind::uniform_quantile;
  m.epsilon = epsilon;
  return m;
}

void CensoringMechanism::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be >= 0");
  if (kind == Kind::uniform_quantile) {
    if (!(epsilon < 1.0)) throw InputError("uniform_quantile epsilon must lie in [0, 1)");
    return;
  }
  if (!(gamma_c > 0.0) || !std::isfinite(gamma_c)) throw InputError("gamma_c must be > 0");
  if (!(lambda_c > 0.0) || !std::isfinite(lambda_c)) throw InputError("lambda_c must be > 0");
  if (!std::isfinite(beta_age)) throw InputError("beta_age must be finite");
}

const char* to_string(CensoringMechanism::Kind k) noexcept {
  switch (k) {
    case CensoringMechanism::Kind::weibull_scaled: return "weibull_scaled";
    case CensoringMechanism::Kind::age_informed: return "age_informed";
    case CensoringMechanism::Kind::uniform_quantile: return "uniform_quantile";
  }
  return "?";
}

std::optional<CensoringMechanism::Kind> parse_censoring_kind(std::string_view s) noexcept {
  if (s == "weibull_scaled") return CensoringMechanism::Kind::weibull_scaled;
  if (s == "age_informed") return CensoringMechanism::Kind::age_informed;
  if (s == "uniform_quantile") return CensoringMechanism::Kind::uniform_quantile;
  return std::nullopt;
}

double weibull_ph_time(const WeibullPHParams& params, std::span<const double> x, double u) {
  const double rate = params.lambda * std::exp(params.linear_predictor(x));
  return std::pow(-std::log(u) / rate, 1.0 / params.gamma);
}

std::vector<double> generate_event_times(const WeibullPHParams& params,
                                         const std::vector<std::vector<double>>& covariates,
                                         std::uint64_t seed) {
  params.validate();
  check_dims(params, covariates);
  std::vector<double> times(covariates.size());
  for (std::size_t i = 0; i < covariates.size(); ++i) {
    Rng rng = Rng::stream(seed, {kEventStream, i});
    times[i] = weibull_ph_time(params, covariates[i], rng.uniform());
  }
  return times;
}

std::vector<double> generate_censoring(const CensoringMechanism& mechanism,
                                       std::span<const double> event_times,
                                       const std::vector<std::vector<double>>& covariates,
                                       std::uint64_t seed) {
  mechanism.validate();
  const std::size_t n = event_times.size();
  std::vector<double> censor(n);
  auto draw = [seed](std::size_t i) { return Rng::stream(seed, {kCensorStream, i}).uniform(); };

  switch (mechanism.kind) {
    case CensoringMechanism::Kind::weibull_scaled:
    case CensoringMechanism::Kind::age_informed: {
      const bool aged = mechanism.kind == CensoringMechanism::Kind::age_informed;
      if (aged && covariates.size() != n) {
        throw InputError("age-informed censoring needs one covariate row per subject");
      }
      for (std::size_t i = 0; i < n; ++i) {
        double rate = mechanism.epsilon * mechanism.lambda_c;
        if (aged) {
          if (mechanism.age_column >= covariates[i].size()) {
            throw InputError("age column out of range for covariate row " + std::to_string(i));
          }
          rate *= std::exp(mechanism.beta_age * covariates[i][mechanism.age_column]);
        }
        const double u = draw(i);
        censor[i] = rate > 0.0 ? std::pow(-std::log(u) / rate, 1.0 / mechanism.gamma_c)
                               : std::numeric_limits<double>::infinity();
      }
      break;
    }
    case CensoringMechanism::Kind::uniform_quantile: {
      if (n == 0) return censor;
      std::vector<double> sorted(event_times.begin(), event_times.end());
      std::sort(sorted.begin(), sorted.end());
      const double c_min = sorted.front();
      const double c_max = quantile_sorted(sorted, 1.0 - mechanism.epsilon);
      if (!(c_max > c_min)) throw InputError("uniform censoring range is degenerate");
      for (std::size_t i = 0; i < n; ++i) censor[i] = c_min + (c_max - c_min) * draw(i);
      break;
    }
  }
  return censor;
}

SurvivalDataset assemble(std::span<const double> event_times, std::span<const double> censor_times,
                         std::vector<std::vector<double>> covariates) {
  if (event_times.size() != censor_times.size()) {
    throw InputError("event and censoring times differ in length");
  }
  std::vector<SurvivalRecord> records(event_times.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double t = event_times[i];
    const double c = censor_times[i];
    records[i] = {std::to_string(i + 1), std::min(t, c), t < c ? 1 : 0};
  }
  return SurvivalDataset(std::move(records), std::move(covariates));
}

std::vector<std::vector<double>> generate_covariates(std::size_t n, std::size_t p,
                                                     std::uint64_t seed) {
  std::vector<std::vector<double>> x(n, std::vector<double>(p));
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::stream(seed, {kCovariateStream, i});
    for (double& v : x[i]) v = rng.normal();
  }
  return x;
}

SurvivalMatrix true_survival_matrix(const WeibullPHParams& params,
                                    const std::vector<std::vector<double>>& covariates,
                                    const TimeGrid& grid) {
  params.validate();
  check_dims(params, covariates);
  const std::size_t m = grid.size();
  std::vector<double> tg(m);
  for (std::size_t k = 0; k < m; ++k) tg[k] = std::pow(grid[k], params.gamma);

  std::vector<double> probs(covariates.size() * m);
  for (std::size_t i = 0; i < covariates.size(); ++i) {
    const double rate = params.lambda * std::exp(params.linear_predictor(covariates[i]));
    for (std::size_t k = 0; k < m; ++k) probs[i * m + k] = std::exp(-rate * tg[k]);
  }
  return SurvivalMatrix(grid, covariates.size(), std::move(probs));
}

TimeGrid oracle_time_grid(double t_star, double step) {
  if (!(t_star > 0.0) || !std::isfinite(t_star)) throw InputError("T* must be positive");
  const auto last = static_cast<std::size_t>(std::floor(t_star / step));
  std::vector<double> pts;
  pts.reserve(last + 2);
  for (std::size_t k = 0; k <= last; ++k) pts.push_back(static_cast<double>(k) * step);
  if (pts.back() < t_star) pts.push_back(t_star);
  return TimeGrid(std::move(pts));
}

RiskVector true_neg_rmst(const WeibullPHParams& params,
                         const std::vector<std::vector<double>>& covariates, double t_star,
                         double step) {
  return neg_rmst(true_survival_matrix(params, covariates, oracle_time_grid(t_star, step)), t_star);
}

double oracle_cindex(const WeibullPHParams& params,
                     const std::vector<std::vector<double>>& covariates,
                     std::span<const double> uncensored_times, const OracleGrid& grid,
                     const ConcordancePolicy& policy) {
  if (uncensored_times.size() != covariates.size()) {
    throw InputError("oracle needs one uncensored time per covariate row");
  }
  if (uncensored_times.empty()) throw NoComparablePairs();
  const double t_star =
      grid.t_star.value_or(*std::max_element(uncensored_times.begin(), uncensored_times.end()));

  std::vector<SurvivalRecord> records(uncensored_times.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i] = {std::to_string(i + 1), uncensored_times[i], 1};
  }
  const SurvivalDataset ds(std::move(records));
  return concordance(ds, true_neg_rmst(params, covariates, t_star, grid.step), policy).estimate;
}

std::uint64_t dataset_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return Rng::stream(seed, {kDatasetStream, index}).next();
}

}  // namespace cindex
