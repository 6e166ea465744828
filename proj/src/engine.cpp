#include "cindex/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "cindex/error.hpp"

namespace cindex {
namespace {

struct AnchorPartial {
  std::array<CaseTally, kPairCaseCount> cases{};
  std::size_t dropped = 0;
  bool beyond_grid = false;
};

constexpr std::size_t kChunk = 2048;

// Pairs are tallied per anchor and the per-anchor partials are folded into the
// totals in subject order, so the result is bit-identical for any thread count.
template <class Relation>
PairTally run_pairs(const SurvivalDataset& ds, std::span<const std::optional<double>> weights,
                    const ConcordancePolicy& policy, std::optional<double> tau,
                    const Relation& relation, EngineOptions options,
                    const TimeGrid* grid = nullptr) {
  const std::size_t n = ds.size();
  const auto times = ds.times();
  const auto events = ds.events();

  auto tally_anchor = [&](std::size_t i, AnchorPartial& out) {
    out = AnchorPartial{};
    const double ti = times[i];
    if (tau && !(ti < *tau)) return;
    if (grid && ti > grid->back()) out.beyond_grid = true;
    const int di = events[i];
    const std::optional<double>& wi = weights[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double tj = times[j];
      if (ti > tj) continue;
      const PairCase c = classify_pair(ti, di, tj, events[j], relation(i, j));
      const CaseRule& rule = policy.rule(c);
      if (!wi) {
        if (rule.comparable > 0.0) ++out.dropped;
        continue;
      }
      CaseTally& ct = out.cases[index_of(c)];
      ct.mass += *wi;
      if (rule.comparable > 0.0) {
        const double term = *wi * rule.comparable;
        ct.comparable += term;
        ct.concordant += term * rule.credit;
      }
    }
  };

  PairTally tally;
  tally.tau_used = tau;

  const unsigned threads = std::max(1u, options.threads);
  std::vector<AnchorPartial> partials(std::min(n, kChunk));
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t len = std::min(kChunk, n - start);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, len));
    if (workers <= 1) {
      for (std::size_t k = 0; k < len; ++k) tally_anchor(start + k, partials[k]);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = len * w / workers;
        const std::size_t hi = len * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
          for (std::size_t k = lo; k < hi; ++k) tally_anchor(start + k, partials[k]);
        });
      }
    }
    for (std::size_t k = 0; k < len; ++k) {
      const AnchorPartial& p = partials[k];
      for (std::size_t c = 0; c < kPairCaseCount; ++c) {
        tally.cases[c].mass += p.cases[c].mass;
        tally.cases[c].comparable += p.cases[c].comparable;
        tally.cases[c].concordant += p.cases[c].concordant;
      }
      tally.dropped_pairs += p.dropped;
      if (p.beyond_grid) ++tally.beyond_grid;
    }
  }

  for (const CaseTally& ct : tally.cases) {
    tally.numerator += ct.concordant;
    tally.denominator += ct.comparable;
  }
  return tally;
}

double finish(const PairTally& tally, FinalFold fold) {
  if (!(tally.denominator > 0.0)) return std::nan("");
  const double c = tally.numerator / tally.denominator;
  return fold == FinalFold::max_with_complement ? std::max(c, 1.0 - c) : c;
}

ConcordanceResult checked(ConcordanceResult r) {
  if (std::isnan(r.estimate)) throw NoComparablePairs();
  return r;
}

}  // namespace

std::optional<double> resolve_tau(const Truncation& truncation, const SurvivalDataset& ds) {
  switch (truncation.mode) {
    case Truncation::Mode::none:
      return std::nullopt;
    case Truncation::Mode::value:
      return truncation.tau;
    case Truncation::Mode::max_uncensored: {
      double tau = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds.event(i) == 1) tau = std::max(tau, ds.time(i));
      }
      return tau;
    }
  }
  return std::nullopt;
}

std::vector<std::optional<double>> anchor_weights(const ConcordancePolicy& policy,
                                                  const SurvivalDataset& ds,
                                                  const StepFunction* g) {
  if (policy.weight_scheme == WeightScheme::uniform) {
    return std::vector<std::optional<double>>(ds.size(), 1.0);
  }
  if (g) return ipcw_weights(*g, ds, policy.weight_scheme);
  if (policy.g_source == GSource::provided) {
    throw InputError("policy requires a provided censoring distribution");
  }
  if (ds.empty()) return {};
  return ipcw_weights(km_fit(ds, KmTarget::censoring), ds, policy.weight_scheme);
}

ConcordanceResult concordance_tally(const SurvivalDataset& ds, const RiskVector& risks,
                                    const ConcordancePolicy& policy, const StepFunction* g,
                                    EngineOptions options) {
  require_valid(ds);
  validate_policy(policy);
  if (risks.size() != ds.size()) {
    throw InputError("risk vector has " + std::to_string(risks.size()) + " values for " +
                     std::to_string(ds.size()) + " subjects");
  }
  const auto weights = anchor_weights(policy, ds, g);
  const auto m = risks.values();
  const double tol = policy.tie_tolerance;
  auto relation = [m, tol](std::size_t i, std::size_t j) { return compare_risks(m[i], m[j], tol); };

  ConcordanceResult r;
  r.tally = run_pairs(ds, weights, policy, resolve_tau(policy.truncation, ds), relation, options);
  r.estimate = finish(r.tally, policy.final_fold);
  return r;
}

ConcordanceResult concordance(const SurvivalDataset& ds, const RiskVector& risks,
                              const ConcordancePolicy& policy, const StepFunction* g,
                              EngineOptions options) {
  return checked(concordance_tally(ds, risks, policy, g, options));
}

ConcordanceResult concordance_td_tally(const SurvivalDataset& ds, const SurvivalMatrix& sm,
                                       const ConcordancePolicy& policy, EngineOptions options) {
  require_valid(ds);
  validate_policy(policy);
  if (sm.rows() != ds.size()) {
    throw InputError("survival matrix has " + std::to_string(sm.rows()) + " rows for " +
                     std::to_string(ds.size()) + " subjects");
  }
  const TimeGrid& grid = sm.grid();
  std::vector<std::optional<std::size_t>> anchor_col(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) anchor_col[i] = grid.floor_index(ds.time(i));

  auto relation = [&](std::size_t i, std::size_t j) {
    const auto& k = anchor_col[i];
    const double si = k ? sm.at(i, *k) : 1.0;
    const double sj = k ? sm.at(j, *k) : 1.0;
    if (si < sj) return RankRelation::greater;
    if (si > sj) return RankRelation::less;
    return RankRelation::tied;
  };

  const auto weights = anchor_weights(policy, ds, nullptr);
  ConcordanceResult r;
  r.tally = run_pairs(ds, weights, policy, resolve_tau(policy.truncation, ds), relation, options,
                      grid.empty() ? nullptr : &grid);
  r.estimate = finish(r.tally, policy.final_fold);
  return r;
}

ConcordanceResult concordance_td(const SurvivalDataset& ds, const SurvivalMatrix& sm,
                                 const ConcordancePolicy& policy, EngineOptions options) {
  return checked(concordance_td_tally(ds, sm, policy, options));
}

ConcordanceResult concordance_td(const SurvivalDataset& ds, const SurvivalMatrix& sm,
                                 TdVariant variant, EngineOptions options) {
  return concordance_td(ds, sm, td_policy(variant), options);
}

DecompositionReport decompose(const PairTally& tally, double omega_o, double omega_p) {
  auto mass = [&](PairCase c) { return tally[c].mass; };
  const double a = mass(PairCase::c1A) + mass(PairCase::c1B) + mass(PairCase::c1C) +
                   mass(PairCase::c2A) + mass(PairCase::c2B) + mass(PairCase::c2C);
  const double a_conc = mass(PairCase::c1A) + mass(PairCase::c2A);
  const double a_tied = mass(PairCase::c1C) + mass(PairCase::c2C);
  const double b = mass(PairCase::c6A) + mass(PairCase::c6B) + mass(PairCase::c6C);
  const double b_conc = mass(PairCase::c6A);
  const double b_tied = mass(PairCase::c6C);

  const double total = a + omega_o * b;
  if (!(total > 0.0)) throw NoComparablePairs();

  DecompositionReport rep;
  rep.alpha = a / total;
  double value = 0.0;
  if (a > 0.0) {
    rep.base = a_conc / a;
    rep.tied_prediction = a_tied / a;
    value += rep.alpha * (*rep.base + omega_p * *rep.tied_prediction);
  }
  if (b > 0.0) {
    rep.tied_time_concordant = b_conc / b;
    rep.tied_time_tied_prediction = b_tied / b;
    value += (1.0 - rep.alpha) * (*rep.tied_time_concordant + omega_p * *rep.tied_time_tied_prediction);
  }
  rep.recombined = value;
  return rep;
}

}  // namespace cindex
