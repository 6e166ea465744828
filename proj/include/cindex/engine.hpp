#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "cindex/data_model.hpp"
#include "cindex/km.hpp"
#include "cindex/policy.hpp"

namespace cindex {

struct CaseTally {
  double mass = 0.0;        // sum of anchor weights over pairs of this case
  double comparable = 0.0;  // mass * comparable weight
  double concordant = 0.0;  // mass * comparable weight * credit
};

/// Weighted pair sums broken out by case. Only pairs inside the truncation
/// window with a defined anchor weight are tallied.
struct PairTally {
  std::array<CaseTally, kPairCaseCount> cases{};
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t dropped_pairs = 0;      // comparable pairs whose anchor weight needs G = 0
  std::size_t beyond_grid = 0;        // time-dependent only: anchors past the last grid point
  std::optional<double> tau_used;     // nullopt when no truncation applied

  const CaseTally& operator[](PairCase c) const { return cases[index_of(c)]; }
};

struct ConcordanceResult {
  double estimate = 0.0;
  PairTally tally;
};

struct EngineOptions {
  // Worker threads for the pair loop. Results do not depend on this.
  unsigned threads = 1;
};

/// Resolves the truncation time for ds: nullopt for Mode::none.
std::optional<double> resolve_tau(const Truncation& truncation, const SurvivalDataset& ds);

/// Anchor weights for a policy: uniform, or IPCW from `g` when given, otherwise
/// from a censoring KM fitted on ds (g_source = test_set). Throws InputError
/// when the policy wants a provided G and none was passed.
std::vector<std::optional<double>> anchor_weights(const ConcordancePolicy& policy,
                                                  const SurvivalDataset& ds,
                                                  const StepFunction* g);

/// Scalar-risk concordance over all ordered pairs under `policy`. Throws
/// NoComparablePairs when the weighted denominator is 0.
ConcordanceResult concordance(const SurvivalDataset& ds, const RiskVector& risks,
                              const ConcordancePolicy& policy, const StepFunction* g = nullptr,
                              EngineOptions options = {});

/// Same as concordance() but never throws NoComparablePairs; the estimate is
/// NaN when the denominator is 0. Used when the tally itself is the product.
ConcordanceResult concordance_tally(const SurvivalDataset& ds, const RiskVector& risks,
                                    const ConcordancePolicy& policy,
                                    const StepFunction* g = nullptr, EngineOptions options = {});

/// Time-dependent concordance. The pair relation compares S(T_i | x_i) with
/// S(T_i | x_j), both read off the matrix by step lookup at the anchor's time;
/// the lower survival is the riskier prediction. Ties are exact.
ConcordanceResult concordance_td(const SurvivalDataset& ds, const SurvivalMatrix& sm,
                                 TdVariant variant, EngineOptions options = {});

ConcordanceResult concordance_td(const SurvivalDataset& ds, const SurvivalMatrix& sm,
                                 const ConcordancePolicy& policy, EngineOptions options = {});
/// concordance_td() without the NoComparablePairs check; NaN estimate instead.
ConcordanceResult concordance_td_tally(const SurvivalDataset& ds, const SurvivalMatrix& sm,
                                       const ConcordancePolicy& policy,
                                       EngineOptions options = {});

/// Split of the tie-weighted estimate into the T_i < T_j block and the tied
/// time, (1,0) block. A block without pairs is nullopt.
struct DecompositionReport {
  double alpha = 1.0;
  std::optional<double> base;                 // Harrell's estimate over T_i < T_j pairs
  std::optional<double> tied_prediction;      // share of tied predictions in that block
  std::optional<double> tied_time_concordant; // share of concordant (1,0) tied-time pairs
  std::optional<double> tied_time_tied_prediction;
  double recombined = 0.0;
};

/// Recombines the case masses of `tally` (computed with uniform weights) for
/// the given tie weights. Throws NoComparablePairs when both blocks are empty
/// after weighting.
DecompositionReport decompose(const PairTally& tally, double omega_o, double omega_p);

}  // namespace cindex
