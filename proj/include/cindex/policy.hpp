#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string_view>

#include "cindex/data_model.hpp"
#include "cindex/km.hpp"

namespace cindex {

/// How one pair case enters the estimate: the pair adds `comparable` to the
/// denominator and `comparable * credit` to the numerator (times its IPCW).
struct CaseRule {
  double comparable = 0.0;
  double credit = 0.0;

  bool operator==(const CaseRule&) const = default;
};

using CaseTable = std::array<CaseRule, kPairCaseCount>;

enum class GSource { test_set, provided };
enum class FinalFold { identity, max_with_complement };

struct Truncation {
  enum class Mode { none, value, max_uncensored };

  Mode mode = Mode::none;
  double tau = std::numeric_limits<double>::infinity();  // used when mode == value

  static Truncation none() { return {}; }
  static Truncation at(double tau) { return {Mode::value, tau}; }
  static Truncation max_uncensored() { return {Mode::max_uncensored, 0.0}; }

  bool operator==(const Truncation&) const = default;
};

/// Complete description of pair inclusion, credit, weighting and truncation.
struct ConcordancePolicy {
  CaseTable case_table{};
  double tie_tolerance = 0.0;
  WeightScheme weight_scheme = WeightScheme::uniform;
  GSource g_source = GSource::test_set;
  Truncation truncation;
  FinalFold final_fold = FinalFold::identity;

  const CaseRule& rule(PairCase c) const { return case_table[index_of(c)]; }
  ConcordancePolicy& set(PairCase c, double comparable, double credit) {
    case_table[index_of(c)] = {comparable, credit};
    return *this;
  }

  bool operator==(const ConcordancePolicy&) const = default;
};

/// Throws InputError for negative comparable weights, credits outside
/// [0, 1], a counted `later` case, or a negative tie tolerance.
void validate_policy(const ConcordancePolicy& policy);

/// Tie-weighted estimator with tied outcomes weighted by omega_o (case 6) and
/// tied predictions credited omega_p (cases 1C, 2C, 6C). omega_o = omega_p = 0
/// is Harrell's original estimator.
ConcordancePolicy generalized_policy(double omega_o, double omega_p);

inline ConcordancePolicy harrell_policy() { return generalized_policy(0.0, 0.0); }

/// Uno's C_tau: Harrell's pair rules with 1/G(T_i)^2 weights and truncation at tau.
ConcordancePolicy uno_policy(Truncation truncation);

enum class TdVariant { antolini, adj_antolini };

/// Pair rules of the time-dependent estimator (rank relation from survival
/// curves evaluated at the anchor's time).
ConcordancePolicy td_policy(TdVariant variant);

std::string_view to_string(WeightScheme s) noexcept;
std::string_view to_string(GSource s) noexcept;
std::string_view to_string(FinalFold f) noexcept;
std::string_view to_string(Truncation::Mode m) noexcept;
std::string_view to_string(TdVariant v) noexcept;

std::optional<WeightScheme> parse_weight_scheme(std::string_view s) noexcept;
std::optional<GSource> parse_g_source(std::string_view s) noexcept;
std::optional<FinalFold> parse_final_fold(std::string_view s) noexcept;
std::optional<Truncation::Mode> parse_truncation_mode(std::string_view s) noexcept;

}  // namespace cindex
