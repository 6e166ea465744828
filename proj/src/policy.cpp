#include "cindex/policy.hpp"

#include <cmath>
#include <string>

#include "cindex/error.hpp"

namespace cindex {

void validate_policy(const ConcordancePolicy& policy) {
  for (PairCase c : kAllPairCases) {
    const CaseRule& r = policy.rule(c);
    const std::string label(to_string(c));
    if (!std::isfinite(r.comparable) || r.comparable < 0.0) {
      throw InputError("case " + label + ": comparable weight must be finite and >= 0");
    }
    if (!(r.credit >= 0.0 && r.credit <= 1.0)) {
      throw InputError("case " + label + ": credit must lie in [0, 1]");
    }
  }
  if (policy.rule(PairCase::later).comparable != 0.0) {
    throw InputError("pairs with T_i > T_j cannot be comparable");
  }
  if (!(policy.tie_tolerance >= 0.0)) throw InputError("tie tolerance must be >= 0");
  if (policy.truncation.mode == Truncation::Mode::value && std::isnan(policy.truncation.tau)) {
    throw InputError("truncation tau is NaN");
  }
}

ConcordancePolicy generalized_policy(double omega_o, double omega_p) {
  ConcordancePolicy p;
  p.set(PairCase::c1A, 1, 1).set(PairCase::c1B, 1, 0).set(PairCase::c1C, 1, omega_p);
  p.set(PairCase::c2A, 1, 1).set(PairCase::c2B, 1, 0).set(PairCase::c2C, 1, omega_p);
  p.set(PairCase::c6A, omega_o, 1).set(PairCase::c6B, omega_o, 0).set(PairCase::c6C, omega_o, omega_p);
  return p;
}

ConcordancePolicy uno_policy(Truncation truncation) {
  ConcordancePolicy p = harrell_policy();
  p.weight_scheme = WeightScheme::uno_squared;
  p.truncation = truncation;
  return p;
}

ConcordancePolicy td_policy(TdVariant variant) {
  ConcordancePolicy p;
  p.set(PairCase::c1A, 1, 1).set(PairCase::c1B, 1, 0);
  p.set(PairCase::c2A, 1, 1).set(PairCase::c2B, 1, 0);
  p.set(PairCase::c6A, 1, 1).set(PairCase::c6B, 1, 0);
  if (variant == TdVariant::antolini) {
    p.set(PairCase::c1C, 1, 0).set(PairCase::c2C, 1, 0).set(PairCase::c6C, 1, 0);
  } else {
    p.set(PairCase::c1C, 1, 0.5).set(PairCase::c2C, 1, 0.5).set(PairCase::c6C, 1, 0.5);
    p.set(PairCase::c5A, 1, 0.5).set(PairCase::c5B, 1, 0.5).set(PairCase::c5C, 1, 1);
    p.set(PairCase::c7A, 1, 0).set(PairCase::c7B, 1, 1).set(PairCase::c7C, 1, 0.5);
  }
  return p;
}

std::string_view to_string(WeightScheme s) noexcept {
  switch (s) {
    case WeightScheme::uniform: return "uniform";
    case WeightScheme::uno_squared: return "uno_squared";
    case WeightScheme::pec_product: return "pec_product";
  }
  return "?";
}

std::string_view to_string(GSource s) noexcept {
  return s == GSource::test_set ? "test_set" : "provided";
}

std::string_view to_string(FinalFold f) noexcept {
  return f == FinalFold::identity ? "identity" : "max_with_complement";
}

std::string_view to_string(Truncation::Mode m) noexcept {
  switch (m) {
    case Truncation::Mode::none: return "none";
    case Truncation::Mode::value: return "value";
    case Truncation::Mode::max_uncensored: return "max_uncensored";
  }
  return "?";
}

std::string_view to_string(TdVariant v) noexcept {
  return v == TdVariant::antolini ? "antolini" : "adj_antolini";
}

std::optional<WeightScheme> parse_weight_scheme(std::string_view s) noexcept {
  if (s == "uniform") return WeightScheme::uniform;
  if (s == "uno_squared") return WeightScheme::uno_squared;
  if (s == "pec_product") return WeightScheme::pec_product;
  return std::nullopt;
}

std::optional<GSource> parse_g_source(std::string_view s) noexcept {
  if (s == "test_set") return GSource::test_set;
  if (s == "provided") return GSource::provided;
  return std::nullopt;
}

std::optional<FinalFold> parse_final_fold(std::string_view s) noexcept {
  if (s == "identity") return FinalFold::identity;
  if (s == "max_with_complement") return FinalFold::max_with_complement;
  return std::nullopt;
}

std::optional<Truncation::Mode> parse_truncation_mode(std::string_view s) noexcept {
  if (s == "none") return Truncation::Mode::none;
  if (s == "value") return Truncation::Mode::value;
  if (s == "max_uncensored") return Truncation::Mode::max_uncensored;
  return std::nullopt;
}

}  // namespace cindex
