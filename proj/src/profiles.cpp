#include "cindex/profiles.hpp"

#include <fstream>
#include <numeric>

#include "cindex/error.hpp"

namespace cindex {
namespace {

// Pairs with T_i < T_j and an uncensored anchor, tied predictions credited
// `tied_credit` or excluded when nullopt.
void earlier_anchor_rules(ConcordancePolicy& p, std::optional<double> tied_credit) {
  p.set(PairCase::c1A, 1, 1).set(PairCase::c1B, 1, 0);
  p.set(PairCase::c2A, 1, 1).set(PairCase::c2B, 1, 0);
  if (tied_credit) p.set(PairCase::c1C, 1, *tied_credit).set(PairCase::c2C, 1, *tied_credit);
}

// Tied times with (1,0) status.
void tied_time_rules(ConcordancePolicy& p, std::optional<double> tied_credit) {
  p.set(PairCase::c6A, 1, 1).set(PairCase::c6B, 1, 0);
  if (tied_credit) p.set(PairCase::c6C, 1, *tied_credit);
}

Profile make(std::string name, EstimatorFamily family, ConcordancePolicy policy, std::string notes) {
  Profile p;
  p.name = std::move(name);
  p.family = family;
  p.policy = std::move(policy);
  p.notes = std::move(notes);
  return p;
}

}  // namespace

std::string_view to_string(EstimatorFamily f) noexcept {
  switch (f) {
    case EstimatorFamily::c: return "C";
    case EstimatorFamily::c_tau: return "C_tau";
    case EstimatorFamily::c_td: return "C_td";
  }
  return "?";
}

std::optional<EstimatorFamily> parse_estimator_family(std::string_view s) noexcept {
  if (s == "C") return EstimatorFamily::c;
  if (s == "C_tau") return EstimatorFamily::c_tau;
  if (s == "C_td") return EstimatorFamily::c_td;
  return std::nullopt;
}

Profile hmisc_profile(bool outx) {
  ConcordancePolicy p;
  const std::optional<double> tied = outx ? std::nullopt : std::optional<double>(0.5);
  earlier_anchor_rules(p, tied);
  tied_time_rules(p, tied);
  return make(outx ? "hmisc_outx" : "hmisc", EstimatorFamily::c, p,
              outx ? "Hmisc rcorr.cens, outx=TRUE: pairs with tied predictions are not comparable; "
                     "tied times with (1,0) status comparable."
                   : "Hmisc rcorr.cens, outx=FALSE (default): tied predictions credited 0.5; "
                     "tied times with (1,0) status comparable.");
}

Profile survmetrics_profile() {
  ConcordancePolicy p;
  earlier_anchor_rules(p, 0.5);
  p.set(PairCase::c5A, 1, 0.5).set(PairCase::c5B, 1, 0.5).set(PairCase::c5C, 1, 1);
  p.set(PairCase::c6A, 1, 1).set(PairCase::c6B, 1, 0.5).set(PairCase::c6C, 1, 0.5);
  return make("survmetrics", EstimatorFamily::c, p,
              "SurvMetrics Cindex: tied event times with (1,1) status comparable (credit 0.5, or 1 "
              "with tied predictions); (1,0) tied times with the censored subject riskier get 0.5.");
}

Profile lifelines_profile() {
  ConcordancePolicy p;
  earlier_anchor_rules(p, 0.5);
  tied_time_rules(p, 0.5);
  return make("lifelines", EstimatorFamily::c, p,
              "lifelines concordance_index: tied predictions credited 0.5.");
}

Profile pysurvival_profile(bool include_ties) {
  ConcordancePolicy p;
  const double tied = include_ties ? 0.5 : 0.0;
  earlier_anchor_rules(p, tied);
  tied_time_rules(p, tied);
  p.weight_scheme = WeightScheme::pec_product;
  p.g_source = GSource::test_set;
  p.final_fold = FinalFold::max_with_complement;
  return make(include_ties ? "pysurvival" : "pysurvival_noties", EstimatorFamily::c, p,
              std::string("pysurvival concordance_index, include_ties=") +
                  (include_ties ? "TRUE (default)" : "FALSE") +
                  ": weights 1/(G(T_i-) G(T_i)) from the test set, no truncation, reports "
                  "max(C, 1 - C). Without include_ties tied predictions stay comparable with "
                  "credit 0.");
}

Profile sksurv_censored_profile() {
  ConcordancePolicy p;
  earlier_anchor_rules(p, 0.5);
  tied_time_rules(p, 0.5);
  p.tie_tolerance = 1e-8;
  return make("sksurv_censored", EstimatorFamily::c, p,
              "scikit-survival concordance_index_censored: predictions within tied_tol=1e-8 are "
              "tied and credited 0.5.");
}

Profile sksurv_ipcw_profile() {
  ConcordancePolicy p;
  earlier_anchor_rules(p, 0.5);
  tied_time_rules(p, 0.5);
  p.weight_scheme = WeightScheme::uno_squared;
  p.g_source = GSource::provided;
  return make("sksurv_ipcw", EstimatorFamily::c_tau, p,
              "scikit-survival concordance_index_ipcw: weights 1/G(T_i)^2 with G fitted on a "
              "training set (pass the test set to reproduce the same-data workaround); no "
              "truncation by default.");
}

Profile pec_profile(PecTieFlags flags) {
  const bool o = flags.tied_outcome_in;
  const bool pr = flags.tied_pred_in;
  const bool m = flags.tied_match_in;
  ConcordancePolicy p;
  earlier_anchor_rules(p, pr ? std::optional<double>(0.5) : std::nullopt);
  if (o) p.set(PairCase::c5A, 1, 1).set(PairCase::c5B, 1, 0);
  if (m) {
    p.set(PairCase::c5C, 1, 1);
  } else if (pr) {
    p.set(PairCase::c5C, 1, o ? 0.5 : 0.0);
  }
  tied_time_rules(p, pr ? std::optional<double>(0.5) : std::nullopt);
  p.weight_scheme = WeightScheme::pec_product;
  p.g_source = GSource::test_set;
  p.truncation = Truncation::max_uncensored();

  const bool defaults = o && pr && m;
  std::string name = "pec";
  if (!defaults) name += std::string(":") + (o ? '1' : '0') + (pr ? '1' : '0') + (m ? '1' : '0');
  return make(std::move(name), EstimatorFamily::c_tau, p,
              std::string("pec cindex, tiedOutcomeIn=") + (o ? "TRUE" : "FALSE") +
                  ", tiedPredictionsIn=" + (pr ? "TRUE" : "FALSE") + ", tiedMatchIn=" +
                  (m ? "TRUE" : "FALSE") +
                  ": weights 1/(G(T_i-) G(T_i)) from the test set; tau defaults to the largest "
                  "uncensored time.");
}

Profile survival_n_profile() {
  ConcordancePolicy p;
  earlier_anchor_rules(p, 0.5);
  tied_time_rules(p, 0.5);
  return make("survival_n", EstimatorFamily::c_tau, p,
              "survival concordance, timewt=\"n\": unweighted, tied predictions 0.5, no "
              "truncation by default.");
}

Profile survival_n_g2_profile() {
  Profile pr = survival_n_profile();
  pr.name = "survival_n_g2";
  pr.policy.weight_scheme = WeightScheme::uno_squared;
  pr.policy.g_source = GSource::test_set;
  pr.notes =
      "survival concordance, timewt=\"n/G2\": weights 1/G(T_i)^2 (the tabulated form), tied "
      "predictions 0.5, no truncation by default.";
  return pr;
}

Profile survc1_profile() {
  ConcordancePolicy p;
  earlier_anchor_rules(p, 0.5);
  p.set(PairCase::c2C, 1, 1);
  p.weight_scheme = WeightScheme::uno_squared;
  p.g_source = GSource::test_set;
  Profile pr = make("survc1", EstimatorFamily::c_tau, p,
                    "survC1 Est.Val: weights 1/G(T_i)^2; tied times never comparable; a "
                    "(1,0) pair with tied predictions gets full credit. tau must be given.");
  pr.requires_tau = true;
  return pr;
}

Profile pycox_profile(TdVariant variant) {
  const bool adj = variant == TdVariant::adj_antolini;
  return make(adj ? "pycox_adj_ant" : "pycox_ant", EstimatorFamily::c_td, td_policy(variant),
              adj ? "pycox concordance_td, method=\"adj_antolini\" (default): tie adjustments for "
                    "tied times and tied survival."
                  : "pycox concordance_td, method=\"antolini\": tied survival never concordant; "
                    "tied times only with (1,0) status.");
}

std::vector<Profile> builtin_profiles() {
  return {
      hmisc_profile(false),       hmisc_profile(true),
      survmetrics_profile(),      lifelines_profile(),
      pysurvival_profile(true),   pysurvival_profile(false),
      sksurv_censored_profile(),  sksurv_ipcw_profile(),
      pec_profile({}),            survival_n_profile(),
      survival_n_g2_profile(),    survc1_profile(),
      pycox_profile(TdVariant::antolini), pycox_profile(TdVariant::adj_antolini),
  };
}

std::optional<Profile> find_profile(std::string_view name) {
  if (name.starts_with("pec:") && name.size() == 7) {
    PecTieFlags flags;
    bool* bits[] = {&flags.tied_outcome_in, &flags.tied_pred_in, &flags.tied_match_in};
    for (std::size_t k = 0; k < 3; ++k) {
      const char c = name[4 + k];
      if (c != '0' && c != '1') return std::nullopt;
      *bits[k] = c == '1';
    }
    return pec_profile(flags);
  }
  for (auto& p : builtin_profiles()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

nlohmann::ordered_json profile_to_json(const Profile& profile) {
  using nlohmann::ordered_json;
  const ConcordancePolicy& pol = profile.policy;
  ordered_json table = ordered_json::object();
  for (PairCase c : kAllPairCases) {
    if (c == PairCase::later) continue;
    const CaseRule& r = pol.rule(c);
    table[std::string(to_string(c))] = {{"comparable", r.comparable}, {"credit", r.credit}};
  }
  ordered_json trunc = {{"mode", to_string(pol.truncation.mode)}};
  if (pol.truncation.mode == Truncation::Mode::value) trunc["tau"] = pol.truncation.tau;

  ordered_json j;
  j["name"] = profile.name;
  j["family"] = to_string(profile.family);
  j["requires_tau"] = profile.requires_tau;
  j["notes"] = profile.notes;
  j["policy"] = {
      {"case_table", table},
      {"tie_tolerance", pol.tie_tolerance},
      {"weight_scheme", to_string(pol.weight_scheme)},
      {"g_source", to_string(pol.g_source)},
      {"truncation", trunc},
      {"final_fold", to_string(pol.final_fold)},
  };
  return j;
}

namespace {

template <class T, class Parse>
T parse_enum(const nlohmann::ordered_json& j, const char* key, Parse parse, T fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw InputError(std::string("profile field '") + key + "' must be a string");
  auto parsed = parse(v.template get<std::string>());
  if (!parsed) {
    throw InputError(std::string("profile field '") + key + "' has unknown value '" +
                     v.template get<std::string>() + "'");
  }
  return *parsed;
}

double number_field(const nlohmann::ordered_json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw InputError(std::string("profile field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

Profile profile_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw InputError("profile must be a JSON object");
  Profile p;
  if (!j.contains("name") || !j.at("name").is_string()) {
    throw InputError("profile needs a string 'name'");
  }
  p.name = j.at("name").get<std::string>();
  p.family = parse_enum(j, "family", parse_estimator_family, EstimatorFamily::c);
  if (j.contains("requires_tau")) {
    if (!j.at("requires_tau").is_boolean()) throw InputError("'requires_tau' must be a boolean");
    p.requires_tau = j.at("requires_tau").get<bool>();
  }
  if (j.contains("notes") && j.at("notes").is_string()) p.notes = j.at("notes").get<std::string>();

  if (!j.contains("policy") || !j.at("policy").is_object()) {
    throw InputError("profile '" + p.name + "' needs a 'policy' object");
  }
  const auto& pj = j.at("policy");
  ConcordancePolicy& pol = p.policy;
  if (pj.contains("case_table")) {
    const auto& t = pj.at("case_table");
    if (!t.is_object()) throw InputError("'case_table' must be an object");
    for (const auto& [label, rule] : t.items()) {
      auto c = parse_pair_case(label);
      if (!c || *c == PairCase::later) throw InputError("unknown pair case '" + label + "'");
      if (!rule.is_object()) throw InputError("case '" + label + "' must be an object");
      pol.set(*c, number_field(rule, "comparable", 0.0), number_field(rule, "credit", 0.0));
    }
  }
  pol.tie_tolerance = number_field(pj, "tie_tolerance", 0.0);
  pol.weight_scheme = parse_enum(pj, "weight_scheme", parse_weight_scheme, WeightScheme::uniform);
  pol.g_source = parse_enum(pj, "g_source", parse_g_source, GSource::test_set);
  pol.final_fold = parse_enum(pj, "final_fold", parse_final_fold, FinalFold::identity);
  if (pj.contains("truncation")) {
    const auto& tj = pj.at("truncation");
    if (!tj.is_object()) throw InputError("'truncation' must be an object");
    pol.truncation.mode = parse_enum(tj, "mode", parse_truncation_mode, Truncation::Mode::none);
    if (pol.truncation.mode == Truncation::Mode::value) {
      if (!tj.contains("tau")) throw InputError("truncation mode 'value' needs 'tau'");
      pol.truncation.tau = number_field(tj, "tau", 0.0);
    } else if (pol.truncation.mode == Truncation::Mode::max_uncensored) {
      pol.truncation.tau = 0.0;
    }
  }
  validate_policy(pol);
  return p;
}

std::vector<Profile> load_profiles(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile file '" + path + "'");
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("profile file '" + path + "': " + e.what());
  }
  const auto& arr = j.is_object() && j.contains("profiles") ? j.at("profiles") : j;
  if (!arr.is_array()) throw InputError("profile file must hold a 'profiles' array");
  std::vector<Profile> out;
  for (const auto& pj : arr) out.push_back(profile_from_json(pj));
  return out;
}

ConcordancePolicy effective_policy(const Profile& profile,
                                   const std::optional<Truncation>& tau_override) {
  ConcordancePolicy p = profile.policy;
  if (tau_override && profile.family == EstimatorFamily::c_tau) p.truncation = *tau_override;
  return p;
}

namespace {

ProfileResult run_one(const SurvivalDataset& ds, const MultiverseInputs& inputs,
                      const Profile& profile, const MultiverseOptions& options) {
  ProfileResult r;
  r.profile = profile.name;
  r.family = profile.family;
  const ConcordancePolicy policy = effective_policy(profile, options.tau_override);
  r.weight_scheme = policy.weight_scheme;
  r.truncation = policy.truncation;

  const bool td = profile.family == EstimatorFamily::c_td;
  if (td && !inputs.matrix) {
    r.error = "requires survival matrix";
    return r;
  }
  if (!td && !inputs.risks) {
    r.error = "requires risk vector";
    return r;
  }
  if (profile.requires_tau &&
      (!options.tau_override || options.tau_override->mode == Truncation::Mode::none)) {
    r.error = "requires an explicit tau";
    return r;
  }
  const StepFunction* g = nullptr;
  if (policy.weight_scheme != WeightScheme::uniform && policy.g_source == GSource::provided) {
    if (!inputs.provided_g) {
      r.error = "requires a provided censoring distribution";
      return r;
    }
    g = inputs.provided_g;
  }

  auto evaluate = [&](const SurvivalDataset& d, const RiskVector* risks,
                      const SurvivalMatrix* sm) -> ConcordanceResult {
    if (td) return concordance_td(d, *sm, policy, options.engine);
    return concordance(d, *risks, policy, g, options.engine);
  };

  try {
    ConcordanceResult full = evaluate(ds, inputs.risks, inputs.matrix);
    r.estimate = full.estimate;
    r.tally = full.tally;
  } catch (const NoComparablePairs& e) {
    // Keep the (empty) tally for the report.
    r.tally = td ? concordance_td_tally(ds, *inputs.matrix, policy, options.engine).tally
                 : concordance_tally(ds, *inputs.risks, policy, g, options.engine).tally;
    r.error = e.what();
    return r;
  } catch (const Error& e) {
    r.error = e.what();
    return r;
  }

  if (options.bootstrap) {
    std::vector<std::size_t> population(ds.size());
    std::iota(population.begin(), population.end(), std::size_t{0});
    auto estimator = [&](std::span<const std::size_t> idx) {
      const SurvivalDataset d = ds.subset(idx);
      if (td) {
        const SurvivalMatrix sm = inputs.matrix->subset(idx);
        return evaluate(d, nullptr, &sm).estimate;
      }
      const RiskVector rv = inputs.risks->subset(idx);
      return evaluate(d, &rv, nullptr).estimate;
    };
    try {
      r.ci = bootstrap_ci(population, estimator, *options.bootstrap);
    } catch (const Error& e) {
      r.ci_error = e.what();
    }
  }
  return r;
}

}  // namespace

MultiverseReport run_multiverse(const SurvivalDataset& ds, const MultiverseInputs& inputs,
                                const std::vector<Profile>& profiles,
                                const MultiverseOptions& options) {
  MultiverseReport report;
  report.results.reserve(profiles.size());
  for (const Profile& p : profiles) report.results.push_back(run_one(ds, inputs, p, options));
  return report;
}

}  // namespace cindex
