#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cindex/engine.hpp"
#include "cindex/policy.hpp"
#include "cindex/resampling.hpp"

namespace cindex {

enum class EstimatorFamily { c, c_tau, c_td };

std::string_view to_string(EstimatorFamily f) noexcept;
std::optional<EstimatorFamily> parse_estimator_family(std::string_view s) noexcept;

/// A named policy reproducing one implementation's documented pair semantics.
/// Profiles are data: every difference between implementations lives in the
/// case table and the knobs of `policy`.
struct Profile {
  std::string name;
  EstimatorFamily family = EstimatorFamily::c;
  ConcordancePolicy policy;
  bool requires_tau = false;  // refuses to run without an explicit tau
  std::string notes;

  bool operator==(const Profile&) const = default;
};

struct PecTieFlags {
  bool tied_outcome_in = true;
  bool tied_pred_in = true;
  bool tied_match_in = true;
};

Profile hmisc_profile(bool outx);
Profile survmetrics_profile();
Profile lifelines_profile();
Profile pysurvival_profile(bool include_ties);
Profile sksurv_censored_profile();
Profile sksurv_ipcw_profile();
Profile pec_profile(PecTieFlags flags);
Profile survival_n_profile();
Profile survival_n_g2_profile();
Profile survc1_profile();
Profile pycox_profile(TdVariant variant);

/// All shipped profiles at their default settings plus the documented
/// non-default variants (hmisc_outx, pysurvival_noties), in a fixed order.
std::vector<Profile> builtin_profiles();

/// Looks a profile up by name. Besides the builtin names, "pec:OPM" selects
/// pec with tiedOutcomeIn = O, tiedPredIn = P, tiedMatchIn = M (each 0 or 1).
std::optional<Profile> find_profile(std::string_view name);

nlohmann::ordered_json profile_to_json(const Profile& profile);
/// Throws InputError on schema violations.
Profile profile_from_json(const nlohmann::ordered_json& j);

/// Reads {"profiles": [...]} as written in a report's provenance block.
std::vector<Profile> load_profiles(const std::string& path);

struct MultiverseInputs {
  const RiskVector* risks = nullptr;       // for C and C_tau profiles
  const SurvivalMatrix* matrix = nullptr;  // for C_td profiles
  const StepFunction* provided_g = nullptr;  // censoring KM for g_source = provided
};

struct MultiverseOptions {
  std::optional<Truncation> tau_override;  // replaces the truncation of C_tau profiles
  std::optional<BootstrapOptions> bootstrap;
  EngineOptions engine;
};

struct ProfileResult {
  std::string profile;
  EstimatorFamily family = EstimatorFamily::c;
  std::optional<double> estimate;
  std::optional<std::string> error;
  PairTally tally;
  std::optional<BootstrapResult> ci;
  std::optional<std::string> ci_error;
  WeightScheme weight_scheme = WeightScheme::uniform;
  Truncation truncation;  // as applied, after any override
};

struct MultiverseReport {
  std::vector<ProfileResult> results;  // in profile order
};

/// Evaluates every profile independently. A profile that cannot run on the
/// given inputs gets an error cell instead of aborting the others.
MultiverseReport run_multiverse(const SurvivalDataset& ds, const MultiverseInputs& inputs,
                                const std::vector<Profile>& profiles,
                                const MultiverseOptions& options = {});

/// The policy a profile runs with once a tau override is applied.
ConcordancePolicy effective_policy(const Profile& profile,
                                   const std::optional<Truncation>& tau_override);

}  // namespace cindex
