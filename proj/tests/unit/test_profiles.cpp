#include <doctest.h>

#include <cmath>

#include "cindex/error.hpp"
#include "cindex/profiles.hpp"
#include "fixtures.hpp"
#include "golden_tables.hpp"

using namespace cindex;

namespace {

Profile get(const std::string& name) {
  auto p = find_profile(name);
  REQUIRE(p.has_value());
  return *p;
}

}  // namespace

TEST_CASE("every builtin profile resolves by name and excludes cases 3, 4, 8") {
  for (const Profile& p : builtin_profiles()) {
    CHECK(find_profile(p.name) == p);
    for (PairCase c : {PairCase::c3, PairCase::c4, PairCase::c8, PairCase::later}) {
      CHECK(p.policy.rule(c).comparable == 0.0);
    }
  }
  CHECK_FALSE(find_profile("nope").has_value());
  CHECK_FALSE(find_profile("pec:12x").has_value());
}

TEST_CASE("profile case tables equal the transcribed tables") {
  for (const auto& table : golden::tables()) {
    CAPTURE(table.profile);
    const Profile p = get(table.profile);
    const auto expected = golden::parse(table.entries);
    for (PairCase c : kAllPairCases) {
      const auto e = golden::lookup(expected, std::string(to_string(c)));
      const CaseRule& r = p.policy.rule(c);
      CAPTURE(to_string(c));
      CHECK((r.comparable > 0.0) == e.has_value());
      if (e) CHECK(r.credit == *e);
    }
  }
}

TEST_CASE("profile examples") {
  CHECK(get("survc1").policy.rule(PairCase::c2C).credit == 1.0);
  CHECK(get("survc1").policy.rule(PairCase::c2C).comparable == 1.0);
  const Profile pec101 = pec_profile({true, false, true});
  CHECK(pec101.name == "pec:101");
  CHECK(pec101.policy.rule(PairCase::c5C).comparable == 1.0);
  CHECK(pec101.policy.rule(PairCase::c5C).credit == 1.0);
  CHECK(pec101.policy.rule(PairCase::c6C).comparable == 0.0);
  CHECK(get("sksurv_censored").policy.tie_tolerance == 1e-8);
  CHECK(get("sksurv_ipcw").policy.g_source == GSource::provided);
  CHECK(get("pec").policy.truncation.mode == Truncation::Mode::max_uncensored);
  CHECK(get("survc1").requires_tau);
}

TEST_CASE("pysurvival never reports below one half") {
  Rng rng = Rng::stream(41, {1});
  const Profile p = get("pysurvival");
  for (int rep = 0; rep < 100; ++rep) {
    const auto inst = fixtures::random_instance(rng, 2 + rng.below(30), rep % 2 == 0);
    const RiskVector r(inst.risk);
    const MultiverseReport report = run_multiverse(inst.ds, {&r, nullptr, nullptr}, {p});
    if (report.results[0].estimate) CHECK(*report.results[0].estimate >= 0.5);
  }
}

TEST_CASE("profiles round-trip through JSON") {
  for (const Profile& p : builtin_profiles()) {
    const auto j = profile_to_json(p);
    const Profile back = profile_from_json(j);
    CHECK(back == p);
    CHECK(profile_to_json(back).dump() == j.dump());
  }
}

TEST_CASE("profile JSON schema errors") {
  auto j = profile_to_json(get("hmisc"));
  j["policy"]["weight_scheme"] = "bogus";
  CHECK_THROWS_AS(profile_from_json(j), InputError);
  auto k = profile_to_json(get("hmisc"));
  k["policy"]["case_table"]["9Z"] = {{"comparable", 1}, {"credit", 1}};
  CHECK_THROWS_AS(profile_from_json(k), InputError);
  auto l = profile_to_json(get("hmisc"));
  l["policy"]["case_table"]["1A"]["credit"] = 2.0;
  CHECK_THROWS_AS(profile_from_json(l), InputError);
  CHECK_THROWS_AS(profile_from_json(nlohmann::ordered_json::array()), InputError);
}

TEST_CASE("load_profiles reads a profiles array") {
  const std::string dir = fixtures::scratch_dir("profiles_load");
  nlohmann::ordered_json doc;
  doc["profiles"] = {profile_to_json(get("lifelines")), profile_to_json(get("pec:010"))};
  fixtures::write_file(dir + "/p.json", doc.dump(2));
  const auto loaded = load_profiles(dir + "/p.json");
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[1] == get("pec:010"));
  CHECK_THROWS_AS(load_profiles(dir + "/missing.json"), InputError);
  fixtures::write_file(dir + "/bad.json", "{");
  CHECK_THROWS_AS(load_profiles(dir + "/bad.json"), InputError);
}

TEST_CASE("multiverse on the four-subject fixture") {
  const auto rows = fixtures::four_subjects();
  const auto ds = fixtures::dataset(rows);
  const auto r = fixtures::risks(rows);
  const auto report =
      run_multiverse(ds, {&r, nullptr, nullptr}, {get("hmisc_outx"), get("survival_n")});
  REQUIRE(report.results.size() == 2);
  for (const auto& res : report.results) {
    REQUIRE(res.estimate.has_value());
    CHECK(*res.estimate == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  }
}

TEST_CASE("multiverse error cells") {
  const auto rows = fixtures::four_subjects();
  const auto ds = fixtures::dataset(rows);
  const auto r = fixtures::risks(rows);
  const auto report = run_multiverse(
      ds, {&r, nullptr, nullptr},
      {get("pycox_ant"), get("survc1"), get("sksurv_ipcw"), get("hmisc")});
  CHECK(report.results[0].error == "requires survival matrix");
  CHECK(report.results[1].error == "requires an explicit tau");
  CHECK(report.results[2].error == "requires a provided censoring distribution");
  CHECK(report.results[3].estimate.has_value());

  const SurvivalMatrix sm(TimeGrid({0, 1}), 4, {1, .5, 1, .6, 1, .7, 1, .8});
  const auto td_only = run_multiverse(ds, {nullptr, &sm, nullptr}, {get("hmisc")});
  CHECK(td_only.results[0].error == "requires risk vector");

  MultiverseOptions o;
  o.tau_override = Truncation::at(2.5);
  const auto with_tau = run_multiverse(ds, {&r, nullptr, nullptr}, {get("survc1")}, o);
  CHECK(with_tau.results[0].estimate.has_value());
  CHECK(with_tau.results[0].tally.tau_used == 2.5);

  SurvivalDataset censored({{"a", 1, 0}, {"b", 2, 0}});
  const RiskVector two({1, 2});
  const auto none = run_multiverse(censored, {&two, nullptr, nullptr}, {get("hmisc")});
  CHECK(none.results[0].error == "no comparable pairs");
}

TEST_CASE("tau override only touches C_tau profiles") {
  MultiverseOptions o;
  o.tau_override = Truncation::at(1.5);
  const auto rows = fixtures::four_subjects();
  const auto ds = fixtures::dataset(rows);
  const auto r = fixtures::risks(rows);
  const auto report = run_multiverse(ds, {&r, nullptr, nullptr}, {get("hmisc"), get("pec")}, o);
  CHECK_FALSE(report.results[0].tally.tau_used.has_value());
  CHECK(report.results[1].tally.tau_used == 1.5);
}

TEST_CASE("collapse on data without censoring or ties") {
  Rng rng = Rng::stream(42, {1});
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<SurvivalRecord> recs;
    std::vector<double> risk;
    for (std::size_t i = 0; i < n; ++i) {
      recs.push_back({std::to_string(i), rng.uniform(0, 10), 1});
      risk.push_back(rng.normal());
    }
    SurvivalDataset ds(recs);
    const RiskVector r(risk);
    const StepFunction g = km_fit(ds, KmTarget::censoring);
    MultiverseOptions o;
    o.tau_override = Truncation::none();
    std::vector<Profile> ps;
    for (const auto& p : builtin_profiles()) {
      if (p.family != EstimatorFamily::c_td) ps.push_back(p);
    }
    const auto report = run_multiverse(ds, {&r, nullptr, &g}, ps, o);
    const double base = concordance(ds, r, harrell_policy()).estimate;
    for (std::size_t k = 0; k < ps.size(); ++k) {
      CAPTURE(ps[k].name);
      if (ps[k].requires_tau) {
        CHECK(report.results[k].error.has_value());
        continue;
      }
      REQUIRE(report.results[k].estimate.has_value());
      if (ps[k].policy.final_fold == FinalFold::max_with_complement) {
        CHECK(*report.results[k].estimate == std::max(base, 1.0 - base));
      } else {
        CHECK(*report.results[k].estimate == base);
      }
    }
  }
}

TEST_CASE("bootstrap through the multiverse") {
  const auto rows = fixtures::four_subjects();
  const auto ds = fixtures::dataset(rows);
  const auto r = fixtures::risks(rows);
  MultiverseOptions o;
  o.bootstrap = BootstrapOptions{20, 4, 0.9, 7};
  const auto a = run_multiverse(ds, {&r, nullptr, nullptr}, {get("hmisc")}, o);
  const auto b = run_multiverse(ds, {&r, nullptr, nullptr}, {get("hmisc")}, o);
  REQUIRE(a.results[0].ci.has_value());
  CHECK(a.results[0].ci->lo <= a.results[0].ci->hi);
  CHECK(a.results[0].ci->samples == b.results[0].ci->samples);
  CHECK(a.results[0].ci->samples.size() + a.results[0].ci->failed == 20);
}
