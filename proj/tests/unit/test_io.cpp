#include <doctest.h>

#include <sstream>

#include "cindex/error.hpp"
#include "cindex/io.hpp"
#include "fixtures.hpp"

using namespace cindex;

namespace {

SubjectsTable parse(const std::string& text) {
  std::istringstream in(text);
  return parse_subjects_csv(in, "s.csv");
}

}  // namespace

TEST_CASE("subjects CSV with risk and covariates") {
  const auto t = parse("id,time,event,risk,cov_1,cov_2\na,1.5,1,0.9,1,2\nb,2,0,-0.5,3,4\n");
  CHECK(t.dataset.size() == 2);
  CHECK(t.dataset.time(0) == 1.5);
  CHECK(t.dataset.event(1) == 0);
  CHECK(t.dataset.covariate_dim() == 2);
  CHECK(t.dataset.covariate_row(1)[1] == 4.0);
  CHECK(t.column("risk")[1] == -0.5);
  CHECK(t.has_column("risk"));
  CHECK_THROWS_AS(t.column("score"), InputError);
}

TEST_CASE("subjects CSV errors carry line numbers") {
  CHECK_THROWS_WITH(parse("id,time\n"), "s.csv:1: header must start with id,time,event");
  CHECK_THROWS_WITH(parse("id,time,event\na,1,1\nb,2,2\n"),
                    "s.csv:3: non-binary event indicator '2'");
  CHECK_THROWS_WITH(parse("id,time,event\na,1,1\n\nb,-2,1\n"), "s.csv:4: negative time");
  CHECK_THROWS_WITH(parse("id,time,event\na,x,1\n"), "s.csv:2: column 'time': 'x' is not a number");
  CHECK_THROWS_WITH(parse("id,time,event\na,1\n"), "s.csv:2: expected 3 fields, found 2");
  CHECK_THROWS_AS(parse(""), InputError);
}

TEST_CASE("header-only subjects file parses to an empty dataset") {
  CHECK(parse("id,time,event\n").dataset.empty());
}

TEST_CASE("matrix CSV") {
  const auto subjects = parse("id,time,event\na,1,1\nb,2,0\n").dataset;
  std::istringstream good("id,0,1.5,3\na,1,0.8,0.5\nb,1,0.9,0.7\n");
  const auto sm = parse_matrix_csv(good, "m.csv", subjects);
  CHECK(sm.rows() == 2);
  CHECK(sm.grid()[1] == 1.5);
  CHECK(sm.at(1, 2) == 0.7);

  std::istringstream wrong_id("id,0,1\nb,1,0.5\na,1,0.5\n");
  CHECK_THROWS_WITH(parse_matrix_csv(wrong_id, "m.csv", subjects),
                    "m.csv:2: id 'b' does not match subject 'a' in the same position");
  std::istringstream rising("id,0,1\na,0.5,0.9\nb,1,1\n");
  CHECK_THROWS_AS(parse_matrix_csv(rising, "m.csv", subjects), InputError);
  std::istringstream short_rows("id,0,1\na,1,0.5\n");
  CHECK_THROWS_AS(parse_matrix_csv(short_rows, "m.csv", subjects), InputError);
  std::istringstream bad_grid("id,1,0\na,1,1\nb,1,1\n");
  CHECK_THROWS_AS(parse_matrix_csv(bad_grid, "m.csv", subjects), InputError);
}

TEST_CASE("format_number is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_number(1.0 / 7.0)) == 1.0 / 7.0);
}

TEST_CASE("subjects CSV round-trips") {
  const auto t = parse("id,time,event,risk,cov_1\na,1.25,1,0.1,3\nb,2,0,0.2,4\n");
  std::ostringstream out;
  write_subjects_csv(out, t.dataset, t.column("risk"));
  CHECK(out.str() == "id,time,event,risk,cov_1\na,1.25,1,0.1,3\nb,2,0,0.2,4\n");
}

TEST_CASE("step function CSV") {
  std::ostringstream flat;
  write_step_function_csv(flat, StepFunction{});
  CHECK(flat.str() == "time,value\n0,1\n");
  std::ostringstream f;
  write_step_function_csv(f, StepFunction({1, 2}, {0.5, 0.25}));
  CHECK(f.str() == "time,value\n1,0.5\n2,0.25\n");
}

TEST_CASE("report JSON re-serializes byte-identically") {
  const auto rows = fixtures::four_subjects();
  const auto ds = fixtures::dataset(rows);
  const auto r = fixtures::risks(rows);
  const auto profiles = builtin_profiles();
  MultiverseOptions o;
  o.bootstrap = BootstrapOptions{10, 4, 0.95, 3};
  const auto report = run_multiverse(ds, {&r, nullptr, nullptr}, profiles, o);
  ReportContext ctx;
  ctx.subjects = "four.csv";
  ctx.risk_source = {{"kind", "column"}, {"column", "risk"}};
  ctx.grid = nullptr;
  ctx.bootstrap = o.bootstrap;
  const std::string text = dump_json(report_to_json(ds, ctx, profiles, report));
  const auto reread = nlohmann::ordered_json::parse(text);
  CHECK(dump_json(reread) == text);

  // the provenance block is itself a loadable profile file
  std::vector<Profile> back;
  for (const auto& pj : reread["provenance"]["profiles"]) back.push_back(profile_from_json(pj));
  CHECK(back == profiles);

  std::ostringstream csv;
  write_report_csv(csv, report);
  CHECK(csv.str().rfind("profile,family,estimate", 0) == 0);
}
