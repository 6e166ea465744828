#include "cindex/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "cindex/error.hpp"

namespace cindex {
namespace {

std::vector<std::string> split_line(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(start, comma == std::string::npos ? comma : comma - start);
    const auto first = field.find_first_not_of(" \t");
    const auto last = field.find_last_not_of(" \t");
    out.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& msg) {
  throw InputError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, const std::string& source, std::size_t line,
                    const std::string& column) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (!s.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (s.empty() || ec != std::errc() || ptr != end) {
    fail(source, line, "column '" + column + "': '" + s + "' is not a number");
  }
  return v;
}

bool read_line(std::istream& in, std::string& line) {
  return static_cast<bool>(std::getline(in, line));
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  return in;
}

}  // namespace

RiskVector SubjectsTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < extra_names.size(); ++k) {
    if (extra_names[k] == name) return RiskVector(extra_columns[k]);
  }
  throw InputError("subjects file has no column '" + name + "'");
}

bool SubjectsTable::has_column(const std::string& name) const {
  for (const auto& n : extra_names) {
    if (n == name) return true;
  }
  return false;
}

SubjectsTable parse_subjects_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!read_line(in, line)) throw InputError(source + ": empty file, expected a header");
  ++lineno;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_line(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "time" || header[2] != "event") {
    fail(source, lineno, "header must start with id,time,event");
  }
  std::vector<std::size_t> cov_cols;
  std::vector<std::size_t> extra_cols;
  SubjectsTable table;
  for (std::size_t c = 3; c < header.size(); ++c) {
    const auto& name = header[c];
    if (name.empty()) fail(source, lineno, "empty column name in position " + std::to_string(c + 1));
    for (std::size_t d = 0; d < c; ++d) {
      if (header[d] == name) fail(source, lineno, "duplicate column '" + name + "'");
    }
    if (name.rfind("cov_", 0) == 0) {
      cov_cols.push_back(c);
    } else {
      extra_cols.push_back(c);
      table.extra_names.push_back(name);
    }
  }
  table.extra_columns.resize(extra_cols.size());

  std::vector<SurvivalRecord> records;
  std::vector<std::vector<double>> covariates;
  std::vector<std::size_t> lines;
  while (read_line(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      fail(source, lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                               std::to_string(fields.size()));
    }
    if (fields[0].empty()) fail(source, lineno, "empty id");
    SurvivalRecord r;
    r.subject_id = fields[0];
    r.time = parse_double(fields[1], source, lineno, "time");
    if (fields[2] == "0") {
      r.event = 0;
    } else if (fields[2] == "1") {
      r.event = 1;
    } else {
      fail(source, lineno, "non-binary event indicator '" + fields[2] + "'");
    }
    records.push_back(std::move(r));
    if (!cov_cols.empty()) {
      std::vector<double> x;
      x.reserve(cov_cols.size());
      for (std::size_t c : cov_cols) x.push_back(parse_double(fields[c], source, lineno, header[c]));
      covariates.push_back(std::move(x));
    }
    for (std::size_t k = 0; k < extra_cols.size(); ++k) {
      const std::size_t c = extra_cols[k];
      table.extra_columns[k].push_back(parse_double(fields[c], source, lineno, header[c]));
    }
    lines.push_back(lineno);
  }

  table.dataset = SurvivalDataset(std::move(records), std::move(covariates));
  const ValidationReport report = validate_dataset(table.dataset);
  if (!report.ok()) {
    const Violation& v = report.violations.front();
    if (v.row) fail(source, lines[*v.row], v.message);
    throw InputError(source + ": " + v.message);
  }
  return table;
}

SubjectsTable read_subjects_csv(const std::string& path) {
  auto in = open(path);
  return parse_subjects_csv(in, path);
}

SurvivalMatrix parse_matrix_csv(std::istream& in, const std::string& source,
                                const SurvivalDataset& subjects) {
  std::string line;
  std::size_t lineno = 0;
  if (!read_line(in, line)) throw InputError(source + ": empty file, expected a header");
  ++lineno;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_line(line);
  if (header.size() < 2 || header[0] != "id") {
    fail(source, lineno, "header must be id followed by grid times");
  }
  std::vector<double> times;
  for (std::size_t c = 1; c < header.size(); ++c) {
    times.push_back(parse_double(header[c], source, lineno, "grid time " + std::to_string(c)));
  }
  TimeGrid grid;
  try {
    grid = TimeGrid(std::move(times));
  } catch (const InputError& e) {
    fail(source, lineno, e.what());
  }

  const std::size_t m = grid.size();
  std::vector<double> probs;
  probs.reserve(subjects.size() * m);
  std::size_t row = 0;
  while (read_line(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      fail(source, lineno, "expected " + std::to_string(header.size()) + " fields, found " +
                               std::to_string(fields.size()));
    }
    if (row >= subjects.size()) fail(source, lineno, "more rows than subjects");
    if (fields[0] != subjects.id(row)) {
      fail(source, lineno, "id '" + fields[0] + "' does not match subject '" + subjects.id(row) +
                               "' in the same position");
    }
    for (std::size_t c = 1; c < fields.size(); ++c) {
      probs.push_back(parse_double(fields[c], source, lineno, header[c]));
    }
    try {
      SurvivalMatrix(grid, 1, std::vector<double>(probs.end() - static_cast<std::ptrdiff_t>(m),
                                                  probs.end()));
    } catch (const InputError& e) {
      fail(source, lineno, e.what());
    }
    ++row;
  }
  if (row != subjects.size()) {
    throw InputError(source + ": " + std::to_string(row) + " rows for " +
                     std::to_string(subjects.size()) + " subjects");
  }
  return SurvivalMatrix(std::move(grid), row, std::move(probs));
}

SurvivalMatrix read_matrix_csv(const std::string& path, const SurvivalDataset& subjects) {
  auto in = open(path);
  return parse_matrix_csv(in, path, subjects);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_subjects_csv(std::ostream& out, const SurvivalDataset& ds,
                        const std::optional<RiskVector>& risks) {
  out << "id,time,event";
  if (risks) out << ",risk";
  for (std::size_t k = 0; k < ds.covariate_dim(); ++k) out << ",cov_" << (k + 1);
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.id(i) << ',' << format_number(ds.time(i)) << ',' << ds.event(i);
    if (risks) out << ',' << format_number((*risks)[i]);
    if (ds.has_covariates()) {
      for (double x : ds.covariate_row(i)) out << ',' << format_number(x);
    }
    out << '\n';
  }
}

void write_step_function_csv(std::ostream& out, const StepFunction& f) {
  out << "time,value\n";
  if (f.jumps() == 0) {
    out << "0,1\n";
    return;
  }
  for (std::size_t k = 0; k < f.jumps(); ++k) {
    out << format_number(f.jump_times()[k]) << ',' << format_number(f.values()[k]) << '\n';
  }
}

namespace {

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

nlohmann::ordered_json truncation_json(const Truncation& t) {
  nlohmann::ordered_json j = {{"mode", to_string(t.mode)}};
  if (t.mode == Truncation::Mode::value) j["tau"] = number_or_null(t.tau);
  return j;
}

}  // namespace

nlohmann::ordered_json report_to_json(const SurvivalDataset& ds, const ReportContext& context,
                                      const std::vector<Profile>& profiles,
                                      const MultiverseReport& report) {
  using nlohmann::ordered_json;
  ordered_json prov;
  prov["subjects"] = context.subjects;
  prov["matrix"] = optional_json(context.matrix);
  prov["train"] = optional_json(context.train);
  prov["n"] = ds.size();
  prov["events"] = ds.event_count();
  prov["risk_source"] = context.risk_source;
  prov["grid"] = context.grid;
  prov["tau"] = context.tau_override ? truncation_json(*context.tau_override)
                                     : ordered_json{{"mode", "profile_default"}};
  prov["seed"] = context.seed;
  if (context.bootstrap) {
    prov["bootstrap"] = {{"replicates", context.bootstrap->replicates},
                         {"sample_size", context.bootstrap->sample_size},
                         {"level", context.bootstrap->level},
                         {"seed", context.bootstrap->seed}};
  } else {
    prov["bootstrap"] = nullptr;
  }
  ordered_json plist = ordered_json::array();
  for (const auto& p : profiles) plist.push_back(profile_to_json(p));
  prov["profiles"] = std::move(plist);

  ordered_json results = ordered_json::array();
  for (const ProfileResult& r : report.results) {
    ordered_json row;
    row["profile"] = r.profile;
    row["family"] = to_string(r.family);
    row["estimate"] = r.estimate ? number_or_null(*r.estimate) : ordered_json(nullptr);
    if (r.ci) {
      row["ci"] = {{"lo", number_or_null(r.ci->lo)},
                   {"hi", number_or_null(r.ci->hi)},
                   {"replicates", r.ci->samples.size()},
                   {"failed", r.ci->failed}};
    } else {
      row["ci"] = nullptr;
    }
    row["ci_error"] = optional_json(r.ci_error);
    row["numerator"] = number_or_null(r.tally.numerator);
    row["denominator"] = number_or_null(r.tally.denominator);
    row["dropped_pairs"] = r.tally.dropped_pairs;
    row["beyond_grid"] = r.tally.beyond_grid;
    row["tau_used"] = r.tally.tau_used ? number_or_null(*r.tally.tau_used) : ordered_json(nullptr);
    row["weight_scheme"] = to_string(r.weight_scheme);
    row["truncation"] = truncation_json(r.truncation);
    ordered_json cases = ordered_json::object();
    for (PairCase c : kAllPairCases) {
      const CaseTally& t = r.tally[c];
      if (t.mass == 0.0) continue;
      cases[std::string(to_string(c))] = {{"mass", number_or_null(t.mass)},
                                          {"comparable", number_or_null(t.comparable)},
                                          {"concordant", number_or_null(t.concordant)}};
    }
    row["per_case_tally"] = std::move(cases);
    row["error"] = optional_json(r.error);
    results.push_back(std::move(row));
  }

  ordered_json j;
  j["provenance"] = std::move(prov);
  j["results"] = std::move(results);
  return j;
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string optional_number(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? format_number(*v) : "";
}

}  // namespace

void write_report_csv(std::ostream& out, const MultiverseReport& report) {
  out << "profile,family,estimate,ci_lo,ci_hi,numerator,denominator,dropped_pairs,tau_used,"
         "weight_scheme,error\n";
  for (const ProfileResult& r : report.results) {
    out << csv_field(r.profile) << ',' << to_string(r.family) << ',' << optional_number(r.estimate)
        << ',' << (r.ci ? optional_number(r.ci->lo) : "") << ','
        << (r.ci ? optional_number(r.ci->hi) : "") << ','
        << optional_number(r.tally.numerator) << ',' << optional_number(r.tally.denominator)
        << ',' << r.tally.dropped_pairs << ',' << optional_number(r.tally.tau_used) << ','
        << to_string(r.weight_scheme) << ',' << csv_field(r.error.value_or("")) << '\n';
  }
}

}  // namespace cindex
