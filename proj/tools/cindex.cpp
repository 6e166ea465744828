#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "cindex/error.hpp"
#include "cindex/io.hpp"
#include "cindex/km.hpp"
#include "cindex/profiles.hpp"
#include "cindex/synthetic.hpp"
#include "cindex/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace cindex;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitComputation = 3;

double to_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw InputError(what + ": '" + s + "' is not a number");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
}

// --- cindex -----------------------------------------------------------------

struct CindexArgs {
  std::string subjects;
  std::string matrix;
  std::string risk_col;
  std::string transform;
  std::string grid = "0:355:1";
  std::string profiles;
  std::string profile_file;
  std::string tau;
  std::string bootstrap;
  std::string train;
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

TimeGrid parse_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw InputError("--grid expects start:stop:step or 'native'");
  return TimeGrid::regular(to_number(parts[0], "--grid start"), to_number(parts[1], "--grid stop"),
                           to_number(parts[2], "--grid step"));
}

Truncation parse_tau(const std::string& spec) {
  if (spec == "none") return Truncation::none();
  if (spec == "max-uncensored") return Truncation::max_uncensored();
  const double tau = to_number(spec, "--tau");
  if (!(tau > 0.0)) throw InputError("--tau must be positive");
  return Truncation::at(tau);
}

BootstrapOptions parse_bootstrap(const std::string& spec, std::uint64_t seed) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw InputError("--bootstrap expects B:size:level");
  BootstrapOptions b;
  const double reps = to_number(parts[0], "--bootstrap B");
  const double size = to_number(parts[1], "--bootstrap size");
  if (reps < 1 || reps != std::floor(reps)) throw InputError("--bootstrap B must be a positive integer");
  if (size < 1 || size != std::floor(size)) {
    throw InputError("--bootstrap size must be a positive integer");
  }
  b.replicates = static_cast<std::size_t>(reps);
  b.sample_size = static_cast<std::size_t>(size);
  b.level = to_number(parts[2], "--bootstrap level");
  if (!(b.level > 0.0 && b.level < 1.0)) throw InputError("--bootstrap level must lie in (0, 1)");
  b.seed = seed;
  return b;
}

std::vector<Profile> select_profiles(const CindexArgs& a) {
  std::vector<Profile> out;
  if (!a.profile_file.empty()) {
    for (auto& p : load_profiles(a.profile_file)) out.push_back(std::move(p));
  }
  if (!a.profiles.empty()) {
    for (const auto& name : split(a.profiles, ',')) {
      if (name.empty()) continue;
      auto p = find_profile(name);
      if (!p) throw InputError("unknown profile '" + name + "'");
      out.push_back(std::move(*p));
    }
  }
  if (out.empty()) out = builtin_profiles();
  return out;
}

int run_cindex(const CindexArgs& a) {
  const SubjectsTable table = read_subjects_csv(a.subjects);
  const SurvivalDataset& ds = table.dataset;
  const std::vector<Profile> profiles = select_profiles(a);

  ReportContext ctx;
  ctx.subjects = a.subjects;
  ctx.seed = a.seed;
  ctx.grid = nullptr;
  ctx.risk_source = nullptr;

  std::optional<SurvivalMatrix> matrix;
  if (!a.matrix.empty()) {
    ctx.matrix = a.matrix;
    SurvivalMatrix raw = read_matrix_csv(a.matrix, ds);
    if (a.grid == "native") {
      matrix = std::move(raw);
      ctx.grid = {{"source", "native"}};
    } else {
      const TimeGrid dst = parse_grid(a.grid);
      matrix = interpolate(raw, dst);
      ctx.grid = {{"source", "interpolated"}, {"spec", a.grid}};
    }
    ctx.grid["points"] = matrix->grid().size();
    ctx.grid["start"] = matrix->grid().front();
    ctx.grid["end"] = matrix->grid().back();
  }

  std::optional<RiskVector> risks;
  if (!a.risk_col.empty() && !a.transform.empty()) {
    throw InputError("--risk-col and --transform are mutually exclusive");
  }
  if (!a.transform.empty()) {
    if (!matrix) throw InputError("--transform needs --matrix");
    const auto colon = a.transform.find(':');
    const std::string kind = a.transform.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : a.transform.substr(colon + 1);
    if (kind == "at-time") {
      const double t = to_number(arg, "--transform at-time");
      risks = risk_at_time(*matrix, t);
      ctx.risk_source = {{"kind", "transform"}, {"transform", "at-time"}, {"t", t}};
    } else if (kind == "expected-mortality") {
      if (!arg.empty()) throw InputError("expected-mortality takes no argument");
      risks = expected_mortality(*matrix);
      ctx.risk_source = {{"kind", "transform"}, {"transform", "expected-mortality"}};
    } else if (kind == "neg-rmst") {
      const double t_star = arg.empty() ? kDefaultTStar : to_number(arg, "--transform neg-rmst");
      risks = neg_rmst(*matrix, t_star);
      ctx.risk_source = {{"kind", "transform"}, {"transform", "neg-rmst"}, {"t_star", t_star}};
    } else {
      throw InputError("unknown transform '" + a.transform + "'");
    }
  } else {
    const std::string col = a.risk_col.empty() ? "risk" : a.risk_col;
    if (!a.risk_col.empty() || table.has_column(col)) {
      risks = table.column(col);
      ctx.risk_source = {{"kind", "column"}, {"column", col}};
    }
  }

  std::optional<StepFunction> g_train;
  if (!a.train.empty()) {
    ctx.train = a.train;
    g_train = km_fit(read_subjects_csv(a.train).dataset, KmTarget::censoring);
  }

  MultiverseOptions options;
  options.engine.threads = std::max(1u, a.threads);
  if (!a.tau.empty()) options.tau_override = parse_tau(a.tau);
  if (!a.bootstrap.empty()) options.bootstrap = parse_bootstrap(a.bootstrap, a.seed);
  ctx.tau_override = options.tau_override;
  ctx.bootstrap = options.bootstrap;

  MultiverseInputs inputs;
  inputs.risks = risks ? &*risks : nullptr;
  inputs.matrix = matrix ? &*matrix : nullptr;
  inputs.provided_g = g_train ? &*g_train : nullptr;

  const MultiverseReport report = run_multiverse(ds, inputs, profiles, options);
  const std::string json = dump_json(report_to_json(ds, ctx, profiles, report));
  if (a.out.empty()) {
    std::cout << json;
  } else {
    write_file(a.out + ".json", json);
    std::ostringstream csv;
    write_report_csv(csv, report);
    write_file(a.out + ".csv", csv.str());
  }
  return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::size_t n = 1000;
  std::size_t datasets = 100;
  std::string mechanism = "weibull_scaled";
  std::string epsilon_list = "0,0.5,1,3,7,13";
  std::string params;
  std::string covariates;
  std::string out_dir = "simulated";
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct SimulationSetup {
  WeibullPHParams params;
  CensoringMechanism censoring;
};

SimulationSetup default_setup() {
  SimulationSetup s;
  s.params = {1.2, 0.00507, {0.8, -0.5, 0.3}};
  s.censoring = CensoringMechanism::weibull_scaled(1.2, 0.0006, 0.0);
  return s;
}

double json_number(const ordered_json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw InputError(std::string("params: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

SimulationSetup read_setup(const std::string& path) {
  SimulationSetup s = default_setup();
  if (path.empty()) return s;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("params file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw InputError("params file must hold an object");
  s.params.gamma = json_number(j, "gamma", s.params.gamma);
  s.params.lambda = json_number(j, "lambda", s.params.lambda);
  if (j.contains("beta")) {
    if (!j.at("beta").is_array()) throw InputError("params: 'beta' must be an array");
    s.params.beta.clear();
    for (const auto& b : j.at("beta")) {
      if (!b.is_number()) throw InputError("params: 'beta' entries must be numbers");
      s.params.beta.push_back(b.get<double>());
    }
  }
  if (j.contains("censoring")) {
    const auto& c = j.at("censoring");
    if (!c.is_object()) throw InputError("params: 'censoring' must be an object");
    s.censoring.gamma_c = json_number(c, "gamma_c", s.censoring.gamma_c);
    s.censoring.lambda_c = json_number(c, "lambda_c", s.censoring.lambda_c);
    s.censoring.beta_age = json_number(c, "beta_age", s.censoring.beta_age);
    const double col = json_number(c, "age_column", 0.0);
    if (col < 0 || col != std::floor(col)) throw InputError("params: bad 'age_column'");
    s.censoring.age_column = static_cast<std::size_t>(col);
  }
  s.params.validate();
  return s;
}

std::vector<std::vector<double>> read_covariates(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file, expected a header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line, ',');
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c].rfind("cov_", 0) == 0) cols.push_back(c);
  }
  if (cols.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) cols.push_back(c);
  }
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != header.size()) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields");
    }
    std::vector<double> x;
    for (std::size_t c : cols) {
      x.push_back(to_number(fields[c], path + ":" + std::to_string(lineno) + ": " + header[c]));
    }
    rows.push_back(std::move(x));
  }
  if (rows.empty()) throw InputError(path + ": no records");
  return rows;
}

std::string epsilon_tag(double eps) { return format_number(eps); }

int run_simulate(const SimulateArgs& a) {
  const auto kind = parse_censoring_kind(a.mechanism);
  if (!kind) throw InputError("unknown mechanism '" + a.mechanism + "'");
  SimulationSetup setup = read_setup(a.params);
  setup.censoring.kind = *kind;

  std::vector<double> epsilons;
  for (const auto& e : split(a.epsilon_list, ',')) {
    epsilons.push_back(to_number(e, "--epsilon-list"));
  }
  if (epsilons.empty()) throw InputError("--epsilon-list is empty");
  for (double e : epsilons) {
    CensoringMechanism m = setup.censoring;
    m.epsilon = e;
    m.validate();
  }
  if (a.datasets == 0) throw InputError("--datasets must be positive");

  std::optional<std::vector<std::vector<double>>> fixed_covariates;
  if (!a.covariates.empty()) fixed_covariates = read_covariates(a.covariates);
  const std::size_t n = fixed_covariates ? fixed_covariates->size() : a.n;
  if (n < 1) throw InputError("--n must be positive");
  if (fixed_covariates) {
    for (const auto& row : *fixed_covariates) {
      if (row.size() != setup.params.beta.size()) {
        throw InputError("covariate file has " + std::to_string(row.size()) +
                         " columns, beta has " + std::to_string(setup.params.beta.size()));
      }
    }
  }

  fs::create_directories(a.out_dir);

  struct DatasetOutput {
    std::vector<std::string> manifest_rows;
    std::string oracle_row;
    std::string error;
    int code = 0;
  };
  std::vector<DatasetOutput> outputs(a.datasets);

  auto work = [&](std::size_t d) {
    DatasetOutput& out = outputs[d];
    try {
      const std::uint64_t seed = dataset_seed(a.seed, d);
      auto covs = fixed_covariates ? *fixed_covariates
                                   : generate_covariates(n, setup.params.beta.size(), seed);
      const std::vector<double> event_times = generate_event_times(setup.params, covs, seed);
      const double t_star = *std::max_element(event_times.begin(), event_times.end());
      const RiskVector risks = true_neg_rmst(setup.params, covs, t_star);
      const double oracle = oracle_cindex(setup.params, covs, event_times, {1.0, t_star});
      out.oracle_row = std::to_string(d) + "," + std::to_string(seed) + "," +
                       format_number(t_star) + "," + format_number(oracle);

      for (double eps : epsilons) {
        CensoringMechanism m = setup.censoring;
        m.epsilon = eps;
        const auto censor = generate_censoring(m, event_times, covs, seed);
        const SurvivalDataset ds = assemble(event_times, censor, covs);
        char name[64];
        std::snprintf(name, sizeof name, "d%04zu_eps%s.csv", d, epsilon_tag(eps).c_str());
        std::ostringstream csv;
        write_subjects_csv(csv, ds, risks);
        write_file(fs::path(a.out_dir) / name, csv.str());
        out.manifest_rows.push_back(std::to_string(d) + "," + epsilon_tag(eps) + "," + name +
                                    "," + std::to_string(ds.size()) + "," +
                                    std::to_string(ds.event_count()));
      }
    } catch (const Error& e) {
      out.error = e.what();
      out.code = e.kind() == Error::Kind::input ? kExitInput : kExitComputation;
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(a.threads, a.datasets));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t d; (d = next.fetch_add(1)) < a.datasets;) work(d);
      });
    }
    for (std::size_t d; (d = next.fetch_add(1)) < a.datasets;) work(d);
  }

  for (const auto& o : outputs) {
    if (o.code != 0) {
      std::cerr << "error: " << o.error << '\n';
      return o.code;
    }
  }
  std::string manifest = "dataset,epsilon,file,n,events\n";
  std::string oracle = "dataset,seed,t_star,oracle\n";
  for (const auto& o : outputs) {
    for (const auto& r : o.manifest_rows) manifest += r + "\n";
    oracle += o.oracle_row + "\n";
  }
  write_file(fs::path(a.out_dir) / "manifest.csv", manifest);
  write_file(fs::path(a.out_dir) / "oracle.csv", oracle);
  return 0;
}

// --- km ---------------------------------------------------------------------

struct KmArgs {
  std::string subjects;
  std::string target = "event";
  std::string out;
};

int run_km(const KmArgs& a) {
  KmTarget target;
  if (a.target == "event") {
    target = KmTarget::event;
  } else if (a.target == "censoring") {
    target = KmTarget::censoring;
  } else {
    throw InputError("--target must be event or censoring");
  }
  const SubjectsTable table = read_subjects_csv(a.subjects);
  const StepFunction f = km_fit(table.dataset, target);
  std::ostringstream csv;
  write_step_function_csv(csv, f);
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    write_file(a.out, csv.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concordance-index multiverse for right-censored survival predictions"};
  app.require_subcommand(1);

  CindexArgs ca;
  auto* cindex = app.add_subcommand("cindex", "Evaluate concordance profiles on a subjects file");
  cindex->add_option("--subjects", ca.subjects, "Subjects CSV: id,time,event[,risk][,cov_*]")
      ->required();
  cindex->add_option("--matrix", ca.matrix, "Survival matrix CSV: id then grid times");
  cindex->add_option("--risk-col", ca.risk_col, "Column of the subjects file holding risks");
  cindex->add_option("--transform", ca.transform,
                     "at-time:t, expected-mortality or neg-rmst:T* applied to the matrix");
  cindex->add_option("--grid", ca.grid, "start:stop:step to interpolate the matrix onto, or native")
      ->capture_default_str();
  cindex->add_option("--profiles", ca.profiles, "Comma-separated profile names (default: all)");
  cindex->add_option("--profile-file", ca.profile_file, "JSON file with a 'profiles' array");
  cindex->add_option("--tau", ca.tau, "none, max-uncensored or a value; overrides C_tau profiles");
  cindex->add_option("--bootstrap", ca.bootstrap, "B:size:level percentile bootstrap");
  cindex->add_option("--train", ca.train, "Subjects CSV whose censoring KM is the provided G");
  cindex->add_option("--seed", ca.seed, "Seed for resampling")->capture_default_str();
  cindex->add_option("--threads", ca.threads, "Worker threads")->capture_default_str();
  cindex->add_option("--out", ca.out, "Output prefix for .json and .csv (default: JSON on stdout)");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Generate semi-synthetic datasets and oracles");
  simulate->add_option("--n", sa.n, "Subjects per dataset")->capture_default_str();
  simulate->add_option("--datasets", sa.datasets, "Number of datasets")->capture_default_str();
  simulate->add_option("--mechanism", sa.mechanism,
                       "weibull_scaled, age_informed or uniform_quantile")
      ->capture_default_str();
  simulate->add_option("--epsilon-list", sa.epsilon_list, "Comma-separated censoring levels")
      ->capture_default_str();
  simulate->add_option("--params", sa.params, "JSON file with gamma, lambda, beta, censoring");
  simulate->add_option("--covariates", sa.covariates, "CSV of covariate rows (overrides --n)");
  simulate->add_option("--seed", sa.seed, "Run seed")->capture_default_str();
  simulate->add_option("--threads", sa.threads, "Worker threads")->capture_default_str();
  simulate->add_option("--out-dir", sa.out_dir, "Output directory")->capture_default_str();

  KmArgs ka;
  unsigned km_threads = 1;
  std::uint64_t km_seed = 0;
  auto* km = app.add_subcommand("km", "Kaplan-Meier curve of events or censoring");
  km->add_option("--subjects", ka.subjects, "Subjects CSV")->required();
  km->add_option("--target", ka.target, "event or censoring")->capture_default_str();
  km->add_option("--out", ka.out, "Output CSV (default: stdout)");
  km->add_option("--seed", km_seed, "Accepted for uniformity; the KM is deterministic");
  km->add_option("--threads", km_threads, "Accepted for uniformity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*cindex) return run_cindex(ca);
    if (*simulate) return run_simulate(sa);
    if (*km) return run_km(ka);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == Error::Kind::input ? kExitInput : kExitComputation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
