#include "fixtures.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fixtures {

cindex::SurvivalDataset dataset(const std::vector<Row>& rows) {
  std::vector<cindex::SurvivalRecord> recs;
  for (const auto& r : rows) recs.push_back({r.id, r.time, r.event});
  return cindex::SurvivalDataset(std::move(recs));
}

cindex::RiskVector risks(const std::vector<Row>& rows) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.risk);
  return cindex::RiskVector(std::move(v));
}

std::vector<Row> four_subjects() {
  return {{"a", 1, 1, 0.9}, {"b", 2, 1, 0.5}, {"c", 3, 0, 0.7}, {"d", 3, 1, 0.2}};
}

std::vector<oracle::Subject> subjects_of(const cindex::SurvivalDataset& ds) {
  std::vector<oracle::Subject> out;
  for (std::size_t i = 0; i < ds.size(); ++i) out.push_back({ds.time(i), ds.event(i)});
  return out;
}

Instance random_instance(cindex::Rng& rng, std::size_t n, bool tie_rich) {
  std::vector<cindex::SurvivalRecord> recs;
  std::vector<double> risk;
  const double censor_rate = rng.uniform(0.0, 0.8);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = tie_rich ? static_cast<double>(1 + rng.below(8)) : rng.uniform(0.0, 100.0);
    const int e = rng.uniform() < censor_rate ? 0 : 1;
    recs.push_back({std::to_string(i), t, e});
    risk.push_back(tie_rich ? static_cast<double>(rng.below(5)) / 4.0 : rng.normal());
  }
  return {cindex::SurvivalDataset(std::move(recs)), std::move(risk)};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string scratch_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path p = fs::path(CINDEX_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

int run(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace fixtures
