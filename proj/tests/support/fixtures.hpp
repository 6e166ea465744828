#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "cindex/data_model.hpp"
#include "cindex/rng.hpp"

namespace fixtures {

struct Row {
  std::string id;
  double time;
  int event;
  double risk;
};

cindex::SurvivalDataset dataset(const std::vector<Row>& rows);
cindex::RiskVector risks(const std::vector<Row>& rows);

// a(1,1,.9) b(2,1,.5) c(3,0,.7) d(3,1,.2)
std::vector<Row> four_subjects();

std::vector<oracle::Subject> subjects_of(const cindex::SurvivalDataset& ds);

struct Instance {
  cindex::SurvivalDataset ds;
  std::vector<double> risk;
};

// Times and risks drawn from small value sets when `tie_rich`, so that tied
// times and tied predictions are common.
Instance random_instance(cindex::Rng& rng, std::size_t n, bool tie_rich);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Fresh directory under the build tree's test scratch area.
std::string scratch_dir(const std::string& name);

// Runs a shell command, returning its exit status.
int run(const std::string& command);

}  // namespace fixtures
