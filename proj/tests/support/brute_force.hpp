#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cindex/policy.hpp"

namespace oracle {

// Plain-value inputs so the oracle shares nothing with the library beyond the
// policy description.
struct Subject {
  double time;
  int event;
};

struct Step {
  std::vector<double> times;   // strictly increasing jump times
  std::vector<double> values;  // value on [times[k], times[k+1])
};

struct Result {
  double numerator = 0.0;
  double denominator = 0.0;
  double estimate = 0.0;
  std::size_t dropped = 0;
};

// Product-limit estimate, multiplied out factor by factor.
Step naive_km(const std::vector<Subject>& subjects, bool censoring);

double step_at(const Step& s, double t);
double step_before(const Step& s, double t);

// Throws cindex::NoComparablePairs when nothing is comparable.
Result brute_force_oracle(const std::vector<Subject>& subjects, const std::vector<double>& risks,
                          const cindex::ConcordancePolicy& policy,
                          const std::optional<Step>& provided_g = std::nullopt);

// Time-dependent variant: survival[i][k] on `grid`.
Result brute_force_td(const std::vector<Subject>& subjects, const std::vector<double>& grid,
                      const std::vector<std::vector<double>>& survival,
                      const cindex::ConcordancePolicy& policy);

// Label of the pair case for (i, j), derived from first principles.
std::string case_label(double ti, int di, double tj, int dj, int rel);

}  // namespace oracle
