#include "cindex/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cindex/error.hpp"

namespace cindex {

SurvivalDataset::SurvivalDataset(std::vector<SurvivalRecord> records,
                                 std::vector<std::vector<double>> covariates)
    : covariates_(std::move(covariates)) {
  ids_.reserve(records.size());
  times_.reserve(records.size());
  events_.reserve(records.size());
  for (auto& r : records) {
    ids_.push_back(std::move(r.subject_id));
    times_.push_back(r.time);
    events_.push_back(r.event);
  }
}

SurvivalDataset SurvivalDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<SurvivalRecord> records;
  records.reserve(indices.size());
  std::vector<std::vector<double>> covs;
  if (has_covariates()) covs.reserve(indices.size());
  for (std::size_t i : indices) {
    records.push_back(record(i));
    if (has_covariates()) covs.push_back(covariates_[i]);
  }
  return SurvivalDataset(std::move(records), std::move(covs));
}

SurvivalDataset SurvivalDataset::with_flipped_events() const {
  SurvivalDataset out = *this;
  for (int& e : out.events_) e = e == 1 ? 0 : 1;
  return out;
}

std::size_t SurvivalDataset::event_count() const noexcept {
  return static_cast<std::size_t>(std::count(events_.begin(), events_.end(), 1));
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < violations.size(); ++k) {
    if (k) os << "; ";
    const auto& v = violations[k];
    if (v.row) os << "row " << *v.row << ": ";
    os << v.message;
  }
  return os.str();
}

ValidationReport validate_dataset(const SurvivalDataset& ds) {
  ValidationReport report;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double t = ds.time(i);
    if (!std::isfinite(t)) {
      report.violations.push_back({i, "non-finite time"});
    } else if (t < 0.0) {
      report.violations.push_back({i, "negative time"});
    }
    const int e = ds.event(i);
    if (e != 0 && e != 1) report.violations.push_back({i, "non-binary event indicator"});
  }
  if (ds.has_covariates()) {
    const auto& covs = ds.covariates();
    if (covs.size() != ds.size()) {
      report.violations.push_back({std::nullopt, "covariate row count differs from record count"});
    }
    const std::size_t p = ds.covariate_dim();
    for (std::size_t i = 0; i < covs.size(); ++i) {
      if (covs[i].size() != p) {
        report.violations.push_back({i, "covariate dimension mismatch"});
      }
    }
  }
  return report;
}

void require_valid(const SurvivalDataset& ds) {
  auto report = validate_dataset(ds);
  if (!report.ok()) throw InputError("invalid dataset: " + report.summary());
}

RiskVector::RiskVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InputError("risk value at row " + std::to_string(i) + " is not finite");
    }
  }
}

RiskVector RiskVector::subset(std::span<const std::size_t> indices) const {
  std::vector<double> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(values_[i]);
  return RiskVector(std::move(out));
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (!std::isfinite(points_[k])) throw InputError("time grid contains a non-finite point");
    if (k == 0 && points_[k] < 0.0) throw InputError("time grid starts below 0");
    if (k > 0 && !(points_[k] > points_[k - 1])) {
      throw InputError("time grid is not strictly increasing");
    }
  }
}

TimeGrid TimeGrid::regular(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("grid step must be positive");
  if (stop < start) throw InputError("grid stop precedes start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  std::vector<double> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    pts.push_back(start + static_cast<double>(k) * step);
  }
  return TimeGrid(std::move(pts));
}

std::optional<std::size_t> TimeGrid::floor_index(double t) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), t);
  if (it == points_.begin()) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin()) - 1;
}

SurvivalMatrix::SurvivalMatrix(TimeGrid grid, std::size_t rows, std::vector<double> probs)
    : grid_(std::move(grid)), rows_(rows), probs_(std::move(probs)) {
  const std::size_t m = grid_.size();
  if (probs_.size() != rows_ * m) {
    throw InputError("survival matrix has " + std::to_string(probs_.size()) +
                     " entries, expected " + std::to_string(rows_ * m));
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double* row = probs_.data() + i * m;
    for (std::size_t k = 0; k < m; ++k) {
      double& s = row[k];
      if (!std::isfinite(s)) {
        throw InputError("survival matrix row " + std::to_string(i) + " has a non-finite entry");
      }
      if (s < 0.0) {
        if (s < -kMonotoneTolerance) {
          throw InputError("survival matrix row " + std::to_string(i) + " has an entry below 0");
        }
        s = 0.0;
      } else if (s > 1.0) {
        if (s > 1.0 + kMonotoneTolerance) {
          throw InputError("survival matrix row " + std::to_string(i) + " has an entry above 1");
        }
        s = 1.0;
      }
      if (k > 0 && s > row[k - 1]) {
        if (s - row[k - 1] > kMonotoneTolerance) {
          throw InputError("survival matrix row " + std::to_string(i) +
                           " increases at grid point " + std::to_string(k));
        }
        s = row[k - 1];
      }
    }
  }
}

double SurvivalMatrix::step_value(std::size_t i, double t) const {
  auto k = grid_.floor_index(t);
  return k ? at(i, *k) : 1.0;
}

SurvivalMatrix SurvivalMatrix::subset(std::span<const std::size_t> indices) const {
  const std::size_t m = cols();
  std::vector<double> out;
  out.reserve(indices.size() * m);
  for (std::size_t i : indices) {
    auto r = row(i);
    out.insert(out.end(), r.begin(), r.end());
  }
  return SurvivalMatrix(grid_, indices.size(), std::move(out));
}

namespace {

constexpr std::array<std::string_view, kPairCaseCount> kCaseLabels = {
    "1A", "1B", "1C", "2A", "2B", "2C", "3",  "4",  "5A",   "5B",
    "5C", "6A", "6B", "6C", "7A", "7B", "7C", "8", "later",
};

}  // namespace

std::string_view to_string(PairCase c) noexcept { return kCaseLabels[index_of(c)]; }

std::optional<PairCase> parse_pair_case(std::string_view label) noexcept {
  for (std::size_t k = 0; k < kPairCaseCount; ++k) {
    if (kCaseLabels[k] == label) return kAllPairCases[k];
  }
  return std::nullopt;
}

std::string_view to_string(RankRelation r) noexcept {
  switch (r) {
    case RankRelation::greater: return "greater";
    case RankRelation::less: return "less";
    case RankRelation::tied: return "tied";
  }
  return "?";
}

PairCase classify_pair(double ti, int di, double tj, int dj, RankRelation rel) noexcept {
  if (ti > tj) return PairCase::later;

  // Offset within a lettered family: A, B, C.
  const auto letter = static_cast<std::uint8_t>(rel == RankRelation::greater ? 0
                                                : rel == RankRelation::less  ? 1
                                                                             : 2);
  auto lettered = [letter](PairCase a) {
    return static_cast<PairCase>(static_cast<std::uint8_t>(a) + letter);
  };

  const bool ei = di == 1;
  const bool ej = dj == 1;
  if (ti < tj) {
    if (ei && ej) return lettered(PairCase::c1A);
    if (ei) return lettered(PairCase::c2A);
    if (ej) return PairCase::c3;
    return PairCase::c4;
  }
  if (ei && ej) return lettered(PairCase::c5A);
  if (ei) return lettered(PairCase::c6A);
  if (ej) return lettered(PairCase::c7A);
  return PairCase::c8;
}

}  // namespace cindex
