#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cindex {

struct SurvivalRecord {
  std::string subject_id;
  double time = 0.0;
  int event = 0;  // 1 = event observed, 0 = right-censored
};

/// Subjects in canonical order. Subject order is the alignment key shared by
/// risks and survival matrices; no joining by id happens past I/O.
///
/// The constructor stores whatever it is given; use validate_dataset() (or
/// require_valid()) before computing anything on it.
class SurvivalDataset {
 public:
  SurvivalDataset() = default;
  explicit SurvivalDataset(std::vector<SurvivalRecord> records,
                           std::vector<std::vector<double>> covariates = {});

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }

  const std::string& id(std::size_t i) const { return ids_[i]; }
  double time(std::size_t i) const { return times_[i]; }
  int event(std::size_t i) const { return events_[i]; }

  std::span<const double> times() const noexcept { return times_; }
  std::span<const int> events() const noexcept { return events_; }
  std::span<const std::string> ids() const noexcept { return ids_; }

  bool has_covariates() const noexcept { return !covariates_.empty(); }
  // Dimension of the first covariate vector, 0 without covariates.
  std::size_t covariate_dim() const noexcept {
    return covariates_.empty() ? 0 : covariates_.front().size();
  }
  const std::vector<std::vector<double>>& covariates() const noexcept { return covariates_; }
  std::span<const double> covariate_row(std::size_t i) const { return covariates_[i]; }

  SurvivalRecord record(std::size_t i) const { return {ids_[i], times_[i], events_[i]}; }

  /// Rows at the given indices, in the given order (duplicates allowed).
  SurvivalDataset subset(std::span<const std::size_t> indices) const;

  /// Same subjects with the event indicator flipped (1 <-> 0).
  SurvivalDataset with_flipped_events() const;

  std::size_t event_count() const noexcept;

 private:
  std::vector<std::string> ids_;
  std::vector<double> times_;
  std::vector<int> events_;
  std::vector<std::vector<double>> covariates_;
};

struct Violation {
  std::optional<std::size_t> row;  // subject index, if the violation is row-level
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_dataset(const SurvivalDataset& ds);

/// Throws InputError carrying the report summary when ds is not valid.
void require_valid(const SurvivalDataset& ds);

/// One model output M(x_i) per subject; higher means riskier.
class RiskVector {
 public:
  RiskVector() = default;
  /// Throws InputError on non-finite values.
  explicit RiskVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  RiskVector subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<double> values_;
};

/// Strictly increasing, finite, nonnegative time points.
class TimeGrid {
 public:
  TimeGrid() = default;
  /// Throws InputError when the points are not strictly increasing, finite and >= 0.
  explicit TimeGrid(std::vector<double> points);

  /// start, start+step, ... up to and including stop (within half a step of rounding).
  static TimeGrid regular(double start, double stop, double step);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  double operator[](std::size_t k) const { return points_[k]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  std::span<const double> points() const noexcept { return points_; }

  /// Index of the last point <= t, or nullopt if t precedes the grid.
  std::optional<std::size_t> floor_index(double t) const;

  bool operator==(const TimeGrid&) const = default;

 private:
  std::vector<double> points_;
};

/// Survival probabilities S(t | x_i) for n subjects over a shared grid,
/// stored row-major.
class SurvivalMatrix {
 public:
  static constexpr double kMonotoneTolerance = 1e-9;

  SurvivalMatrix() = default;
  /// Entries must lie in [0, 1] and rows must be nonincreasing. Deviations up
  /// to kMonotoneTolerance are clamped; larger ones throw InputError.
  SurvivalMatrix(TimeGrid grid, std::size_t rows, std::vector<double> probs);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return grid_.size(); }

  double at(std::size_t i, std::size_t k) const { return probs_[i * cols() + k]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(probs_).subspan(i * cols(), cols());
  }
  std::span<const double> data() const noexcept { return probs_; }

  /// Right-continuous step lookup: value at the last grid point <= t, and 1
  /// before the first grid point.
  double step_value(std::size_t i, double t) const;

  SurvivalMatrix subset(std::span<const std::size_t> indices) const;

 private:
  TimeGrid grid_;
  std::size_t rows_ = 0;
  std::vector<double> probs_;
};

/// Relation between the predictions of an ordered pair (i, j): `greater`
/// means subject i is predicted to be at higher risk than j.
enum class RankRelation : std::uint8_t { greater, less, tied };

/// Pair-case taxonomy over ordered pairs (i, j) anchored at subject i.
///
///   1x  T_i < T_j, (1,1)     5x  T_i = T_j, (1,1)
///   2x  T_i < T_j, (1,0)     6x  T_i = T_j, (1,0)
///   3   T_i < T_j, (0,1)     7x  T_i = T_j, (0,1)
///   4   T_i < T_j, (0,0)     8   T_i = T_j, (0,0)
///
/// with x = A (i riskier), B (j riskier), C (tied predictions). `later`
/// covers T_i > T_j: such pairs are owned by the reversed ordering.
enum class PairCase : std::uint8_t {
  c1A, c1B, c1C,
  c2A, c2B, c2C,
  c3,
  c4,
  c5A, c5B, c5C,
  c6A, c6B, c6C,
  c7A, c7B, c7C,
  c8,
  later,
};

inline constexpr std::size_t kPairCaseCount = 19;

inline constexpr std::array<PairCase, kPairCaseCount> kAllPairCases = {
    PairCase::c1A, PairCase::c1B, PairCase::c1C, PairCase::c2A, PairCase::c2B,
    PairCase::c2C, PairCase::c3,  PairCase::c4,  PairCase::c5A, PairCase::c5B,
    PairCase::c5C, PairCase::c6A, PairCase::c6B, PairCase::c6C, PairCase::c7A,
    PairCase::c7B, PairCase::c7C, PairCase::c8,  PairCase::later,
};

constexpr std::size_t index_of(PairCase c) noexcept { return static_cast<std::size_t>(c); }

std::string_view to_string(PairCase c) noexcept;
std::optional<PairCase> parse_pair_case(std::string_view label) noexcept;

std::string_view to_string(RankRelation r) noexcept;

PairCase classify_pair(double ti, int di, double tj, int dj, RankRelation rel) noexcept;

/// Relation of two scalar risks under an absolute tie tolerance.
inline RankRelation compare_risks(double mi, double mj, double tie_tolerance) noexcept {
  const double diff = mi - mj;
  if (diff > tie_tolerance) return RankRelation::greater;
  if (-diff > tie_tolerance) return RankRelation::less;
  return RankRelation::tied;
}

}  // namespace cindex
