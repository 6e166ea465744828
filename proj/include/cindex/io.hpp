#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cindex/data_model.hpp"
#include "cindex/km.hpp"
#include "cindex/profiles.hpp"

namespace cindex {

/// Subjects CSV: header `id,time,event[,risk][,cov_1..cov_p]`. Columns named
/// cov_* become covariates in header order; any other numeric column is kept
/// by name (usually `risk`).
struct SubjectsTable {
  SurvivalDataset dataset;
  std::vector<std::string> extra_names;
  std::vector<std::vector<double>> extra_columns;

  /// Throws InputError when the column does not exist.
  RiskVector column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Errors are InputError with "<source>:<line>: <message>".
SubjectsTable parse_subjects_csv(std::istream& in, const std::string& source);
SubjectsTable read_subjects_csv(const std::string& path);

/// Matrix CSV: first column `id`, remaining headers are grid times. Rows must
/// follow the order of `subjects`.
SurvivalMatrix parse_matrix_csv(std::istream& in, const std::string& source,
                                const SurvivalDataset& subjects);
SurvivalMatrix read_matrix_csv(const std::string& path, const SurvivalDataset& subjects);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

/// Writes `id,time,event[,risk][,cov_1..]` with the given risk column.
void write_subjects_csv(std::ostream& out, const SurvivalDataset& ds,
                        const std::optional<RiskVector>& risks);

/// `time,value` rows of a KM curve; a curve without jumps is the row `0,1`.
void write_step_function_csv(std::ostream& out, const StepFunction& f);

struct ReportContext {
  std::string subjects;
  std::optional<std::string> matrix;
  std::optional<std::string> train;
  nlohmann::ordered_json risk_source;   // how the scalar risks were obtained
  nlohmann::ordered_json grid;          // grid of the survival matrix, or null
  std::optional<Truncation> tau_override;
  std::optional<BootstrapOptions> bootstrap;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json report_to_json(const SurvivalDataset& ds, const ReportContext& context,
                                      const std::vector<Profile>& profiles,
                                      const MultiverseReport& report);

/// Indented dump with a trailing newline; non-finite numbers become null.
std::string dump_json(const nlohmann::ordered_json& j);

void write_report_csv(std::ostream& out, const MultiverseReport& report);

}  // namespace cindex
