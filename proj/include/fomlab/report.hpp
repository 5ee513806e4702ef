#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fomlab/forest.hpp"
#include "fomlab/merit.hpp"

namespace fomlab {

struct Correlation {
  std::optional<double> signed_r;  // empty when a series had zero variance
  std::optional<double> abs_r;
};

struct CorrelationRow {
  std::string name;
  std::map<std::string, Correlation> by_column;
};

/// Pearson correlation of every figure of merit with the Hellinger labels,
/// per QPU configuration plus a combined column over all of them.
struct CorrelationReport {
  std::vector<std::string> columns;
  std::vector<CorrelationRow> rows;
  std::size_t n_test_circuits = 0;
  std::map<std::string, std::size_t> n_test_by_column;
  std::vector<std::pair<std::string, double>> importance_ranking;  // descending

  const CorrelationRow& row(const std::string& name) const;

  std::string to_json() const;
  std::string to_text() const;
};

inline constexpr const char* kCombinedColumn = "combined";
inline constexpr const char* kModelRow = "Proposed model";

/// Names of the established figures of merit, in report order.
const std::vector<std::string>& merit_row_names();

struct EvaluationInput {
  std::string name;
  const LabeledDataset* test = nullptr;
  const ForestModel* model = nullptr;
  const std::map<std::string, MeritScores>* merits = nullptr;  // by circuit id
  bool in_combined = true;
};

/// Multi-configuration report; a combined column is added when more than
/// one configuration is flagged in_combined.
CorrelationReport evaluate_report(const std::vector<EvaluationInput>& inputs);

CorrelationReport evaluate_report(const LabeledDataset& test, const ForestModel& model,
                                  const std::map<std::string, MeritScores>& per_circuit_merits,
                                  const std::string& column = "qpu");

}  // namespace fomlab
