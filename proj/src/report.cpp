#include "fomlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "fomlab/error.hpp"
#include "fomlab/stats.hpp"
#include "json.hpp"

namespace fomlab {

namespace {

using nlohmann::ordered_json;

struct Series {
  std::vector<double> labels;
  std::vector<std::vector<double>> values;  // one per row
};

Correlation correlate(const std::vector<double>& labels, const std::vector<double>& values) {
  Correlation c;
  try {
    const double r = pearson(labels, values);
    c.signed_r = r;
    c.abs_r = std::abs(r);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ZeroVariance && e.kind() != ErrorKind::TooFewSamples) throw;
  }
  return c;
}

std::string format_r(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

}  // namespace

const std::vector<std::string>& merit_row_names() {
  static const std::vector<std::string> names = {"Number of gates", "Two-qubit gates", "Circuit depth",
                                                 "Expected fidelity", "ESP"};
  return names;
}

const CorrelationRow& CorrelationReport::row(const std::string& name) const {
  for (const auto& r : rows) {
    if (r.name == name) return r;
  }
  throw Error(ErrorKind::InvalidArgument, "no report row named " + name);
}

CorrelationReport evaluate_report(const std::vector<EvaluationInput>& inputs) {
  if (inputs.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to evaluate");
  const auto& merit_names = merit_row_names();
  const std::size_t row_count = merit_names.size() + 1;

  CorrelationReport report;
  Series combined{{}, std::vector<std::vector<double>>(row_count)};
  std::vector<std::array<double, kFeatureCount>> importances;
  std::vector<std::pair<std::string, Series>> per_column;
  std::size_t combined_count = 0;
  for (const auto& in : inputs) {
    if (in.test->size() < 2) {
      throw Error(ErrorKind::TooFewSamples, in.name + ": report needs at least two test circuits");
    }
    Series s{{}, std::vector<std::vector<double>>(row_count)};
    for (const auto& sample : in.test->samples) {
      const auto it = in.merits->find(sample.circuit_id);
      if (it == in.merits->end()) {
        throw Error(ErrorKind::InvalidArgument, in.name + ": no merit scores for " + sample.circuit_id);
      }
      const MeritScores& m = it->second;
      s.labels.push_back(sample.label);
      s.values[0].push_back(static_cast<double>(m.gate_count));
      s.values[1].push_back(static_cast<double>(m.two_qubit_gate_count));
      s.values[2].push_back(static_cast<double>(m.depth));
      s.values[3].push_back(m.expected_fidelity);
      s.values[4].push_back(m.esp);
      s.values[5].push_back(predict(*in.model, sample.features));
    }
    if (in.in_combined) {
      ++combined_count;
      combined.labels.insert(combined.labels.end(), s.labels.begin(), s.labels.end());
      for (std::size_t r = 0; r < row_count; ++r) {
        combined.values[r].insert(combined.values[r].end(), s.values[r].begin(), s.values[r].end());
      }
    }
    importances.push_back(in.model->importances);
    report.columns.push_back(in.name);
    report.n_test_by_column[in.name] = s.labels.size();
    per_column.emplace_back(in.name, std::move(s));
  }
  if (combined_count > 1) {
    report.columns.push_back(kCombinedColumn);
    report.n_test_by_column[kCombinedColumn] = combined.labels.size();
    per_column.emplace_back(kCombinedColumn, std::move(combined));
  }
  report.n_test_circuits = report.n_test_by_column.at(report.columns.back());
  if (combined_count <= 1) {
    report.n_test_circuits = 0;
    for (const auto& [column, n] : report.n_test_by_column) report.n_test_circuits += n;
  }

  for (std::size_t r = 0; r < row_count; ++r) {
    CorrelationRow row;
    row.name = r < merit_names.size() ? merit_names[r] : kModelRow;
    for (const auto& [column, series] : per_column) {
      row.by_column[column] = correlate(series.labels, series.values[r]);
    }
    report.rows.push_back(std::move(row));
  }

  std::array<double, kFeatureCount> mean{};
  for (const auto& imp : importances) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) mean[f] += imp[f] / static_cast<double>(importances.size());
  }
  std::vector<std::size_t> order(kFeatureCount);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mean[a] > mean[b]; });
  for (std::size_t f : order) report.importance_ranking.emplace_back(std::string(feature_schema()[f]), mean[f]);
  return report;
}

CorrelationReport evaluate_report(const LabeledDataset& test, const ForestModel& model,
                                  const std::map<std::string, MeritScores>& per_circuit_merits,
                                  const std::string& column) {
  return evaluate_report({EvaluationInput{column, &test, &model, &per_circuit_merits}});
}

std::string CorrelationReport::to_json() const {
  ordered_json doc;
  doc["columns"] = columns;
  ordered_json rows_json = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json cells = ordered_json::object();
    for (const auto& column : columns) {
      const auto& c = r.by_column.at(column);
      if (c.signed_r) {
        cells[column] = {{"signed_r", *c.signed_r}, {"abs_r", *c.abs_r}};
      } else {
        cells[column] = {{"signed_r", nullptr}, {"abs_r", nullptr}, {"status", "n/a"}};
      }
    }
    rows_json.push_back({{"name", r.name}, {"values", cells}});
  }
  doc["rows"] = rows_json;
  doc["n_test_circuits"] = n_test_circuits;
  ordered_json per_column = ordered_json::object();
  for (const auto& column : columns) per_column[column] = n_test_by_column.at(column);
  doc["n_test_by_column"] = per_column;
  ordered_json ranking = ordered_json::array();
  for (const auto& [name, value] : importance_ranking) ranking.push_back({name, value});
  doc["importance_ranking"] = ranking;
  return doc.dump(2) + "\n";
}

std::string CorrelationReport::to_text() const {
  std::size_t name_width = std::string("Figure of merit").size();
  for (const auto& r : rows) name_width = std::max(name_width, r.name.size());
  std::size_t cell_width = 8;
  for (const auto& c : columns) cell_width = std::max(cell_width, c.size());

  std::ostringstream out;
  auto pad = [](const std::string& s, std::size_t w, bool left) {
    const std::string fill(w > s.size() ? w - s.size() : 0, ' ');
    return left ? s + fill : fill + s;
  };
  out << "Pearson correlation with Hellinger distance (|r|, signed r in parentheses)\n";
  out << pad("Figure of merit", name_width, true);
  for (const auto& c : columns) out << " | " << pad(c, cell_width + 11, false);
  out << '\n' << std::string(name_width, '-');
  for (std::size_t i = 0; i < columns.size(); ++i) out << "-+-" << std::string(cell_width + 11, '-');
  out << '\n';
  for (const auto& r : rows) {
    out << pad(r.name, name_width, true);
    for (const auto& c : columns) {
      const auto& cell = r.by_column.at(c);
      const std::string text = cell.abs_r ? format_r(cell.abs_r) + " (" + format_r(cell.signed_r) + ")" : "n/a";
      out << " | " << pad(text, cell_width + 11, false);
    }
    out << '\n';
  }
  out << "\nTest circuits: " << n_test_circuits << '\n';
  out << "\nFeature importance\n";
  for (const auto& [name, value] : importance_ranking) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-34s %.4f\n", name.c_str(), value);
    out << buf;
  }
  return out.str();
}

}  // namespace fomlab
