#include "fomlab/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "fomlab/error.hpp"
#include "fomlab/parallel.hpp"
#include "fomlab/random.hpp"
#include "fomlab/stats.hpp"

namespace fomlab {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

bool DatasetBuild::too_many_skipped() const {
  const std::size_t total = data.size() + skipped.size();
  return total > 0 && skipped.size() * 10 > total;
}

DatasetBuild build_dataset(const std::vector<NamedCircuit>& circuits, const CalibrationData& calib,
                           const NoiseConfig& noise, std::uint64_t shots) {
  std::vector<std::optional<Sample>> rows(circuits.size());
  std::vector<std::string> failures(circuits.size());
  parallel_for(circuits.size(), [&](std::size_t i) {
    const auto& [id, circuit] = circuits[i];
    try {
      NoiseConfig per_circuit = noise;
      per_circuit.rng_seed = derive_seed(noise.rng_seed, fnv1a(id));
      const Distribution ideal = simulate_ideal(circuit);
      const Distribution noisy = sample_noisy(circuit, calib, per_circuit, shots);
      rows[i] = Sample{extract_features(circuit), hellinger(ideal, noisy), id};
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  DatasetBuild build;
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    if (rows[i]) {
      build.data.samples.push_back(std::move(*rows[i]));
    } else {
      build.skipped.emplace_back(circuits[i].id, failures[i]);
    }
  }
  std::stable_sort(build.data.samples.begin(), build.data.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.circuit_id < b.circuit_id; });
  return build;
}

std::string dataset_to_csv(const LabeledDataset& data) {
  std::string out;
  for (auto name : feature_schema()) {
    out += name;
    out += ',';
  }
  out += "label,circuit_id\n";
  char buf[40];
  for (const auto& s : data.samples) {
    for (double v : s.features.values) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g,", s.label);
    out += buf;
    out += s.circuit_id;
    out += '\n';
  }
  return out;
}

LabeledDataset dataset_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::EmptyDataset, "dataset file is empty");
  const auto header = split_csv_line(line);
  if (header.size() != kFeatureCount + 2 || header[kFeatureCount] != "label" ||
      header[kFeatureCount + 1] != "circuit_id" ||
      !std::equal(feature_schema().begin(), feature_schema().end(), header.begin())) {
    throw Error(ErrorKind::SchemaMismatch, "dataset header does not match the feature schema");
  }
  LabeledDataset data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != kFeatureCount + 2) {
      throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(line_no) + ": expected " +
                                                  std::to_string(kFeatureCount + 2) + " columns");
    }
    Sample s;
    for (std::size_t f = 0; f < kFeatureCount; ++f) s.features[f] = parse_double(cells[f], line_no);
    s.label = parse_double(cells[kFeatureCount], line_no);
    s.circuit_id = cells[kFeatureCount + 1];
    data.samples.push_back(std::move(s));
  }
  data.validate();
  return data;
}

void save_dataset(const LabeledDataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << dataset_to_csv(data);
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return dataset_from_csv(buffer.str());
}

}  // namespace fomlab
