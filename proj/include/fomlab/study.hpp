#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fomlab/calibration.hpp"
#include "fomlab/corpus.hpp"
#include "fomlab/dataset.hpp"
#include "fomlab/forest.hpp"
#include "fomlab/merit.hpp"
#include "fomlab/report.hpp"
#include "fomlab/simulator.hpp"

namespace fomlab {

struct QpuSetup {
  std::string name;
  CalibrationData reported;  // what the figures of merit see
  CalibrationData truth;     // what the simulator executes
  bool in_combined = true;
};

struct StudyConfig {
  std::vector<CorpusSpec> corpus;  // concatenated; ids must not repeat
  std::vector<QpuSetup> qpus;
  NoiseConfig noise;
  std::uint64_t shots = 2000;
  double test_fraction = 0.2;
  std::size_t folds = 3;
  std::uint64_t seed = 0;  // split, folds and forests
  std::vector<HyperParams> grid;  // empty = default grid

  /// Relative calibration paths resolve against base_dir.
  static StudyConfig from_json(const std::string& text, const std::string& base_dir = ".");
};

StudyConfig load_study_config(const std::string& path);

struct QpuRun {
  std::string name;
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::pair<std::string, std::string>> skipped;
  GridSearchResult search;
  ForestModel model;
  std::map<std::string, MeritScores> merits;  // test circuits, reported calibration
  bool in_combined = true;
};

struct StudyResult {
  std::vector<QpuRun> runs;
  CorrelationReport report;
};

/// Corpus -> labelled dataset per QPU -> split -> grid search -> forest ->
/// correlation report. QPUs that share a simulator truth share their
/// dataset and model and differ only in the merits they are scored with.
StudyResult run_study(const StudyConfig& config);

}  // namespace fomlab
