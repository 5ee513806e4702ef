#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fomlab/calibration.hpp"
#include "fomlab/corpus.hpp"
#include "fomlab/forest.hpp"
#include "fomlab/simulator.hpp"

namespace fomlab {

struct DatasetBuild {
  LabeledDataset data;
  std::vector<std::pair<std::string, std::string>> skipped;  // (circuit id, reason)

  /// True when more than 10% of the circuits had to be skipped.
  bool too_many_skipped() const;
};

/// Labels every circuit with the Hellinger distance between its ideal and
/// sampled noisy distributions. Circuit `id` is sampled with the seed
/// derive_seed(noise.rng_seed, fnv1a(id)), so labels do not depend on the
/// corpus order. Rows come back sorted by circuit id.
DatasetBuild build_dataset(const std::vector<NamedCircuit>& circuits, const CalibrationData& calib,
                           const NoiseConfig& noise, std::uint64_t shots);

/// Header: schema names, "label", "circuit_id".
std::string dataset_to_csv(const LabeledDataset& data);
LabeledDataset dataset_from_csv(const std::string& text);

void save_dataset(const LabeledDataset& data, const std::string& path);
LabeledDataset load_dataset(const std::string& path);

}  // namespace fomlab
