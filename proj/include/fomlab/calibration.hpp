#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "fomlab/circuit.hpp"

namespace fomlab {

/// Unordered qubit pair, stored with first < second.
struct QubitPair {
  Qubit first = 0;
  Qubit second = 0;

  QubitPair() = default;
  QubitPair(Qubit a, Qubit b) : first(a < b ? a : b), second(a < b ? b : a) {}

  auto operator<=>(const QubitPair&) const = default;
};

/// Device characterisation shared by the merit figures and the noise
/// simulator. T1/T2 may be +inf to mean "no decay".
struct CalibrationData {
  std::size_t num_qubits = 0;
  std::map<Qubit, double> single_qubit_fidelity;
  std::map<QubitPair, double> two_qubit_fidelity;
  std::map<Qubit, double> readout_fidelity;
  std::map<Qubit, double> t1_ns;
  std::map<Qubit, double> t2_ns;
  Durations gate_durations;
  std::set<QubitPair> coupling_map;
  double crosstalk_strength = 0.0;

  bool coupled(Qubit a, Qubit b) const { return coupling_map.contains(QubitPair(a, b)); }

  double single_fidelity(Qubit q) const;
  double pair_fidelity(Qubit a, Qubit b) const;
  double readout(Qubit q) const;
  double t1(Qubit q) const;
  double t2(Qubit q) const;

  /// Checks the structural invariants; throws ErrorKind::InvalidCalibration.
  void validate() const;
};

CalibrationData calibration_from_json(const std::string& text);
std::string calibration_to_json(const CalibrationData& calib);
CalibrationData load_calibration(const std::string& path);

/// Uniform device over a coupling map, used for fixtures and tests.
struct UniformDevice {
  std::size_t num_qubits = 2;
  std::set<QubitPair> coupling;
  double single_qubit_fidelity = 1.0;
  double two_qubit_fidelity = 1.0;
  double readout_fidelity = 1.0;
  double t1_ns = 1e9;
  double t2_ns = 1e9;
  double single_qubit_ns = 20.0;
  double two_qubit_ns = 40.0;
  double measure_ns = 500.0;
  double crosstalk = 0.0;
};

CalibrationData make_uniform_calibration(const UniformDevice& device);

/// All pairs {i, j} of a fully connected device.
std::set<QubitPair> all_to_all(std::size_t num_qubits);

/// rows x cols square grid numbered boustrophedon-style, so that every
/// (i, i+1) pair is a grid edge.
std::set<QubitPair> serpentine_grid(std::size_t rows, std::size_t cols);

}  // namespace fomlab
