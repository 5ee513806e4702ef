#pragma once

#include <cstddef>

#include "fomlab/calibration.hpp"
#include "fomlab/circuit.hpp"

namespace fomlab {

struct MeritScores {
  std::size_t gate_count = 0;  // measurements excluded
  std::size_t two_qubit_gate_count = 0;
  std::size_t depth = 0;
  double expected_fidelity = 1.0;
  double esp = 1.0;
};

/// Product of the calibrated fidelity of every gate and measurement.
double expected_fidelity(const Circuit& circuit, const CalibrationData& calib);

/// Expected fidelity times prod_q exp(-t_idle(q) / min(T1(q), T2(q))), with
/// idle times taken from the ASAP schedule under the calibrated durations.
double esp(const Circuit& circuit, const CalibrationData& calib);

MeritScores score_all(const Circuit& circuit, const CalibrationData& calib);

}  // namespace fomlab
