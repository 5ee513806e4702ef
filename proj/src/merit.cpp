#include "fomlab/merit.hpp"

#include <algorithm>
#include <cmath>

namespace fomlab {

double expected_fidelity(const Circuit& circuit, const CalibrationData& calib) {
  double product = 1.0;
  for (const auto& op : circuit.ops()) {
    if (op.is_measure()) {
      product *= calib.readout(op.targets[0]);
    } else if (op.is_two_qubit()) {
      product *= calib.pair_fidelity(op.targets[0], op.targets[1]);
    } else {
      product *= calib.single_fidelity(op.targets[0]);
    }
  }
  return product;
}

double esp(const Circuit& circuit, const CalibrationData& calib) {
  const double fidelity = expected_fidelity(circuit, calib);
  const Schedule schedule = schedule_asap(circuit, calib.gate_durations);
  double decay = 1.0;
  for (Qubit q = 0; q < circuit.num_qubits(); ++q) {
    const double coherence = std::min(calib.t1(q), calib.t2(q));
    decay *= std::exp(-schedule.idle_time[q] / coherence);
  }
  return fidelity * decay;
}

MeritScores score_all(const Circuit& circuit, const CalibrationData& calib) {
  const auto counts = gate_counts(circuit);
  MeritScores scores;
  scores.gate_count = counts.single_qubit + counts.two_qubit;
  scores.two_qubit_gate_count = counts.two_qubit;
  scores.depth = depth(circuit);
  scores.expected_fidelity = expected_fidelity(circuit, calib);
  scores.esp = esp(circuit, calib);
  return scores;
}

}  // namespace fomlab
