#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fomlab/calibration.hpp"
#include "fomlab/circuit.hpp"
#include "fomlab/distribution.hpp"

namespace fomlab {

/// Largest register the simulators accept.
inline constexpr std::size_t kMaxSimQubits = 20;

using Amplitude = std::complex<double>;

/// Dense pure state, little-endian: bit q of the basis index is qubit q.
class StateVector {
 public:
  explicit StateVector(std::size_t num_qubits);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const noexcept { return amps_; }

  void apply(const GateOp& op);

  /// pauli: 0 = I, 1 = X, 2 = Y, 3 = Z.
  void apply_pauli(Qubit q, unsigned pauli);

  /// Probability of reading 1 on qubit q.
  double probability_one(Qubit q) const;

  /// Amplitude-damping Kraus branches, each renormalised. `p_one` is
  /// probability_one(q) of the current state.
  void damp_jump(Qubit q, double p_one);
  void damp_no_jump(Qubit q, double gamma, double p_one);

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  void apply_matrix(Qubit q, Amplitude m00, Amplitude m01, Amplitude m10, Amplitude m11);
  void apply_diagonal(Qubit q, Amplitude d0, Amplitude d1);

  std::size_t num_qubits_;
  std::vector<Amplitude> amps_;
};

struct NoiseConfig {
  bool enable_gate_depolarizing = true;
  bool enable_readout_error = true;
  bool enable_idle_decay = true;
  bool enable_crosstalk = true;
  std::uint64_t rng_seed = 0;

  static NoiseConfig none(std::uint64_t seed = 0) { return {false, false, false, false, seed}; }

  std::string to_json() const;
  static NoiseConfig from_json(const std::string& text);
};

NoiseConfig load_noise_config(const std::string& path);

/// Exact final state; all qubits are measured at the end.
StateVector simulate_statevector(const Circuit& circuit);

/// Born-rule distribution of the noiseless circuit (entries < 1e-12 dropped).
Distribution simulate_ideal(const Circuit& circuit);

/// Monte-Carlo trajectory sampling of a noisy execution. Shot i draws from
/// its own stream derived from (rng_seed, i), so the result depends only on
/// the seed. Noise channels per ASAP layer, in order:
///   gate depolarising with p = 1 - fidelity after every gate;
///   crosstalk depolarising on the four qubits of every pair of same-layer
///   two-qubit gates whose pairs touch in the coupling map;
///   amplitude damping and phase flips on idling, unmeasured qubits;
/// and a classical bit flip with p = 1 - readout fidelity at readout.
Distribution sample_noisy(const Circuit& circuit, const CalibrationData& calib,
                          const NoiseConfig& noise, std::uint64_t shots);

/// Same trajectories as sample_noisy, simulated shot by shot from scratch.
/// Produces bit-identical output; kept for cross-checking.
Distribution sample_noisy_reference(const Circuit& circuit, const CalibrationData& calib,
                                    const NoiseConfig& noise, std::uint64_t shots);

}  // namespace fomlab
