#include "fomlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "fomlab/error.hpp"
#include "fomlab/parallel.hpp"
#include "fomlab/random.hpp"
#include "json.hpp"

namespace fomlab {

namespace {

inline Amplitude mul(Amplitude a, Amplitude b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

void check_simulable(const Circuit& circuit) {
  if (circuit.num_qubits() > kMaxSimQubits) {
    throw Error(ErrorKind::QubitLimitExceeded, std::to_string(circuit.num_qubits()) +
                                                   " qubits exceed the simulator limit of " +
                                                   std::to_string(kMaxSimQubits));
  }
  const std::size_t measured = circuit.measured_count();
  if (measured != 0 && measured != circuit.num_qubits()) {
    throw Error(ErrorKind::InvalidCircuit, "either all qubits or none must be measured");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(std::size_t num_qubits)
    : num_qubits_(num_qubits), amps_(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0}) {
  if (num_qubits > kMaxSimQubits) {
    throw Error(ErrorKind::QubitLimitExceeded, std::to_string(num_qubits) + " qubits exceed the simulator limit");
  }
  amps_[0] = 1.0;
}

void StateVector::apply_matrix(Qubit q, Amplitude m00, Amplitude m01, Amplitude m10, Amplitude m11) {
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = amps_.size();
  for (std::size_t base = 0; base < dim; base += 2 * mask) {
    for (std::size_t i = base; i < base + mask; ++i) {
      const Amplitude a0 = amps_[i];
      const Amplitude a1 = amps_[i | mask];
      amps_[i] = mul(m00, a0) + mul(m01, a1);
      amps_[i | mask] = mul(m10, a0) + mul(m11, a1);
    }
  }
}

void StateVector::apply_diagonal(Qubit q, Amplitude d0, Amplitude d1) {
  const std::size_t mask = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    amps_[i] = mul((i & mask) ? d1 : d0, amps_[i]);
  }
}

void StateVector::apply(const GateOp& op) {
  const Qubit q = op.targets[0];
  const std::size_t dim = amps_.size();
  const Amplitude i_unit{0.0, 1.0};
  switch (op.kind) {
    case GateKind::X:
    case GateKind::Y:
    case GateKind::Z:
      apply_pauli(q, op.kind == GateKind::X ? 1 : op.kind == GateKind::Y ? 2 : 3);
      return;
    case GateKind::H: {
      const double r = std::numbers::sqrt2 / 2.0;
      const std::size_t mask = std::size_t{1} << q;
      for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
          const Amplitude a0 = amps_[i];
          const Amplitude a1 = amps_[i | mask];
          amps_[i] = (a0 + a1) * r;
          amps_[i | mask] = (a0 - a1) * r;
        }
      }
      return;
    }
    case GateKind::S: apply_diagonal(q, 1.0, i_unit); return;
    case GateKind::Sdg: apply_diagonal(q, 1.0, -i_unit); return;
    case GateKind::T: apply_diagonal(q, 1.0, std::polar(1.0, std::numbers::pi / 4)); return;
    case GateKind::Tdg: apply_diagonal(q, 1.0, std::polar(1.0, -std::numbers::pi / 4)); return;
    case GateKind::RZ: {
      const double half = *op.param / 2.0;
      apply_diagonal(q, std::polar(1.0, -half), std::polar(1.0, half));
      return;
    }
    case GateKind::RX: {
      const double c = std::cos(*op.param / 2.0);
      const double s = std::sin(*op.param / 2.0);
      apply_matrix(q, c, Amplitude{0.0, -s}, Amplitude{0.0, -s}, c);
      return;
    }
    case GateKind::RY: {
      const double c = std::cos(*op.param / 2.0);
      const double s = std::sin(*op.param / 2.0);
      apply_matrix(q, c, -s, s, c);
      return;
    }
    case GateKind::CX: {
      const std::size_t cmask = std::size_t{1} << op.targets[0];
      const std::size_t tmask = std::size_t{1} << op.targets[1];
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
      }
      return;
    }
    case GateKind::CZ: {
      const std::size_t both = (std::size_t{1} << op.targets[0]) | (std::size_t{1} << op.targets[1]);
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & both) == both) amps_[i] = -amps_[i];
      }
      return;
    }
    case GateKind::Swap: {
      const std::size_t amask = std::size_t{1} << op.targets[0];
      const std::size_t bmask = std::size_t{1} << op.targets[1];
      for (std::size_t i = 0; i < dim; ++i) {
        if ((i & amask) && !(i & bmask)) std::swap(amps_[i], amps_[i ^ amask ^ bmask]);
      }
      return;
    }
    case GateKind::Measure:
      return;  // readout is handled by the samplers
  }
}

void StateVector::apply_pauli(Qubit q, unsigned pauli) {
  const std::size_t mask = std::size_t{1} << q;
  const std::size_t dim = amps_.size();
  switch (pauli) {
    case 1:
      for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) std::swap(amps_[i], amps_[i | mask]);
      }
      return;
    case 2:
      // Y = [[0, -i], [i, 0]]
      for (std::size_t base = 0; base < dim; base += 2 * mask) {
        for (std::size_t i = base; i < base + mask; ++i) {
          const Amplitude a0 = amps_[i];
          const Amplitude a1 = amps_[i | mask];
          amps_[i] = Amplitude{a1.imag(), -a1.real()};
          amps_[i | mask] = Amplitude{-a0.imag(), a0.real()};
        }
      }
      return;
    case 3:
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) amps_[i] = -amps_[i];
      }
      return;
    default:
      return;
  }
}

double StateVector::probability_one(Qubit q) const {
  const std::size_t mask = std::size_t{1} << q;
  double p = 0.0;
  for (std::size_t base = mask; base < amps_.size(); base += 2 * mask) {
    for (std::size_t i = base; i < base + mask; ++i) p += std::norm(amps_[i]);
  }
  return p;
}

void StateVector::damp_jump(Qubit q, double p_one) {
  const std::size_t mask = std::size_t{1} << q;
  const double scale = 1.0 / std::sqrt(p_one);
  for (std::size_t base = 0; base < amps_.size(); base += 2 * mask) {
    for (std::size_t i = base; i < base + mask; ++i) {
      amps_[i] = amps_[i | mask] * scale;
      amps_[i | mask] = 0.0;
    }
  }
}

void StateVector::damp_no_jump(Qubit q, double gamma, double p_one) {
  const std::size_t mask = std::size_t{1} << q;
  const double norm = 1.0 / std::sqrt(1.0 - gamma * p_one);
  const double one_scale = std::sqrt(1.0 - gamma) * norm;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * mask) {
    for (std::size_t i = base; i < base + mask; ++i) {
      amps_[i] *= norm;
      amps_[i | mask] *= one_scale;
    }
  }
}

double StateVector::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return sum;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

// ---------------------------------------------------------------------------
// NoiseConfig

std::string NoiseConfig::to_json() const {
  nlohmann::json doc;
  doc["enable_gate_depolarizing"] = enable_gate_depolarizing;
  doc["enable_readout_error"] = enable_readout_error;
  doc["enable_idle_decay"] = enable_idle_decay;
  doc["enable_crosstalk"] = enable_crosstalk;
  doc["rng_seed"] = rng_seed;
  return doc.dump(2) + "\n";
}

NoiseConfig NoiseConfig::from_json(const std::string& text) {
  NoiseConfig cfg;
  try {
    const auto doc = nlohmann::json::parse(text);
    cfg.enable_gate_depolarizing = doc.value("enable_gate_depolarizing", cfg.enable_gate_depolarizing);
    cfg.enable_readout_error = doc.value("enable_readout_error", cfg.enable_readout_error);
    cfg.enable_idle_decay = doc.value("enable_idle_decay", cfg.enable_idle_decay);
    cfg.enable_crosstalk = doc.value("enable_crosstalk", cfg.enable_crosstalk);
    cfg.rng_seed = doc.value("rng_seed", cfg.rng_seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed noise JSON: ") + e.what());
  }
  return cfg;
}

NoiseConfig load_noise_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return NoiseConfig::from_json(buffer.str());
}

// ---------------------------------------------------------------------------
// Ideal simulation

StateVector simulate_statevector(const Circuit& circuit) {
  check_simulable(circuit);
  StateVector psi(circuit.num_qubits());
  for (const auto& op : circuit.ops()) psi.apply(op);
  return psi;
}

Distribution simulate_ideal(const Circuit& circuit) {
  const StateVector psi = simulate_statevector(circuit);
  std::map<std::string, double> probs;
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    const double p = std::norm(psi.amplitudes()[i]);
    if (p >= 1e-12) probs.emplace(bitstring(i, circuit.num_qubits()), p);
  }
  return Distribution(circuit.num_qubits(), std::move(probs));
}

// ---------------------------------------------------------------------------
// Noisy trajectories

namespace {

enum class ActionType : std::uint8_t { Gate, Depolarize1, Depolarize2, Damp, Dephase };

struct Action {
  ActionType type = ActionType::Gate;
  Qubit a = 0;
  Qubit b = 0;
  std::size_t op = 0;
  double p = 0.0;  // error probability, or gamma for Damp
};

/// Flattened trajectory program: the circuit interleaved with every noise
/// decision in the order the RNG consumes them.
struct NoiseProgram {
  const Circuit* circuit = nullptr;
  std::vector<Action> actions;
  std::vector<double> readout_flip;  // per qubit; 0 when disabled
};

bool pairs_adjacent(const GateOp& g, const GateOp& h, const CalibrationData& calib) {
  for (Qubit x : g.qubits()) {
    for (Qubit y : h.qubits()) {
      if (calib.coupled(x, y)) return true;
    }
  }
  return false;
}

NoiseProgram build_program(const Circuit& circuit, const CalibrationData& calib, const NoiseConfig& noise) {
  const std::size_t n = circuit.num_qubits();
  NoiseProgram prog;
  prog.circuit = &circuit;
  prog.readout_flip.assign(n, 0.0);
  if (noise.enable_readout_error) {
    for (Qubit q = 0; q < n; ++q) prog.readout_flip[q] = 1.0 - calib.readout(q);
  }
  auto duration_of = [&](GateKind kind) {
    const auto it = calib.gate_durations.find(kind);
    if (it == calib.gate_durations.end()) {
      throw Error(ErrorKind::MissingDuration, "no duration for gate kind " + std::string(gate_name(kind)));
    }
    return it->second;
  };

  std::vector<bool> touched(n, false);
  std::vector<bool> measured(n, false);
  std::vector<double> op_time(n, 0.0);
  for (const auto& layer : asap_layers(circuit)) {
    double layer_time = 0.0;
    std::fill(op_time.begin(), op_time.end(), 0.0);
    std::vector<std::size_t> two_qubit_ops;
    for (std::size_t index : layer) {
      const GateOp& op = circuit.ops()[index];
      if (noise.enable_idle_decay) {
        const double d = duration_of(op.kind);
        layer_time = std::max(layer_time, d);
        for (Qubit q : op.qubits()) op_time[q] = d;
      }
      if (op.is_measure()) {
        measured[op.targets[0]] = true;
        continue;
      }
      prog.actions.push_back({ActionType::Gate, op.targets[0], op.targets[1], index, 0.0});
      for (Qubit q : op.qubits()) touched[q] = true;
      if (op.is_two_qubit()) two_qubit_ops.push_back(index);
      if (noise.enable_gate_depolarizing) {
        const double f = op.is_two_qubit() ? calib.pair_fidelity(op.targets[0], op.targets[1])
                                           : calib.single_fidelity(op.targets[0]);
        if (f < 1.0) {
          prog.actions.push_back({op.is_two_qubit() ? ActionType::Depolarize2 : ActionType::Depolarize1,
                                  op.targets[0], op.targets[1], index, 1.0 - f});
        }
      }
    }
    if (noise.enable_crosstalk && calib.crosstalk_strength > 0.0) {
      for (std::size_t i = 0; i < two_qubit_ops.size(); ++i) {
        for (std::size_t j = i + 1; j < two_qubit_ops.size(); ++j) {
          const GateOp& g = circuit.ops()[two_qubit_ops[i]];
          const GateOp& h = circuit.ops()[two_qubit_ops[j]];
          if (!pairs_adjacent(g, h, calib)) continue;
          for (const GateOp* op : {&g, &h}) {
            for (Qubit q : op->qubits()) {
              prog.actions.push_back({ActionType::Depolarize1, q, 0, two_qubit_ops[i], calib.crosstalk_strength});
            }
          }
        }
      }
    }
    if (noise.enable_idle_decay) {
      for (Qubit q = 0; q < n; ++q) {
        // Untouched qubits are still |0> and immune to both channels.
        if (!touched[q] || measured[q]) continue;
        const double idle = layer_time - op_time[q];
        if (idle <= 0.0) continue;
        const double gamma = -std::expm1(-idle / calib.t1(q));
        const double flip = -std::expm1(-idle / calib.t2(q)) / 2.0;
        if (gamma > 0.0) prog.actions.push_back({ActionType::Damp, q, 0, 0, gamma});
        if (flip > 0.0) prog.actions.push_back({ActionType::Dephase, q, 0, 0, flip});
      }
    }
  }
  return prog;
}

void apply_two_qubit_pauli(StateVector& psi, Qubit a, Qubit b, unsigned index) {
  psi.apply_pauli(a, index % 4);
  psi.apply_pauli(b, index / 4);
}

/// Error branch of a decision action. Consumes further draws for the
/// Pauli choice.
void apply_event(StateVector& psi, const Action& action, Rng& rng) {
  switch (action.type) {
    case ActionType::Depolarize1:
      psi.apply_pauli(action.a, 1 + static_cast<unsigned>(rng.below(3)));
      return;
    case ActionType::Depolarize2:
      apply_two_qubit_pauli(psi, action.a, action.b, 1 + static_cast<unsigned>(rng.below(15)));
      return;
    case ActionType::Damp:
      psi.damp_jump(action.a, psi.probability_one(action.a));
      return;
    case ActionType::Dephase:
      psi.apply_pauli(action.a, 3);
      return;
    case ActionType::Gate:
      return;
  }
}

/// No-error branch; returns the probability of the error branch as seen
/// from the state before the action (unused for Gate).
double apply_clean(StateVector& psi, const NoiseProgram& prog, const Action& action) {
  switch (action.type) {
    case ActionType::Gate:
      psi.apply(prog.circuit->ops()[action.op]);
      return 0.0;
    case ActionType::Damp: {
      const double p_one = psi.probability_one(action.a);
      psi.damp_no_jump(action.a, action.p, p_one);
      return action.p * p_one;
    }
    default:
      return action.p;
  }
}

/// One action of a trajectory from the current state, drawing its own
/// randomness.
void apply_sampled(StateVector& psi, const NoiseProgram& prog, const Action& action, Rng& rng) {
  if (action.type == ActionType::Gate) {
    psi.apply(prog.circuit->ops()[action.op]);
    return;
  }
  double threshold = action.p;
  double p_one = 0.0;
  if (action.type == ActionType::Damp) {
    p_one = psi.probability_one(action.a);
    threshold = action.p * p_one;
  }
  if (rng.uniform() < threshold) {
    apply_event(psi, action, rng);
  } else if (action.type == ActionType::Damp) {
    psi.damp_no_jump(action.a, action.p, p_one);
  }
}

void cumulative_of(const StateVector& psi, std::vector<double>& cumulative) {
  cumulative.resize(psi.dimension());
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    acc += std::norm(psi.amplitudes()[i]);
    cumulative[i] = acc;
  }
}

std::uint64_t sample_index(const std::vector<double>& cumulative, double u) {
  const double target = u * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  if (it != cumulative.end()) return static_cast<std::uint64_t>(it - cumulative.begin());
  // Rounding pushed the draw past the end: take the last populated state.
  std::size_t i = cumulative.size() - 1;
  while (i > 0 && cumulative[i] == cumulative[i - 1]) --i;
  return i;
}

std::uint64_t read_out(std::uint64_t index, const NoiseProgram& prog, Rng& rng) {
  for (std::size_t q = 0; q < prog.readout_flip.size(); ++q) {
    if (prog.readout_flip[q] > 0.0 && rng.uniform() < prog.readout_flip[q]) index ^= std::uint64_t{1} << q;
  }
  return index;
}

/// Clean (no-error) trajectory with checkpoints. A shot follows it until
/// its first error, then restores the clean state at that action and
/// continues on its own.
class CleanPath {
 public:
  static constexpr std::size_t kCheckpointBudget = std::size_t{1} << 22;  // amplitudes

  explicit CleanPath(const NoiseProgram& prog) : prog_(&prog) {
    const std::size_t n = prog.circuit->num_qubits();
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t steps = prog.actions.size();
    stride_ = std::max<std::size_t>(1, (steps * dim + kCheckpointBudget - 1) / kCheckpointBudget);
    StateVector psi(n);
    for (std::size_t k = 0; k < steps; ++k) {
      if (k % stride_ == 0) checkpoints_.push_back(psi);
      const double threshold = apply_clean(psi, prog, prog.actions[k]);
      if (prog.actions[k].type != ActionType::Gate) decisions_.push_back({k, threshold});
    }
    cumulative_of(psi, final_cumulative_);
  }

  struct Decision {
    std::size_t action;
    double threshold;
  };

  const std::vector<Decision>& decisions() const noexcept { return decisions_; }
  const std::vector<double>& final_cumulative() const noexcept { return final_cumulative_; }

  /// Clean state immediately before action k.
  void restore(std::size_t k, StateVector& psi) const {
    const std::size_t slot = k / stride_;
    psi = checkpoints_[slot];
    for (std::size_t j = slot * stride_; j < k; ++j) apply_clean(psi, *prog_, prog_->actions[j]);
  }

 private:
  const NoiseProgram* prog_;
  std::size_t stride_ = 1;
  std::vector<StateVector> checkpoints_;
  std::vector<Decision> decisions_;
  std::vector<double> final_cumulative_;
};

template <class ShotFn>
Distribution run_shots(std::size_t num_qubits, std::uint64_t shots, ShotFn&& shot) {
  if (shots == 0) throw Error(ErrorKind::InvalidArgument, "shots must be positive");
  const std::size_t dim = std::size_t{1} << num_qubits;
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::uint64_t>(worker_count(), shots));
  std::vector<std::vector<std::uint64_t>> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    auto& counts = partial[c];
    counts.assign(dim, 0);
    StateVector scratch(num_qubits);
    std::vector<double> cumulative;
    const std::uint64_t begin = shots * c / chunks;
    const std::uint64_t end = shots * (c + 1) / chunks;
    for (std::uint64_t s = begin; s < end; ++s) ++counts[shot(s, scratch, cumulative)];
  });
  std::vector<std::uint64_t> counts(dim, 0);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < dim; ++i) counts[i] += part[i];
  }
  return Distribution::from_counts(num_qubits, counts);
}

}  // namespace

Distribution sample_noisy(const Circuit& circuit, const CalibrationData& calib, const NoiseConfig& noise,
                          std::uint64_t shots) {
  check_simulable(circuit);
  const NoiseProgram prog = build_program(circuit, calib, noise);
  const CleanPath clean(prog);
  const auto& decisions = clean.decisions();
  return run_shots(circuit.num_qubits(), shots,
                   [&](std::uint64_t s, StateVector& psi, std::vector<double>& cumulative) {
                     Rng rng(derive_seed(noise.rng_seed, s));
                     std::size_t first_error = prog.actions.size();
                     for (const auto& d : decisions) {
                       if (rng.uniform() < d.threshold) {
                         first_error = d.action;
                         break;
                       }
                     }
                     if (first_error == prog.actions.size()) {
                       return read_out(sample_index(clean.final_cumulative(), rng.uniform()), prog, rng);
                     }
                     clean.restore(first_error, psi);
                     apply_event(psi, prog.actions[first_error], rng);
                     for (std::size_t k = first_error + 1; k < prog.actions.size(); ++k) {
                       apply_sampled(psi, prog, prog.actions[k], rng);
                     }
                     cumulative_of(psi, cumulative);
                     return read_out(sample_index(cumulative, rng.uniform()), prog, rng);
                   });
}

Distribution sample_noisy_reference(const Circuit& circuit, const CalibrationData& calib,
                                    const NoiseConfig& noise, std::uint64_t shots) {
  check_simulable(circuit);
  const NoiseProgram prog = build_program(circuit, calib, noise);
  return run_shots(circuit.num_qubits(), shots,
                   [&](std::uint64_t s, StateVector& psi, std::vector<double>& cumulative) {
                     Rng rng(derive_seed(noise.rng_seed, s));
                     psi = StateVector(circuit.num_qubits());
                     for (const auto& action : prog.actions) apply_sampled(psi, prog, action, rng);
                     cumulative_of(psi, cumulative);
                     return read_out(sample_index(cumulative, rng.uniform()), prog, rng);
                   });
}

}  // namespace fomlab
