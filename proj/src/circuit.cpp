#include "fomlab/circuit.hpp"

#include <algorithm>

#include "fomlab/error.hpp"

namespace fomlab {

namespace {

constexpr std::array<std::string_view, kGateKindCount> kGateNames = {
    "x", "y", "z", "h", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "cx", "cz", "swap", "measure",
};

}  // namespace

std::string_view gate_name(GateKind kind) noexcept {
  return kGateNames[static_cast<std::size_t>(kind)];
}

std::optional<GateKind> gate_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kGateKindCount; ++i) {
    if (kGateNames[i] == name) return kAllGateKinds[i];
  }
  return std::nullopt;
}

bool GateOp::touches(Qubit q) const noexcept {
  return targets[0] == q || (is_two_qubit() && targets[1] == q);
}

GateOp GateOp::one(GateKind kind, Qubit q, std::optional<double> param) {
  GateOp op;
  op.kind = kind;
  op.targets = {q, 0};
  op.param = param;
  return op;
}

GateOp GateOp::two(GateKind kind, Qubit a, Qubit b) {
  GateOp op;
  op.kind = kind;
  op.targets = {a, b};
  return op;
}

Circuit::Circuit(std::size_t num_qubits) : num_qubits_(num_qubits), measured_(num_qubits, false) {
  if (num_qubits == 0) {
    throw Error(ErrorKind::InvalidCircuit, "circuit needs at least one qubit");
  }
}

Circuit::Circuit(std::size_t num_qubits, std::vector<GateOp> ops) : Circuit(num_qubits) {
  ops_.reserve(ops.size());
  for (const auto& op : ops) append(op);
}

Circuit& Circuit::append(const GateOp& op) {
  const auto name = std::string(gate_name(op.kind));
  if (arity(op.kind) == 1 && op.targets[1] != 0) {
    throw Error(ErrorKind::InvalidCircuit, name + " takes one qubit");
  }
  if (is_rotation(op.kind) != op.param.has_value()) {
    throw Error(ErrorKind::InvalidCircuit,
                is_rotation(op.kind) ? name + " requires an angle" : name + " takes no angle");
  }
  for (Qubit q : op.qubits()) {
    if (q >= num_qubits_) {
      throw Error(ErrorKind::QubitOutOfRange, name + ": qubit " + std::to_string(q) +
                                                  " out of range for " +
                                                  std::to_string(num_qubits_) + " qubits");
    }
    if (measured_[q]) {
      throw Error(ErrorKind::InvalidCircuit,
                  name + ": qubit " + std::to_string(q) + " was already measured");
    }
  }
  if (op.is_two_qubit() && op.targets[0] == op.targets[1]) {
    throw Error(ErrorKind::InvalidCircuit, name + " needs two distinct qubits");
  }
  ops_.push_back(op);
  if (op.is_measure()) measured_[op.targets[0]] = true;
  return *this;
}

Circuit& Circuit::measure_all() {
  for (Qubit q = 0; q < num_qubits_; ++q) {
    if (!measured_[q]) measure(q);
  }
  return *this;
}

std::size_t Circuit::measured_count() const noexcept {
  return static_cast<std::size_t>(std::count(measured_.begin(), measured_.end(), true));
}

std::vector<std::size_t> asap_levels(const Circuit& circuit) {
  std::vector<std::size_t> next_free(circuit.num_qubits(), 0);
  std::vector<std::size_t> levels;
  levels.reserve(circuit.size());
  for (const auto& op : circuit.ops()) {
    std::size_t level = 0;
    for (Qubit q : op.qubits()) level = std::max(level, next_free[q]);
    for (Qubit q : op.qubits()) next_free[q] = level + 1;
    levels.push_back(level);
  }
  return levels;
}

std::vector<std::vector<std::size_t>> asap_layers(const Circuit& circuit) {
  const auto levels = asap_levels(circuit);
  std::vector<std::vector<std::size_t>> layers;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] >= layers.size()) layers.resize(levels[i] + 1);
    layers[levels[i]].push_back(i);
  }
  return layers;
}

std::size_t depth(const Circuit& circuit) {
  const auto levels = asap_levels(circuit);
  return levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end()) + 1;
}

GateCounts gate_counts(const Circuit& circuit) {
  GateCounts counts;
  for (const auto& op : circuit.ops()) {
    ++counts.by_kind[static_cast<std::size_t>(op.kind)];
    ++counts.total;
    if (op.is_measure()) {
      ++counts.measurements;
    } else if (op.is_two_qubit()) {
      ++counts.two_qubit;
    } else {
      ++counts.single_qubit;
    }
  }
  return counts;
}

Schedule schedule_asap(const Circuit& circuit, const Durations& durations) {
  auto duration_of = [&](GateKind kind) {
    const auto it = durations.find(kind);
    if (it == durations.end()) {
      throw Error(ErrorKind::MissingDuration,
                  "no duration for gate kind " + std::string(gate_name(kind)));
    }
    return it->second;
  };

  Schedule schedule;
  schedule.layers = asap_layers(circuit);
  schedule.busy_time.assign(circuit.num_qubits(), 0.0);
  double clock = 0.0;
  for (const auto& layer : schedule.layers) {
    double longest = 0.0;
    for (std::size_t index : layer) {
      const auto& op = circuit.ops()[index];
      const double d = duration_of(op.kind);
      longest = std::max(longest, d);
      for (Qubit q : op.qubits()) schedule.busy_time[q] += d;
    }
    schedule.layer_start_times.push_back(clock);
    schedule.layer_durations.push_back(longest);
    clock += longest;
  }
  schedule.total_time = clock;
  schedule.idle_time.resize(circuit.num_qubits());
  for (std::size_t q = 0; q < circuit.num_qubits(); ++q) {
    schedule.idle_time[q] = clock - schedule.busy_time[q];
  }
  return schedule;
}

InteractionDegrees interaction_degrees(const Circuit& circuit) {
  const std::size_t n = circuit.num_qubits();
  std::vector<std::vector<bool>> undirected(n, std::vector<bool>(n, false));
  std::vector<std::vector<bool>> directed(n, std::vector<bool>(n, false));
  for (const auto& op : circuit.ops()) {
    if (!op.is_two_qubit()) continue;
    const Qubit a = op.targets[0];
    const Qubit b = op.targets[1];
    undirected[a][b] = undirected[b][a] = true;
    directed[a][b] = true;
  }
  InteractionDegrees degrees{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0),
                             std::vector<std::size_t>(n, 0)};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (undirected[a][b]) ++degrees.undirected[a];
      if (directed[a][b]) {
        ++degrees.out_degree[a];
        ++degrees.in_degree[b];
      }
    }
  }
  return degrees;
}

}  // namespace fomlab
