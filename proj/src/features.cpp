#include "fomlab/features.hpp"

#include <algorithm>
#include <cstdio>

#include "fomlab/error.hpp"
#include "fomlab/random.hpp"

namespace fomlab {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kSchema = {
    "num_qubits",
    "depth",
    "total_ops",
    "single_qubit_gates",
    "two_qubit_gates",
    "measurements",
    "count_x",
    "count_y",
    "count_z",
    "count_h",
    "count_s",
    "count_sdg",
    "count_t",
    "count_tdg",
    "count_rx",
    "count_ry",
    "count_rz",
    "count_cx",
    "count_cz",
    "count_swap",
    "single_qubit_ratio",
    "two_qubit_ratio",
    "measurement_ratio",
    "gate_density",
    "liveness",
    "parallelism",
    "program_communication_undirected",
    "program_communication_directed",
    "critical_depth_ratio",
    "entanglement_ratio",
};

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_schema() { return kSchema; }

std::string feature_schema_hash() {
  std::string joined;
  for (auto name : kSchema) {
    joined += name;
    joined += '\n';
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(joined)));
  return hex;
}

std::string feature_schema_json() {
  std::string out = "[";
  for (std::size_t i = 0; i < kSchema.size(); ++i) {
    if (i > 0) out += ", ";
    out += '"';
    out += kSchema[i];
    out += '"';
  }
  return out + "]";
}

double liveness(const Circuit& circuit) {
  const std::size_t d = depth(circuit);
  if (d == 0) throw Error(ErrorKind::UndefinedOnEmpty, "liveness is undefined for an empty circuit");
  // One op per qubit per layer, so active slots = sum of op arities.
  std::size_t active = 0;
  for (const auto& op : circuit.ops()) active += arity(op.kind);
  return static_cast<double>(active) / static_cast<double>(circuit.num_qubits() * d);
}

double parallelism(const Circuit& circuit) {
  const std::size_t n = circuit.num_qubits();
  const std::size_t d = depth(circuit);
  if (n < 2 || d == 0) return 0.0;
  const double per_layer = static_cast<double>(circuit.size()) / static_cast<double>(d);
  return std::clamp((per_layer - 1.0) / static_cast<double>(n - 1), 0.0, 1.0);
}

double program_communication(const Circuit& circuit, bool directed) {
  const std::size_t n = circuit.num_qubits();
  if (n < 2) return 0.0;
  const auto degrees = interaction_degrees(circuit);
  double sum = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    sum += directed ? static_cast<double>(degrees.in_degree[q] + degrees.out_degree[q])
                    : static_cast<double>(degrees.undirected[q]);
  }
  const double average = sum / static_cast<double>(n);
  const double max_degree = static_cast<double>(n - 1) * (directed ? 2.0 : 1.0);
  return average / max_degree;
}

double critical_depth_ratio(const Circuit& circuit) {
  const auto& ops = circuit.ops();
  const std::size_t two_qubit =
      static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](const GateOp& op) {
        return op.is_two_qubit();
      }));
  if (two_qubit == 0) return 0.0;

  // Longest chain ending at / starting from each op along qubit wires.
  const auto forward = asap_levels(circuit);
  std::vector<std::size_t> backward(ops.size(), 0);
  std::vector<std::size_t> next_free(circuit.num_qubits(), 0);
  for (std::size_t i = ops.size(); i-- > 0;) {
    std::size_t level = 0;
    for (Qubit q : ops[i].qubits()) level = std::max(level, next_free[q]);
    for (Qubit q : ops[i].qubits()) next_free[q] = level + 1;
    backward[i] = level;
  }
  const std::size_t d = depth(circuit);
  std::size_t critical = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].is_two_qubit() && forward[i] + backward[i] + 1 == d) ++critical;
  }
  return static_cast<double>(critical) / static_cast<double>(two_qubit);
}

FeatureVector extract_features(const Circuit& circuit) {
  const auto counts = gate_counts(circuit);
  const std::size_t n = circuit.num_qubits();
  const std::size_t d = depth(circuit);
  const auto total = static_cast<double>(counts.total);
  const auto gates = static_cast<double>(counts.single_qubit + counts.two_qubit);

  FeatureVector f;
  std::size_t i = 0;
  f[i++] = static_cast<double>(n);
  f[i++] = static_cast<double>(d);
  f[i++] = total;
  f[i++] = static_cast<double>(counts.single_qubit);
  f[i++] = static_cast<double>(counts.two_qubit);
  f[i++] = static_cast<double>(counts.measurements);
  for (GateKind kind : kAllGateKinds) {
    if (kind == GateKind::Measure) continue;
    f[i++] = static_cast<double>(counts[kind]);
  }
  f[i++] = ratio(static_cast<double>(counts.single_qubit), total);
  f[i++] = ratio(static_cast<double>(counts.two_qubit), total);
  f[i++] = ratio(static_cast<double>(counts.measurements), total);
  f[i++] = d == 0 ? 0.0 : total / static_cast<double>(n * d);
  f[i++] = d == 0 ? 0.0 : liveness(circuit);
  f[i++] = parallelism(circuit);
  f[i++] = program_communication(circuit, false);
  f[i++] = program_communication(circuit, true);
  f[i++] = critical_depth_ratio(circuit);
  f[i++] = ratio(static_cast<double>(counts.two_qubit), gates);
  return f;
}

}  // namespace fomlab
