#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fomlab {

using Qubit = std::uint32_t;

enum class GateKind : std::uint8_t {
  X, Y, Z, H, S, Sdg, T, Tdg, RX, RY, RZ, CX, CZ, Swap, Measure,
};

inline constexpr std::size_t kGateKindCount = 15;

inline constexpr std::array<GateKind, kGateKindCount> kAllGateKinds = {
    GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::H,  GateKind::S,
    GateKind::Sdg, GateKind::T, GateKind::Tdg, GateKind::RX, GateKind::RY,
    GateKind::RZ, GateKind::CX, GateKind::CZ, GateKind::Swap, GateKind::Measure,
};

std::string_view gate_name(GateKind kind) noexcept;
std::optional<GateKind> gate_from_name(std::string_view name) noexcept;

constexpr std::size_t arity(GateKind kind) noexcept {
  return (kind == GateKind::CX || kind == GateKind::CZ || kind == GateKind::Swap) ? 2 : 1;
}

constexpr bool is_rotation(GateKind kind) noexcept {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

struct GateOp {
  GateKind kind = GateKind::X;
  std::array<Qubit, 2> targets{};  // second entry is unused for one-qubit kinds
  std::optional<double> param;     // rotation angle in radians

  std::span<const Qubit> qubits() const noexcept { return {targets.data(), arity(kind)}; }
  bool is_two_qubit() const noexcept { return arity(kind) == 2; }
  bool is_measure() const noexcept { return kind == GateKind::Measure; }
  bool touches(Qubit q) const noexcept;

  static GateOp one(GateKind kind, Qubit q, std::optional<double> param = std::nullopt);
  static GateOp two(GateKind kind, Qubit a, Qubit b);

  bool operator==(const GateOp&) const = default;
};

/// Gate-level program. Every mutation re-checks the invariants: qubit
/// indices in range, distinct operands, arity/param consistency, and no
/// operation after a qubit's measurement.
class Circuit {
 public:
  explicit Circuit(std::size_t num_qubits);
  Circuit(std::size_t num_qubits, std::vector<GateOp> ops);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  const std::vector<GateOp>& ops() const noexcept { return ops_; }
  std::size_t size() const noexcept { return ops_.size(); }
  bool empty() const noexcept { return ops_.empty(); }

  Circuit& append(const GateOp& op);
  Circuit& x(Qubit q) { return append(GateOp::one(GateKind::X, q)); }
  Circuit& h(Qubit q) { return append(GateOp::one(GateKind::H, q)); }
  Circuit& t(Qubit q) { return append(GateOp::one(GateKind::T, q)); }
  Circuit& rx(Qubit q, double theta) { return append(GateOp::one(GateKind::RX, q, theta)); }
  Circuit& ry(Qubit q, double theta) { return append(GateOp::one(GateKind::RY, q, theta)); }
  Circuit& rz(Qubit q, double theta) { return append(GateOp::one(GateKind::RZ, q, theta)); }
  Circuit& cx(Qubit a, Qubit b) { return append(GateOp::two(GateKind::CX, a, b)); }
  Circuit& cz(Qubit a, Qubit b) { return append(GateOp::two(GateKind::CZ, a, b)); }
  Circuit& swap(Qubit a, Qubit b) { return append(GateOp::two(GateKind::Swap, a, b)); }
  Circuit& measure(Qubit q) { return append(GateOp::one(GateKind::Measure, q)); }
  Circuit& measure_all();

  bool is_measured(Qubit q) const { return measured_.at(q); }
  std::size_t measured_count() const noexcept;

  bool operator==(const Circuit& other) const {
    return num_qubits_ == other.num_qubits_ && ops_ == other.ops_;
  }

 private:
  std::size_t num_qubits_;
  std::vector<GateOp> ops_;
  std::vector<bool> measured_;
};

/// OpenQASM 2.0 subset: one qreg, at most one creg, the gate vocabulary
/// above and `measure q[i] -> c[j];`. Throws Error on anything else.
Circuit parse_qasm(std::string_view text);
Circuit load_qasm(const std::string& path);
std::string emit_qasm(const Circuit& circuit);

/// ASAP layer (0-based) of every op; an op sits one layer after the latest
/// op sharing a qubit with it.
std::vector<std::size_t> asap_levels(const Circuit& circuit);

/// Op indices grouped by ASAP layer.
std::vector<std::vector<std::size_t>> asap_layers(const Circuit& circuit);

std::size_t depth(const Circuit& circuit);

struct GateCounts {
  std::array<std::size_t, kGateKindCount> by_kind{};
  std::size_t total = 0;
  std::size_t single_qubit = 0;
  std::size_t two_qubit = 0;
  std::size_t measurements = 0;

  std::size_t operator[](GateKind kind) const { return by_kind[static_cast<std::size_t>(kind)]; }
};

GateCounts gate_counts(const Circuit& circuit);

using Durations = std::map<GateKind, double>;

struct Schedule {
  std::vector<std::vector<std::size_t>> layers;
  std::vector<double> layer_start_times;  // ns
  std::vector<double> layer_durations;    // ns
  double total_time = 0.0;                // ns
  std::vector<double> idle_time;          // per qubit, ns
  std::vector<double> busy_time;          // per qubit, ns
};

/// Greedy ASAP schedule; each layer lasts as long as its slowest op.
Schedule schedule_asap(const Circuit& circuit, const Durations& durations);

struct InteractionDegrees {
  std::vector<std::size_t> undirected;
  std::vector<std::size_t> in_degree;
  std::vector<std::size_t> out_degree;
};

/// Degrees of the deduplicated interaction graphs. Directed edges follow
/// operand order for every two-qubit kind.
InteractionDegrees interaction_degrees(const Circuit& circuit);

}  // namespace fomlab
