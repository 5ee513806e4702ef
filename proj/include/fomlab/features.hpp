#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "fomlab/circuit.hpp"

namespace fomlab {

inline constexpr std::size_t kFeatureCount = 30;

/// Column names of the feature vector, in emission order.
const std::array<std::string_view, kFeatureCount>& feature_schema();

/// Checksum over the schema names; stored with trained models.
std::string feature_schema_hash();

/// Schema as a JSON array of names.
std::string feature_schema_json();

/// Fixed-size circuit encoding. The size never depends on circuit depth.
struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  bool operator==(const FeatureVector&) const = default;
};

/// Schema positions for the entries other modules refer to by name.
namespace feature {
inline constexpr std::size_t kNumQubits = 0;
inline constexpr std::size_t kDepth = 1;
inline constexpr std::size_t kTotalOps = 2;
inline constexpr std::size_t kTwoQubitGates = 4;
inline constexpr std::size_t kLiveness = 24;
inline constexpr std::size_t kParallelism = 25;
}  // namespace feature

/// Fraction of (qubit, layer) slots that hold an operation.
/// Throws ErrorKind::UndefinedOnEmpty for a circuit without ops.
double liveness(const Circuit& circuit);

double parallelism(const Circuit& circuit);

/// Average interaction-graph degree over its maximum. The directed form
/// uses in+out degree against 2(N-1).
double program_communication(const Circuit& circuit, bool directed);

/// Share of two-qubit gates that lie on some longest dependency path.
double critical_depth_ratio(const Circuit& circuit);

FeatureVector extract_features(const Circuit& circuit);

}  // namespace fomlab
