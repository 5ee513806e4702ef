#include <gtest/gtest.h>

#include <set>

#include "fomlab/error.hpp"
#include "fomlab/features.hpp"
#include "fomlab/random.hpp"
#include "oracles.hpp"

using namespace fomlab;

namespace {

std::size_t index_of(std::string_view name) {
  const auto& s = feature_schema();
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == name) return i;
  ADD_FAILURE() << "no feature " << name;
  return 0;
}

// Longest chain through each op via explicit predecessor lists.
double critical_oracle(const Circuit& c) {
  const auto& ops = c.ops();
  std::vector<std::vector<std::size_t>> preds(ops.size()), succs(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (auto q : ops[i].qubits())
      for (std::size_t j = i; j-- > 0;)
        if (ops[j].touches(q)) {
          preds[i].push_back(j);
          succs[j].push_back(i);
          break;
        }
  std::vector<std::size_t> up(ops.size()), down(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    up[i] = 1;
    for (auto p : preds[i]) up[i] = std::max(up[i], up[p] + 1);
  }
  std::size_t longest = 0;
  for (std::size_t i = ops.size(); i-- > 0;) {
    down[i] = 1;
    for (auto s : succs[i]) down[i] = std::max(down[i], down[s] + 1);
    longest = std::max(longest, up[i]);
  }
  std::size_t on = 0, two = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!ops[i].is_two_qubit()) continue;
    ++two;
    if (up[i] + down[i] - 1 == longest) ++on;
  }
  return two == 0 ? 0.0 : static_cast<double>(on) / static_cast<double>(two);
}

double liveness_oracle(const Circuit& c) {
  std::vector<std::size_t> frontier(c.num_qubits(), 0);
  std::set<std::pair<std::size_t, std::size_t>> active;
  std::size_t layers = 0;
  for (const auto& op : c.ops()) {
    std::size_t l = 0;
    for (auto q : op.qubits()) l = std::max(l, frontier[q]);
    for (auto q : op.qubits()) {
      frontier[q] = l + 1;
      active.insert({q, l});
    }
    layers = std::max(layers, l + 1);
  }
  return static_cast<double>(active.size()) / static_cast<double>(c.num_qubits() * layers);
}

}  // namespace

TEST(Schema, ThirtyNamedEntries) {
  const auto& s = feature_schema();
  EXPECT_EQ(s.size(), 30u);
  EXPECT_EQ(s[feature::kNumQubits], "num_qubits");
  EXPECT_EQ(s[feature::kDepth], "depth");
  EXPECT_EQ(s[feature::kLiveness], "liveness");
  EXPECT_EQ(s[feature::kParallelism], "parallelism");
  EXPECT_EQ(s[29], "entanglement_ratio");
  EXPECT_EQ(std::set<std::string_view>(s.begin(), s.end()).size(), 30u);
  EXPECT_FALSE(feature_schema_hash().empty());
  EXPECT_NE(feature_schema_json().find("\"program_communication_directed\""), std::string::npos);
}

TEST(Liveness, Examples) {
  EXPECT_DOUBLE_EQ(liveness(Circuit(1).h(0).h(0)), 1.0);
  EXPECT_DOUBLE_EQ(liveness(Circuit(2).h(0).h(0)), 0.5);
  EXPECT_NEAR(liveness(Circuit(3).h(0).cx(0, 1).cx(1, 2)), 5.0 / 9.0, 1e-15);
  try {
    liveness(Circuit(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UndefinedOnEmpty);
  }
}

TEST(Parallelism, Examples) {
  EXPECT_DOUBLE_EQ(parallelism(Circuit(2).h(0).h(1)), 1.0);
  EXPECT_DOUBLE_EQ(parallelism(Circuit(3).h(0).cx(0, 1).cx(1, 2)), 0.0);
  EXPECT_DOUBLE_EQ(parallelism(Circuit(1).h(0).x(0).rz(0, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(parallelism(Circuit(3)), 0.0);
}

TEST(ProgramCommunication, Examples) {
  EXPECT_NEAR(program_communication(Circuit(3).cx(0, 1).cx(1, 2), false), 2.0 / 3.0, 1e-15);
  Circuit full(3);
  for (Qubit a = 0; a < 3; ++a)
    for (Qubit b = 0; b < 3; ++b)
      if (a != b) full.cx(a, b);
  EXPECT_DOUBLE_EQ(program_communication(full, true), 1.0);
  EXPECT_DOUBLE_EQ(program_communication(Circuit(3).h(0), false), 0.0);
  EXPECT_DOUBLE_EQ(program_communication(Circuit(3).h(0), true), 0.0);
  EXPECT_DOUBLE_EQ(program_communication(Circuit(1).h(0), true), 0.0);
}

TEST(CriticalDepth, Examples) {
  EXPECT_DOUBLE_EQ(critical_depth_ratio(Circuit(3).h(0).cx(0, 1).cx(1, 2)), 1.0);
  EXPECT_DOUBLE_EQ(critical_depth_ratio(Circuit(2).h(0).h(1)), 0.0);
  EXPECT_NEAR(critical_depth_ratio(Circuit(4).cx(0, 1).cx(2, 3).cx(0, 1)), 2.0 / 3.0, 1e-15);
}

TEST(Extract, EmptyOneQubit) {
  const auto v = extract_features(Circuit(1));
  for (std::size_t i = 0; i < kFeatureCount; ++i) EXPECT_EQ(v[i], i == feature::kNumQubits ? 1.0 : 0.0) << i;
}

TEST(Extract, BellWithMeasurement) {
  const auto c = Circuit(2).h(0).cx(0, 1).measure(0).measure(1);
  const auto v = extract_features(c);
  EXPECT_EQ(v[index_of("num_qubits")], 2);
  EXPECT_EQ(v[index_of("depth")], 3);
  EXPECT_EQ(v[index_of("total_ops")], 4);
  EXPECT_EQ(v[index_of("single_qubit_gates")], 1);
  EXPECT_EQ(v[index_of("two_qubit_gates")], 1);
  EXPECT_EQ(v[index_of("measurements")], 2);
  EXPECT_EQ(v[index_of("count_h")], 1);
  EXPECT_EQ(v[index_of("count_cx")], 1);
  EXPECT_DOUBLE_EQ(v[index_of("single_qubit_ratio")], 0.25);
  EXPECT_DOUBLE_EQ(v[index_of("two_qubit_ratio")], 0.25);
  EXPECT_DOUBLE_EQ(v[index_of("measurement_ratio")], 0.5);
  EXPECT_DOUBLE_EQ(v[index_of("entanglement_ratio")], 0.5);
  EXPECT_DOUBLE_EQ(v[index_of("gate_density")], 4.0 / 6.0);
  EXPECT_DOUBLE_EQ(v[index_of("liveness")], 5.0 / 6.0);
}

TEST(Extract, SizeIndependentOfDepth) {
  Circuit c(2);
  c.h(0).cx(0, 1);
  for (int i = 0; i < 50; ++i) c.h(0);
  EXPECT_EQ(extract_features(c).values.size(), 30u);
}

TEST(Properties, RandomCircuits) {
  Rng rng(1234);
  const std::set<std::size_t> ratio_entries = {20, 21, 22, 23, 24, 25, 26, 27, 28, 29};
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + rng.below(7);
    const std::size_t ops = trial < 20 ? 1 + rng.below(1000) : rng.below(60);
    const auto c = oracle::random_circuit(n, ops, rng, rng.below(2) == 0, false);
    const auto v = extract_features(c);
    ASSERT_EQ(v.values.size(), 30u);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      EXPECT_TRUE(std::isfinite(v[i]));
      if (ratio_entries.contains(i)) {
        EXPECT_GE(v[i], 0.0);
        EXPECT_LE(v[i], 1.0);
      } else {
        EXPECT_EQ(v[i], std::floor(v[i]));
        EXPECT_GE(v[i], 0.0);
      }
    }
    EXPECT_EQ(extract_features(c), v);
    if (c.empty()) continue;
    EXPECT_NEAR(v[20] + v[21] + v[22], 1.0, 1e-12);
    const double live = liveness(c);
    EXPECT_NEAR(live, liveness_oracle(c), 1e-12);
    EXPECT_GT(live, 0.0);
    EXPECT_NEAR(critical_depth_ratio(c), critical_oracle(c), 1e-12);
  }
}

TEST(Properties, LivenessOneIffEverySlotBusy) {
  EXPECT_DOUBLE_EQ(liveness(Circuit(3).h(0).h(1).h(2).x(0).x(1).x(2)), 1.0);
  EXPECT_DOUBLE_EQ(liveness(Circuit(2).cx(0, 1).cx(1, 0)), 1.0);
  EXPECT_LT(liveness(Circuit(3).h(0).h(1).h(2).x(0).x(1)), 1.0);
}

TEST(Properties, BusiestQubitAppendNeverRaisesParallelism) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    auto c = oracle::random_circuit(n, 1 + rng.below(30), rng, false, false);
    if (c.empty()) continue;
    // The busiest qubit is one that participates in the last layer of a
    // longest chain; appending there always opens a new layer.
    const auto levels = asap_levels(c);
    const std::size_t d = depth(c);
    Qubit busiest = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
      if (levels[i] + 1 == d) busiest = c.ops()[i].targets[0];
    const double before = parallelism(c);
    c.h(busiest);
    EXPECT_LE(parallelism(c), before + 1e-15);
  }
}
