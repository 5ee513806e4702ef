#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fomlab/distribution.hpp"
#include "fomlab/error.hpp"
#include "fomlab/random.hpp"
#include "fomlab/stats.hpp"
#include "oracles.hpp"

using namespace fomlab;

namespace {

Distribution random_distribution(std::size_t width, Rng& rng, double sparsity = 0.5) {
  std::map<std::string, double> probs;
  double total = 0.0;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << width); ++i) {
    if (rng.uniform() < sparsity) continue;
    const double w = rng.uniform();
    probs[bitstring(i, width)] = w;
    total += w;
  }
  if (probs.empty()) probs[bitstring(0, width)] = total = 1.0;
  for (auto& [k, v] : probs) v /= total;
  return Distribution(width, probs);
}

ErrorKind pearson_error(std::vector<double> d, std::vector<double> y) {
  try {
    pearson(d, y);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

}  // namespace

TEST(Hellinger, Examples) {
  const Distribution p(1, {{"0", 0.25}, {"1", 0.75}});
  EXPECT_EQ(hellinger(p, p), 0.0);
  EXPECT_DOUBLE_EQ(hellinger(Distribution(1, {{"0", 1.0}}), Distribution(1, {{"1", 1.0}})), 1.0);
  EXPECT_NEAR(hellinger(Distribution(1, {{"0", 0.5}, {"1", 0.5}}), Distribution(1, {{"0", 1.0}})), 0.541196, 1e-6);
}

TEST(Hellinger, WidthMismatch) {
  try {
    hellinger(Distribution(1, {{"0", 1.0}}), Distribution(2, {{"00", 1.0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WidthMismatch);
  }
}

TEST(Hellinger, MatchesOracleOnRandomInputs) {
  Rng rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t w = 1 + rng.below(6);
    const auto p = random_distribution(w, rng, rng.uniform());
    const auto q = random_distribution(w, rng, rng.uniform());
    const double h = hellinger(p, q);
    EXPECT_NEAR(h, oracle::hellinger(p.probs(), q.probs()), 1e-9);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
    EXPECT_EQ(h, hellinger(q, p));
  }
}

TEST(Hellinger, MetricAxiomsAndRelabeling) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t w = 1 + rng.below(4);
    const auto p = random_distribution(w, rng), q = random_distribution(w, rng), r = random_distribution(w, rng);
    EXPECT_LE(hellinger(p, r), hellinger(p, q) + hellinger(q, r) + 1e-12);
    EXPECT_EQ(hellinger(p, p), 0.0);

    // Relabel outcomes by xor with a fixed mask in both arguments.
    const std::uint64_t mask = rng.below(std::uint64_t{1} << w);
    auto relabel = [&](const Distribution& d) {
      std::map<std::string, double> out;
      for (const auto& [k, v] : d.probs()) {
        std::string flipped = k;
        for (std::size_t i = 0; i < w; ++i)
          if ((mask >> i) & 1) flipped[w - 1 - i] = flipped[w - 1 - i] == '0' ? '1' : '0';
        out[flipped] = v;
      }
      return Distribution(w, out);
    };
    EXPECT_NEAR(hellinger(relabel(p), relabel(q)), hellinger(p, q), 1e-12);
  }
}

TEST(Pearson, Examples) {
  const std::vector<double> d = {0.1, 0.3, 0.2, 0.9, 0.5};
  EXPECT_NEAR(pearson(d, d), 1.0, 1e-15);
  std::vector<double> y;
  for (double v : d) y.push_back(-2 * v + 3);
  EXPECT_NEAR(pearson(d, y), -1.0, 1e-15);
  EXPECT_NEAR(pearson(std::vector<double>{0.1, 0.2, 0.4, 0.5}, std::vector<double>{5, 9, 10, 20}), 0.887527, 1e-6);
  SampleSeries series{{{0.1, 5}, {0.2, 9}, {0.4, 10}, {0.5, 20}}};
  EXPECT_NEAR(pearson(series), oracle::pearson({0.1, 0.2, 0.4, 0.5}, {5, 9, 10, 20}), 1e-12);
}

TEST(Pearson, Errors) {
  EXPECT_EQ(pearson_error({0.3, 0.3, 0.3}, {1, 2, 3}), ErrorKind::ZeroVariance);
  EXPECT_EQ(pearson_error({1, 2, 3}, {0.1, 0.1, 0.1}), ErrorKind::ZeroVariance);
  // Mean rounding must not turn a constant series into tiny variance.
  EXPECT_EQ(pearson_error({0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}, {1, 2, 3, 4, 5, 6, 7}), ErrorKind::ZeroVariance);
  EXPECT_EQ(pearson_error({1}, {2}), ErrorKind::TooFewSamples);
  EXPECT_EQ(pearson_error({1, NAN}, {2, 3}), ErrorKind::InvalidArgument);
  EXPECT_EQ(pearson_error({1, 2}, {2, 3, 4}), ErrorKind::InvalidArgument);
}

TEST(Pearson, MatchesOracleOnRandomInputs) {
  Rng rng(55);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = 2 + rng.below(60);
    std::vector<double> d(m), y(m);
    const double slope = rng.uniform() * 4 - 2;
    for (std::size_t i = 0; i < m; ++i) {
      d[i] = rng.uniform();
      y[i] = slope * d[i] + (rng.uniform() - 0.5) * rng.uniform() * 3;
    }
    const double r = pearson(d, y);
    EXPECT_NEAR(r, oracle::pearson(d, y), 1e-9);
    EXPECT_LE(std::abs(r), 1.0);

    const double a = 0.1 + rng.uniform() * 10, b = rng.uniform() * 100 - 50;
    std::vector<double> ya(m), yn(m);
    for (std::size_t i = 0; i < m; ++i) {
      ya[i] = a * y[i] + b;
      yn[i] = -a * y[i] + b;
    }
    EXPECT_NEAR(pearson(d, ya), r, 1e-9);
    EXPECT_NEAR(pearson(d, yn), -r, 1e-9);
  }
}

TEST(Distribution, ValidationAndJson) {
  EXPECT_THROW(Distribution(2, {{"0", 1.0}}), Error);
  EXPECT_THROW(Distribution(1, {{"2", 1.0}}), Error);
  EXPECT_THROW(Distribution(1, {{"0", -0.5}, {"1", 1.5}}), Error);
  const Distribution d(3, {{"101", 0.25}, {"000", 0.75}});
  EXPECT_EQ(d["111"], 0.0);
  EXPECT_EQ(Distribution::from_json(d.to_json()).probs(), d.probs());
  const std::vector<std::uint64_t> counts = {3, 0, 1, 0};
  const auto h = Distribution::from_counts(2, counts);
  EXPECT_EQ(h["00"], 0.75);
  EXPECT_EQ(h["10"], 0.25);
  EXPECT_EQ(bitstring(1, 3), "001");
}
