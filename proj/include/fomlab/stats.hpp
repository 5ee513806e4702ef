#pragma once

#include <span>
#include <utility>
#include <vector>

#include "fomlab/distribution.hpp"

namespace fomlab {

/// Hellinger distance over the union of outcome keys (absent keys are 0).
/// Throws ErrorKind::WidthMismatch when the bitstring widths differ.
double hellinger(const Distribution& p, const Distribution& q);

/// (distance, figure-of-merit) pairs over a set of circuits.
struct SampleSeries {
  std::vector<std::pair<double, double>> pairs;
};

/// Pearson correlation coefficient; throws ErrorKind::ZeroVariance when
/// either coordinate is constant and ErrorKind::TooFewSamples below 2 pairs.
double pearson(std::span<const double> d, std::span<const double> y);
double pearson(const SampleSeries& series);

}  // namespace fomlab
