#include "fomlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fomlab/error.hpp"

namespace fomlab {

double hellinger(const Distribution& p, const Distribution& q) {
  if (p.width() != q.width()) {
    throw Error(ErrorKind::WidthMismatch, "distributions over " + std::to_string(p.width()) +
                                              " and " + std::to_string(q.width()) + " bits");
  }
  // Merge-walk of the two sorted key sets.
  double sum = 0.0;
  auto a = p.probs().begin();
  auto b = q.probs().begin();
  while (a != p.probs().end() || b != q.probs().end()) {
    double pa = 0.0;
    double qb = 0.0;
    if (b == q.probs().end() || (a != p.probs().end() && a->first < b->first)) {
      pa = (a++)->second;
    } else if (a == p.probs().end() || b->first < a->first) {
      qb = (b++)->second;
    } else {
      pa = (a++)->second;
      qb = (b++)->second;
    }
    const double diff = std::sqrt(pa) - std::sqrt(qb);
    sum += diff * diff;
  }
  return std::clamp(std::sqrt(sum) / std::numbers::sqrt2, 0.0, 1.0);
}

double pearson(std::span<const double> d, std::span<const double> y) {
  if (d.size() != y.size()) throw Error(ErrorKind::InvalidArgument, "series lengths differ");
  const std::size_t m = d.size();
  if (m < 2) throw Error(ErrorKind::TooFewSamples, "pearson needs at least two samples");
  double mean_d = 0.0;
  double mean_y = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isfinite(d[j]) || !std::isfinite(y[j])) {
      throw Error(ErrorKind::InvalidArgument, "non-finite value in series");
    }
    mean_d += d[j];
    mean_y += y[j];
  }
  mean_d /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double cross = 0.0;
  double var_d = 0.0;
  double var_y = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double dd = d[j] - mean_d;
    const double dy = y[j] - mean_y;
    cross += dd * dy;
    var_d += dd * dd;
    var_y += dy * dy;
  }
  const bool constant_d = std::all_of(d.begin(), d.end(), [&](double v) { return v == d[0]; });
  const bool constant_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  if (constant_d || constant_y || var_d == 0.0 || var_y == 0.0) {
    throw Error(ErrorKind::ZeroVariance, "pearson is undefined for a constant series");
  }
  return std::clamp(cross / std::sqrt(var_d * var_y), -1.0, 1.0);
}

double pearson(const SampleSeries& series) {
  std::vector<double> d;
  std::vector<double> y;
  d.reserve(series.pairs.size());
  y.reserve(series.pairs.size());
  for (const auto& [dj, yj] : series.pairs) {
    d.push_back(dj);
    y.push_back(yj);
  }
  return pearson(d, y);
}

}  // namespace fomlab
