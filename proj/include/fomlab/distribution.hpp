#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>

namespace fomlab {

/// Probability map over measured bitstrings. Keys have exactly `width`
/// characters; the rightmost character is qubit 0.
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::size_t width, std::map<std::string, double> probs);

  /// Normalised histogram from counts indexed by basis state.
  static Distribution from_counts(std::size_t width, std::span<const std::uint64_t> counts);

  std::size_t width() const noexcept { return width_; }
  const std::map<std::string, double>& probs() const noexcept { return probs_; }
  double operator[](const std::string& key) const;
  double total() const;

  std::string to_json() const;
  static Distribution from_json(const std::string& text);

 private:
  std::size_t width_ = 0;
  std::map<std::string, double> probs_;
};

std::string bitstring(std::uint64_t index, std::size_t width);

}  // namespace fomlab
