#include "fomlab/distribution.hpp"

#include "fomlab/error.hpp"
#include "json.hpp"

namespace fomlab {

std::string bitstring(std::uint64_t index, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t b = 0; b < width; ++b) {
    if ((index >> b) & 1U) s[width - 1 - b] = '1';
  }
  return s;
}

Distribution::Distribution(std::size_t width, std::map<std::string, double> probs)
    : width_(width), probs_(std::move(probs)) {
  for (const auto& [key, p] : probs_) {
    if (key.size() != width_) {
      throw Error(ErrorKind::WidthMismatch,
                  "bitstring '" + key + "' does not have width " + std::to_string(width_));
    }
    if (key.find_first_not_of("01") != std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "bitstring '" + key + "' is not binary");
    }
    if (!(p >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative probability for '" + key + "'");
  }
}

Distribution Distribution::from_counts(std::size_t width, std::span<const std::uint64_t> counts) {
  std::uint64_t shots = 0;
  for (auto c : counts) shots += c;
  std::map<std::string, double> probs;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) {
      probs.emplace(bitstring(i, width), static_cast<double>(counts[i]) / static_cast<double>(shots));
    }
  }
  return Distribution(width, std::move(probs));
}

double Distribution::operator[](const std::string& key) const {
  const auto it = probs_.find(key);
  return it == probs_.end() ? 0.0 : it->second;
}

double Distribution::total() const {
  double sum = 0.0;
  for (const auto& [key, p] : probs_) sum += p;
  return sum;
}

std::string Distribution::to_json() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, p] : probs_) doc[key] = p;
  return doc.dump(2) + "\n";
}

Distribution Distribution::from_json(const std::string& text) {
  std::map<std::string, double> probs;
  std::size_t width = 0;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& [key, p] : doc.items()) {
      width = key.size();
      probs[key] = p.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed distribution JSON: ") + e.what());
  }
  return Distribution(width, std::move(probs));
}

}  // namespace fomlab
