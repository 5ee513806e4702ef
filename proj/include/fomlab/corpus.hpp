#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fomlab/circuit.hpp"

namespace fomlab {

enum class Family { Ghz, Qft, RandomLayered, QaoaLike };

std::string family_name(Family family);
Family family_from_name(const std::string& name);

struct CorpusSpec {
  std::vector<Family> families;
  std::size_t qubit_lo = 2;
  std::size_t qubit_hi = 5;
  std::size_t max_depth = 200;
  std::size_t circuits_per_point = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NamedCircuit {
  std::string id;
  Circuit circuit;
};

/// Surrogate benchmark corpus. Every circuit ends in a full measurement,
/// uses only nearest-neighbour pairs (i, i+1) for two-qubit gates and has
/// depth <= max_depth. Ids sort in generation order per family.
std::vector<NamedCircuit> generate_corpus(const CorpusSpec& spec);

Circuit ghz_circuit(std::size_t n);
/// Textbook QFT routed onto a line with a swap network, in {h, rz, cx}.
Circuit qft_circuit(std::size_t n);

/// Drops the tail of a circuit so that, with a final full measurement, its
/// depth is at most max_depth.
Circuit truncate_to_depth(const Circuit& circuit, std::size_t max_depth);

void write_corpus(const std::vector<NamedCircuit>& corpus, const std::string& dir);
/// Every *.qasm file in dir, sorted by name; ids are the file stems.
std::vector<NamedCircuit> load_corpus(const std::string& dir);

}  // namespace fomlab
