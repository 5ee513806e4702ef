#include "fomlab/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fomlab/error.hpp"
#include "fomlab/random.hpp"

namespace fomlab {

namespace {

void controlled_phase(Circuit& c, Qubit control, Qubit target, double theta) {
  c.rz(control, theta / 2.0);
  c.cx(control, target);
  c.rz(target, -theta / 2.0);
  c.cx(control, target);
  c.rz(target, theta / 2.0);
}

void swap_via_cx(Circuit& c, Qubit a, Qubit b) {
  c.cx(a, b);
  c.cx(b, a);
  c.cx(a, b);
}

double random_angle(Rng& rng) { return 2.0 * std::numbers::pi * rng.uniform(); }

// Log-uniform integer in [1, hi], so shallow and deep draws are equally common
// per octave.
std::size_t log_uniform_count(Rng& rng, std::size_t hi) {
  if (hi <= 1) return 1;
  const double x = std::exp(rng.uniform() * std::log(static_cast<double>(hi) + 1.0));
  return std::clamp<std::size_t>(static_cast<std::size_t>(x), 1, hi);
}

Circuit random_layered(std::size_t n, std::size_t max_depth, Rng& rng) {
  Circuit c(n);
  const auto layers = log_uniform_count(rng, max_depth > 1 ? (max_depth - 1) / 2 : 1);
  const double cx_density = 0.3 + 0.7 * rng.uniform();
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (Qubit q = 0; q < n; ++q) {
      const auto pick = rng.below(3);
      const double theta = random_angle(rng);
      if (pick == 0) c.rx(q, theta);
      else if (pick == 1) c.ry(q, theta);
      else c.rz(q, theta);
    }
    for (Qubit q = 0; q + 1 < n;) {
      if (rng.uniform() < cx_density) {
        if (rng.below(2) == 0) c.cx(q, q + 1);
        else c.cx(q + 1, q);
        q += 2;
      } else {
        ++q;
      }
    }
  }
  return c.measure_all();
}

Circuit qaoa_like(std::size_t n, std::size_t max_depth, Rng& rng) {
  const std::size_t per_rep = n == 2 ? 4 : 7;
  const std::size_t reps_max = max_depth > 2 ? std::max<std::size_t>(1, (max_depth - 2) / per_rep) : 1;
  const auto reps = log_uniform_count(rng, reps_max);
  Circuit c(n);
  for (Qubit q = 0; q < n; ++q) c.h(q);
  for (std::size_t r = 0; r < reps; ++r) {
    const double gamma = std::numbers::pi * rng.uniform();
    const double beta = std::numbers::pi * rng.uniform();
    for (Qubit parity = 0; parity < 2; ++parity) {
      for (Qubit q = parity; q + 1 < n; q += 2) {
        c.cx(q, q + 1);
        c.rz(q + 1, 2.0 * gamma);
        c.cx(q, q + 1);
      }
    }
    for (Qubit q = 0; q < n; ++q) c.rx(q, 2.0 * beta);
  }
  return c.measure_all();
}

}  // namespace

std::string family_name(Family family) {
  switch (family) {
    case Family::Ghz: return "ghz";
    case Family::Qft: return "qft";
    case Family::RandomLayered: return "random_layered";
    case Family::QaoaLike: return "qaoa_like";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::Ghz, Family::Qft, Family::RandomLayered, Family::QaoaLike}) {
    if (family_name(f) == name) return f;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown circuit family '" + name + "'");
}

void CorpusSpec::validate() const {
  if (families.empty()) throw Error(ErrorKind::EmptyFamily, "corpus needs at least one family");
  if (qubit_lo < 2 || qubit_hi < qubit_lo) {
    throw Error(ErrorKind::InvalidArgument, "qubit range must satisfy 2 <= lo <= hi");
  }
  if (max_depth == 0) throw Error(ErrorKind::InvalidArgument, "max_depth must be positive");
  if (circuits_per_point == 0) throw Error(ErrorKind::InvalidArgument, "circuits_per_point must be positive");
}

Circuit ghz_circuit(std::size_t n) {
  Circuit c(n);
  c.h(0);
  for (Qubit q = 0; q + 1 < n; ++q) c.cx(q, q + 1);
  return c.measure_all();
}

Circuit qft_circuit(std::size_t n) {
  // line[p] = logical qubit at position p. Logical j starts each round at
  // position 0 and bubbles to the end, meeting j+1, j+2, ... as neighbours.
  Circuit c(n);
  for (Qubit j = 0; j < n; ++j) {
    c.h(0);
    for (Qubit k = j + 1; k < n; ++k) {
      const Qubit pos = k - j - 1;
      controlled_phase(c, pos + 1, pos, std::numbers::pi / std::pow(2.0, static_cast<double>(k - j)));
      swap_via_cx(c, pos, pos + 1);
    }
  }
  return c.measure_all();
}

Circuit truncate_to_depth(const Circuit& circuit, std::size_t max_depth) {
  if (depth(circuit) <= max_depth) return circuit;
  Circuit gates_only(circuit.num_qubits());
  for (const auto& op : circuit.ops()) {
    if (!op.is_measure()) gates_only.append(op);
  }
  const auto levels = asap_levels(gates_only);
  Circuit out(circuit.num_qubits());
  for (std::size_t i = 0; i < gates_only.size(); ++i) {
    if (levels[i] + 1 < max_depth) out.append(gates_only.ops()[i]);
  }
  return circuit.measured_count() > 0 ? out.measure_all() : out;
}

std::vector<NamedCircuit> generate_corpus(const CorpusSpec& spec) {
  spec.validate();
  std::vector<NamedCircuit> corpus;
  char id[64];
  for (Family family : spec.families) {
    for (std::size_t n = spec.qubit_lo; n <= spec.qubit_hi; ++n) {
      for (std::size_t k = 0; k < spec.circuits_per_point; ++k) {
        std::snprintf(id, sizeof id, "%s_n%02zu_%03zu", family_name(family).c_str(), n, k);
        Rng rng(derive_seed(spec.seed, fnv1a(id)));
        Circuit c(n);
        switch (family) {
          case Family::Ghz: c = ghz_circuit(n); break;
          case Family::Qft: c = qft_circuit(n); break;
          case Family::RandomLayered: c = random_layered(n, spec.max_depth, rng); break;
          case Family::QaoaLike: c = qaoa_like(n, spec.max_depth, rng); break;
        }
        corpus.push_back({id, truncate_to_depth(c, spec.max_depth)});
      }
    }
  }
  return corpus;
}

void write_corpus(const std::vector<NamedCircuit>& corpus, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [id, circuit] : corpus) {
    const auto path = std::filesystem::path(dir) / (id + ".qasm");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << emit_qasm(circuit);
  }
}

std::vector<NamedCircuit> load_corpus(const std::string& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorKind::Io, dir + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".qasm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<NamedCircuit> corpus;
  for (const auto& path : files) {
    try {
      corpus.push_back({path.stem().string(), load_qasm(path.string())});
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace fomlab
