#include "fomlab/calibration.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fomlab/error.hpp"
#include "json.hpp"

namespace fomlab {

namespace {

using nlohmann::json;

double lookup(const std::map<Qubit, double>& table, Qubit q, const char* what) {
  const auto it = table.find(q);
  if (it == table.end()) {
    throw Error(ErrorKind::MissingCalibration,
                std::string("no ") + what + " for qubit " + std::to_string(q));
  }
  return it->second;
}

Qubit parse_qubit(const std::string& key) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(key, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != key.size() || key.empty()) {
    throw Error(ErrorKind::InvalidCalibration, "bad qubit key '" + key + "'");
  }
  return static_cast<Qubit>(v);
}

double number_or_inf(const json& value) {
  if (value.is_null()) return std::numeric_limits<double>::infinity();
  if (value.is_string() && value.get<std::string>() == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  return value.get<double>();
}

std::map<Qubit, double> per_qubit(const json& doc, const char* key) {
  std::map<Qubit, double> out;
  if (!doc.contains(key)) return out;
  for (const auto& [k, v] : doc.at(key).items()) out[parse_qubit(k)] = number_or_inf(v);
  return out;
}

json per_qubit_json(const std::map<Qubit, double>& table) {
  json out = json::object();
  for (const auto& [q, v] : table) {
    out[std::to_string(q)] = std::isinf(v) ? json("inf") : json(v);
  }
  return out;
}

QubitPair parse_pair_key(const std::string& key) {
  const auto dash = key.find('-');
  if (dash == std::string::npos) throw Error(ErrorKind::InvalidCalibration, "bad pair key '" + key + "'");
  return QubitPair(parse_qubit(key.substr(0, dash)), parse_qubit(key.substr(dash + 1)));
}

}  // namespace

double CalibrationData::single_fidelity(Qubit q) const {
  return lookup(single_qubit_fidelity, q, "single-qubit fidelity");
}

double CalibrationData::pair_fidelity(Qubit a, Qubit b) const {
  if (!coupled(a, b)) {
    throw Error(ErrorKind::UncoupledPair,
                "qubits " + std::to_string(a) + " and " + std::to_string(b) + " are not coupled");
  }
  const auto it = two_qubit_fidelity.find(QubitPair(a, b));
  if (it == two_qubit_fidelity.end()) {
    throw Error(ErrorKind::MissingCalibration, "no two-qubit fidelity for pair " +
                                                   std::to_string(a) + "-" + std::to_string(b));
  }
  return it->second;
}

double CalibrationData::readout(Qubit q) const { return lookup(readout_fidelity, q, "readout fidelity"); }
double CalibrationData::t1(Qubit q) const { return lookup(t1_ns, q, "T1"); }
double CalibrationData::t2(Qubit q) const { return lookup(t2_ns, q, "T2"); }

void CalibrationData::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidCalibration, what); };
  auto in_device = [&](Qubit q) { return num_qubits == 0 || q < num_qubits; };
  for (const auto& [q, f] : single_qubit_fidelity) {
    if (!in_device(q)) bad("single-qubit fidelity for qubit outside the device");
    if (!(f > 0.0 && f <= 1.0)) bad("single-qubit fidelity of qubit " + std::to_string(q) + " not in (0, 1]");
  }
  // Readout fidelity 0 is allowed: it models a deterministic bit flip.
  for (const auto& [q, f] : readout_fidelity) {
    if (!in_device(q)) bad("readout fidelity for qubit outside the device");
    if (!(f >= 0.0 && f <= 1.0)) bad("readout fidelity of qubit " + std::to_string(q) + " not in [0, 1]");
  }
  for (const auto& [pair, f] : two_qubit_fidelity) {
    if (!coupling_map.contains(pair)) {
      bad("two-qubit fidelity given for uncoupled pair " + std::to_string(pair.first) + "-" +
          std::to_string(pair.second));
    }
    if (!(f > 0.0 && f <= 1.0)) bad("two-qubit fidelity not in (0, 1]");
  }
  for (const auto& pair : coupling_map) {
    if (pair.first == pair.second) bad("coupling map contains a self loop");
    if (!in_device(pair.first) || !in_device(pair.second)) bad("coupling map references qubit outside the device");
  }
  for (const auto& [q, t1] : t1_ns) {
    if (!(t1 > 0.0)) bad("T1 of qubit " + std::to_string(q) + " must be positive");
    const auto it = t2_ns.find(q);
    if (it != t2_ns.end() && !(it->second > 0.0)) bad("T2 of qubit " + std::to_string(q) + " must be positive");
    if (it != t2_ns.end() && !std::isinf(t1) && it->second > 2.0 * t1) {
      bad("T2 exceeds 2*T1 on qubit " + std::to_string(q));
    }
  }
  for (const auto& [kind, d] : gate_durations) {
    if (!(d > 0.0)) bad("duration of " + std::string(gate_name(kind)) + " must be positive");
  }
  if (!(crosstalk_strength >= 0.0 && crosstalk_strength < 1.0)) bad("crosstalk_strength not in [0, 1)");
}

CalibrationData calibration_from_json(const std::string& text) {
  CalibrationData calib;
  try {
    const json doc = json::parse(text);
    calib.num_qubits = doc.value("qubits", std::size_t{0});
    calib.single_qubit_fidelity = per_qubit(doc, "single_qubit_fidelity");
    calib.readout_fidelity = per_qubit(doc, "readout_fidelity");
    calib.t1_ns = per_qubit(doc, "t1_ns");
    calib.t2_ns = per_qubit(doc, "t2_ns");
    if (doc.contains("coupling_map")) {
      for (const auto& edge : doc.at("coupling_map")) {
        calib.coupling_map.insert(QubitPair(edge.at(0).get<Qubit>(), edge.at(1).get<Qubit>()));
      }
    }
    if (doc.contains("two_qubit_fidelity")) {
      for (const auto& entry : doc.at("two_qubit_fidelity")) {
        calib.two_qubit_fidelity[parse_pair_key(entry.at(0).get<std::string>())] =
            entry.at(1).get<double>();
      }
    }
    if (doc.contains("gate_durations_ns")) {
      for (const auto& [name, v] : doc.at("gate_durations_ns").items()) {
        const auto kind = gate_from_name(name);
        if (!kind) throw Error(ErrorKind::InvalidCalibration, "unknown gate '" + name + "' in gate_durations_ns");
        calib.gate_durations[*kind] = v.get<double>();
      }
    }
    calib.crosstalk_strength = doc.value("crosstalk_strength", 0.0);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidCalibration, std::string("malformed calibration JSON: ") + e.what());
  }
  calib.validate();
  return calib;
}

std::string calibration_to_json(const CalibrationData& calib) {
  json doc;
  doc["qubits"] = calib.num_qubits;
  doc["single_qubit_fidelity"] = per_qubit_json(calib.single_qubit_fidelity);
  json pairs = json::array();
  for (const auto& [pair, f] : calib.two_qubit_fidelity) {
    pairs.push_back(json::array({std::to_string(pair.first) + "-" + std::to_string(pair.second), f}));
  }
  doc["two_qubit_fidelity"] = pairs;
  doc["readout_fidelity"] = per_qubit_json(calib.readout_fidelity);
  doc["t1_ns"] = per_qubit_json(calib.t1_ns);
  doc["t2_ns"] = per_qubit_json(calib.t2_ns);
  json durations = json::object();
  for (const auto& [kind, d] : calib.gate_durations) durations[std::string(gate_name(kind))] = d;
  doc["gate_durations_ns"] = durations;
  json coupling = json::array();
  for (const auto& pair : calib.coupling_map) coupling.push_back(json::array({pair.first, pair.second}));
  doc["coupling_map"] = coupling;
  doc["crosstalk_strength"] = calib.crosstalk_strength;
  return doc.dump(2) + "\n";
}

CalibrationData load_calibration(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return calibration_from_json(buffer.str());
}

CalibrationData make_uniform_calibration(const UniformDevice& device) {
  CalibrationData calib;
  calib.num_qubits = device.num_qubits;
  for (Qubit q = 0; q < device.num_qubits; ++q) {
    calib.single_qubit_fidelity[q] = device.single_qubit_fidelity;
    calib.readout_fidelity[q] = device.readout_fidelity;
    calib.t1_ns[q] = device.t1_ns;
    calib.t2_ns[q] = device.t2_ns;
  }
  calib.coupling_map = device.coupling;
  for (const auto& pair : device.coupling) calib.two_qubit_fidelity[pair] = device.two_qubit_fidelity;
  for (GateKind kind : kAllGateKinds) {
    calib.gate_durations[kind] = kind == GateKind::Measure ? device.measure_ns
                                 : arity(kind) == 2       ? device.two_qubit_ns
                                                          : device.single_qubit_ns;
  }
  calib.crosstalk_strength = device.crosstalk;
  calib.validate();
  return calib;
}

std::set<QubitPair> all_to_all(std::size_t num_qubits) {
  std::set<QubitPair> pairs;
  for (Qubit a = 0; a < num_qubits; ++a) {
    for (Qubit b = a + 1; b < num_qubits; ++b) pairs.insert(QubitPair(a, b));
  }
  return pairs;
}

std::set<QubitPair> serpentine_grid(std::size_t rows, std::size_t cols) {
  auto index = [&](std::size_t r, std::size_t c) {
    return static_cast<Qubit>(r * cols + (r % 2 == 0 ? c : cols - 1 - c));
  };
  std::set<QubitPair> pairs;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) pairs.insert(QubitPair(index(r, c), index(r, c + 1)));
      if (r + 1 < rows) pairs.insert(QubitPair(index(r, c), index(r + 1, c)));
    }
  }
  return pairs;
}

}  // namespace fomlab
