#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fomlab/calibration.hpp"
#include "fomlab/circuit.hpp"
#include "fomlab/error.hpp"
#include "fomlab/features.hpp"
#include "fomlab/forest.hpp"
#include "fomlab/merit.hpp"
#include "fomlab/simulator.hpp"
#include "fomlab/stats.hpp"

namespace py = pybind11;
using namespace fomlab;

namespace {

Distribution to_distribution(const std::map<std::string, double>& probs) {
  const std::size_t width = probs.empty() ? 0 : probs.begin()->first.size();
  return Distribution(width, probs);
}

FeatureVector to_features(const std::vector<double>& values) {
  if (values.size() != kFeatureCount) {
    throw Error(ErrorKind::SchemaMismatch,
                "expected " + std::to_string(kFeatureCount) + " features, got " + std::to_string(values.size()));
  }
  FeatureVector f;
  std::copy(values.begin(), values.end(), f.values.begin());
  return f;
}

py::dict merits_dict(const MeritScores& m) {
  py::dict d;
  d["gate_count"] = m.gate_count;
  d["two_qubit_gate_count"] = m.two_qubit_gate_count;
  d["depth"] = m.depth;
  d["expected_fidelity"] = m.expected_fidelity;
  d["esp"] = m.esp;
  return d;
}

}  // namespace

PYBIND11_MODULE(_fomlab, m) {
  static py::exception<Error> error(m, "FomlabError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<Circuit>(m, "Circuit")
      .def(py::init<std::size_t>(), py::arg("num_qubits"))
      .def_static("from_qasm", [](const std::string& text) { return parse_qasm(text); })
      .def_static("load", &load_qasm)
      .def("to_qasm", [](const Circuit& c) { return emit_qasm(c); })
      .def("append",
           [](Circuit& c, const std::string& gate, const std::vector<Qubit>& qubits, std::optional<double> param) {
             const auto kind = gate_from_name(gate);
             if (!kind) throw Error(ErrorKind::UnsupportedGate, "unsupported gate '" + gate + "'");
             if (qubits.size() != arity(*kind)) {
               throw Error(ErrorKind::InvalidCircuit, gate + " expects " + std::to_string(arity(*kind)) + " qubit(s)");
             }
             c.append(arity(*kind) == 2 ? GateOp::two(*kind, qubits[0], qubits[1]) : GateOp::one(*kind, qubits[0], param));
             return &c;
           },
           py::arg("gate"), py::arg("qubits"), py::arg("param") = std::nullopt, py::return_value_policy::reference)
      .def("measure_all", &Circuit::measure_all, py::return_value_policy::reference)
      .def_property_readonly("num_qubits", &Circuit::num_qubits)
      .def("__len__", &Circuit::size)
      .def("depth", [](const Circuit& c) { return depth(c); })
      .def("__eq__", [](const Circuit& a, const Circuit& b) { return a == b; });

  m.def("feature_schema", [] {
    std::vector<std::string> names;
    for (auto n : feature_schema()) names.emplace_back(n);
    return names;
  });
  m.def("extract_features", [](const Circuit& c) {
    const auto f = extract_features(c);
    return std::vector<double>(f.values.begin(), f.values.end());
  });

  py::class_<CalibrationData>(m, "Calibration")
      .def_static("from_json", &calibration_from_json)
      .def_static("load", &load_calibration)
      .def("to_json", [](const CalibrationData& c) { return calibration_to_json(c); });

  py::class_<NoiseConfig>(m, "NoiseConfig")
      .def(py::init([](bool gate, bool readout, bool idle, bool crosstalk, std::uint64_t seed) {
             return NoiseConfig{gate, readout, idle, crosstalk, seed};
           }),
           py::arg("gate_depolarizing") = true, py::arg("readout_error") = true, py::arg("idle_decay") = true,
           py::arg("crosstalk") = true, py::arg("rng_seed") = 0)
      .def_static("from_json", &NoiseConfig::from_json)
      .def("to_json", &NoiseConfig::to_json);

  m.def("expected_fidelity", [](const Circuit& c, const CalibrationData& cal) { return expected_fidelity(c, cal); });
  m.def("esp", [](const Circuit& c, const CalibrationData& cal) { return esp(c, cal); });
  m.def("score_all", [](const Circuit& c, const CalibrationData& cal) { return merits_dict(score_all(c, cal)); });

  m.def("simulate_ideal", [](const Circuit& c) { return simulate_ideal(c).probs(); });
  m.def("sample_noisy",
        [](const Circuit& c, const CalibrationData& cal, const NoiseConfig& noise, std::uint64_t shots) {
          py::gil_scoped_release release;
          return sample_noisy(c, cal, noise, shots).probs();
        },
        py::arg("circuit"), py::arg("calibration"), py::arg("noise"), py::arg("shots"));

  m.def("hellinger", [](const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
    return hellinger(to_distribution(p), to_distribution(q));
  });
  m.def("pearson", [](const std::vector<double>& d, const std::vector<double>& y) { return pearson(d, y); });

  py::class_<ForestModel>(m, "ForestModel")
      .def_static("from_json", &ForestModel::from_json)
      .def_static("load", &load_model)
      .def("to_json", &ForestModel::to_json)
      .def("predict", [](const ForestModel& model, const std::vector<double>& f) { return predict(model, to_features(f)); })
      .def_property_readonly("importances", [](const ForestModel& model) {
        return std::vector<double>(model.importances.begin(), model.importances.end());
      })
      .def_property_readonly("n_trees", [](const ForestModel& model) { return model.trees.size(); })
      .def("__eq__", [](const ForestModel& a, const ForestModel& b) { return a == b; });

  m.def("train_forest",
        [](const std::vector<std::vector<double>>& features, const std::vector<double>& labels, std::size_t n_trees,
           std::optional<std::size_t> max_depth, std::size_t min_samples_leaf, std::size_t min_samples_split,
           std::size_t features_per_split, std::uint64_t seed) {
          if (features.size() != labels.size()) {
            throw Error(ErrorKind::InvalidArgument, "features and labels differ in length");
          }
          LabeledDataset data;
          for (std::size_t i = 0; i < labels.size(); ++i) {
            char id[32];
            std::snprintf(id, sizeof id, "row%09zu", i);
            data.samples.push_back({to_features(features[i]), labels[i], id});
          }
          HyperParams h{n_trees, max_depth, min_samples_leaf, min_samples_split, features_per_split, seed};
          py::gil_scoped_release release;
          return train_forest(data, h);
        },
        py::arg("features"), py::arg("labels"), py::arg("n_trees") = 100, py::arg("max_depth") = std::nullopt,
        py::arg("min_samples_leaf") = 1, py::arg("min_samples_split") = 2, py::arg("features_per_split") = 6,
        py::arg("seed") = 0);
}
