#include "fomlab/study.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "fomlab/error.hpp"
#include "json.hpp"

namespace fomlab {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

CalibrationData calibration_at(const json& node, const std::filesystem::path& base) {
  if (node.is_object()) return calibration_from_json(node.dump());
  if (!node.is_string()) throw Error(ErrorKind::InvalidArgument, "calibration must be a path or an object");
  std::filesystem::path p = node.get<std::string>();
  if (p.is_relative()) p = base / p;
  return load_calibration(p.string());
}

CorpusSpec corpus_from_json(const json& node) {
  CorpusSpec spec;
  for (const auto& f : node.at("families")) spec.families.push_back(family_from_name(f.get<std::string>()));
  if (node.contains("qubits")) {
    const auto& q = node.at("qubits");
    if (!q.is_array() || q.size() != 2) throw Error(ErrorKind::InvalidArgument, "corpus.qubits must be [lo, hi]");
    spec.qubit_lo = q[0].get<std::size_t>();
    spec.qubit_hi = q[1].get<std::size_t>();
  }
  spec.max_depth = node.value("max_depth", spec.max_depth);
  spec.circuits_per_point = node.value("per_point", spec.circuits_per_point);
  spec.seed = node.value("seed", spec.seed);
  spec.validate();
  return spec;
}

bool same_calibration(const CalibrationData& a, const CalibrationData& b) {
  return calibration_to_json(a) == calibration_to_json(b);
}

}  // namespace

StudyConfig StudyConfig::from_json(const std::string& text, const std::string& base_dir) {
  StudyConfig config;
  const std::filesystem::path base(base_dir);
  try {
    const json doc = json::parse(text);
    const auto& corpus = doc.at("corpus");
    if (corpus.is_array()) {
      for (const auto& part : corpus) config.corpus.push_back(corpus_from_json(part));
    } else {
      config.corpus.push_back(corpus_from_json(corpus));
    }
    if (config.corpus.empty()) throw Error(ErrorKind::EmptyFamily, "study corpus is empty");
    for (const auto& q : doc.at("qpus")) {
      QpuSetup setup;
      setup.name = q.at("name").get<std::string>();
      setup.reported = calibration_at(q.at("calibration"), base);
      setup.truth = q.contains("truth") ? calibration_at(q.at("truth"), base) : setup.reported;
      setup.in_combined = q.value("combined", true);
      config.qpus.push_back(std::move(setup));
    }
    if (config.qpus.empty()) throw Error(ErrorKind::InvalidArgument, "study needs at least one qpu");
    if (doc.contains("noise")) {
      const auto& n = doc.at("noise");
      if (n.is_string()) {
        std::filesystem::path p = n.get<std::string>();
        if (p.is_relative()) p = base / p;
        config.noise = load_noise_config(p.string());
      } else {
        config.noise = NoiseConfig::from_json(n.dump());
      }
    }
    config.shots = doc.value("shots", config.shots);
    config.test_fraction = doc.value("test_fraction", config.test_fraction);
    config.folds = doc.value("folds", config.folds);
    config.seed = doc.value("seed", config.seed);
    if (doc.contains("grid")) {
      const auto& g = doc.at("grid");
      if (g.is_string()) {
        std::filesystem::path p = g.get<std::string>();
        if (p.is_relative()) p = base / p;
        config.grid = grid_from_json(read_file(p.string()), config.seed);
      } else {
        config.grid = grid_from_json(g.dump(), config.seed);
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("study config: ") + e.what());
  }
  if (config.shots == 0) throw Error(ErrorKind::InvalidArgument, "shots must be positive");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "test_fraction must lie in (0, 1)");
  }
  if (config.folds < 2) throw Error(ErrorKind::InvalidArgument, "folds must be at least 2");
  return config;
}

StudyConfig load_study_config(const std::string& path) {
  const auto base = std::filesystem::path(path).parent_path();
  return StudyConfig::from_json(read_file(path), base.empty() ? "." : base.string());
}

StudyResult run_study(const StudyConfig& config) {
  std::vector<NamedCircuit> corpus;
  for (const auto& spec : config.corpus) {
    auto part = generate_corpus(spec);
    corpus.insert(corpus.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::map<std::string, const Circuit*> by_id;
  for (const auto& nc : corpus) {
    if (!by_id.emplace(nc.id, &nc.circuit).second) {
      throw Error(ErrorKind::InvalidArgument, "corpus id " + nc.id + " generated twice");
    }
  }
  const auto grid = config.grid.empty() ? default_grid(config.seed) : config.grid;

  StudyResult result;
  for (std::size_t i = 0; i < config.qpus.size(); ++i) {
    const QpuSetup& qpu = config.qpus[i];
    QpuRun run;
    run.name = qpu.name;
    run.in_combined = qpu.in_combined;

    const QpuRun* twin = nullptr;
    for (std::size_t j = 0; j < i; ++j) {
      if (same_calibration(config.qpus[j].truth, qpu.truth)) {
        twin = &result.runs[j];
        break;
      }
    }
    if (twin) {
      run.train = twin->train;
      run.test = twin->test;
      run.skipped = twin->skipped;
      run.search = twin->search;
      run.model = twin->model;
    } else {
      auto built = build_dataset(corpus, qpu.truth, config.noise, config.shots);
      if (built.too_many_skipped()) {
        throw Error(ErrorKind::InvalidArgument,
                    qpu.name + ": " + std::to_string(built.skipped.size()) + " circuits failed to simulate");
      }
      run.skipped = std::move(built.skipped);
      auto [train, test] = split_train_test(built.data, config.test_fraction, config.seed);
      run.train = std::move(train);
      run.test = std::move(test);
      run.search = grid_search_cv(run.train, grid, config.folds, config.seed);
      run.model = train_forest(run.train, run.search.best);
    }
    for (const auto& sample : run.test.samples) {
      run.merits[sample.circuit_id] = score_all(*by_id.at(sample.circuit_id), qpu.reported);
    }
    result.runs.push_back(std::move(run));
  }

  std::vector<EvaluationInput> inputs;
  for (const auto& run : result.runs) {
    inputs.push_back(EvaluationInput{run.name, &run.test, &run.model, &run.merits, run.in_combined});
  }
  result.report = evaluate_report(inputs);
  return result;
}

}  // namespace fomlab
