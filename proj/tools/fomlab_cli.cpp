#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fomlab/calibration.hpp"
#include "fomlab/circuit.hpp"
#include "fomlab/corpus.hpp"
#include "fomlab/dataset.hpp"
#include "fomlab/error.hpp"
#include "fomlab/features.hpp"
#include "fomlab/forest.hpp"
#include "fomlab/merit.hpp"
#include "fomlab/report.hpp"
#include "fomlab/simulator.hpp"
#include "fomlab/study.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace fomlab;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

std::string meta_path(const std::string& csv) { return csv + ".meta.json"; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json merit_json(const MeritScores& m) {
  return {{"gate_count", m.gate_count},
          {"two_qubit_gate_count", m.two_qubit_gate_count},
          {"depth", m.depth},
          {"expected_fidelity", m.expected_fidelity},
          {"esp", m.esp}};
}

std::vector<Family> parse_families(const std::string& list) {
  std::vector<Family> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(family_from_name(item));
  }
  return out;
}

void parse_range(const std::string& text, std::size_t& lo, std::size_t& hi) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      lo = hi = std::stoul(text);
    } else {
      lo = std::stoul(text.substr(0, colon));
      hi = std::stoul(text.substr(colon + 1));
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidArgument, "expected LO:HI, got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Figures of merit for compiled quantum circuits"};
  app.require_subcommand(1);

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "Generate a benchmark corpus as .qasm files");
  std::string families = "ghz,qft,random_layered,qaoa_like";
  std::string qubits = "2:5";
  CorpusSpec corpus_spec;
  std::string corpus_out;
  gen->add_option("--families", families, "Comma-separated families");
  gen->add_option("--qubits", qubits, "Qubit range LO:HI");
  gen->add_option("--max-depth", corpus_spec.max_depth);
  gen->add_option("--per-point", corpus_spec.circuits_per_point, "Circuits per (family, qubits)");
  gen->add_option("--seed", corpus_spec.seed);
  gen->add_option("--out", corpus_out)->required();

  // features
  auto* feat = app.add_subcommand("features", "Print the feature vector of a circuit");
  std::string feat_file;
  bool feat_json = false;
  feat->add_option("file", feat_file)->required();
  feat->add_flag("--json", feat_json);

  // merit
  auto* merit = app.add_subcommand("merit", "Established figures of merit of a circuit");
  std::string merit_file, merit_calib;
  merit->add_option("file", merit_file)->required();
  merit->add_option("--calib", merit_calib)->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Ideal or noisy output distribution");
  std::string sim_file, sim_noise, sim_calib;
  std::uint64_t sim_shots = 2000;
  sim->add_option("file", sim_file)->required();
  sim->add_option("--noise", sim_noise);
  sim->add_option("--calib", sim_calib);
  sim->add_option("--shots", sim_shots);

  // build-dataset
  auto* build = app.add_subcommand("build-dataset", "Label a corpus with noisy-execution distances");
  std::string build_corpus, build_calib, build_noise, build_out;
  std::uint64_t build_shots = 2000;
  build->add_option("--corpus", build_corpus)->required();
  build->add_option("--calib", build_calib)->required();
  build->add_option("--noise", build_noise);
  build->add_option("--shots", build_shots);
  build->add_option("--out", build_out)->required();

  // train
  auto* train = app.add_subcommand("train", "Grid-search and train a forest model");
  std::string train_data, train_grid, train_out, train_test_out;
  std::size_t train_folds = 3;
  double train_test_frac = 0.2;
  std::uint64_t train_seed = 0;
  train->add_option("--data", train_data)->required();
  train->add_option("--grid", train_grid);
  train->add_option("--folds", train_folds);
  train->add_option("--test-frac", train_test_frac);
  train->add_option("--seed", train_seed);
  train->add_option("--out", train_out)->required();
  train->add_option("--test-out", train_test_out, "Held-out split (default: <out>.test.csv)");

  // predict
  auto* pred = app.add_subcommand("predict", "Predict the distance for a circuit");
  std::string pred_model, pred_file;
  pred->add_option("--model", pred_model)->required();
  pred->add_option("file", pred_file)->required();

  // report
  auto* rep = app.add_subcommand("report", "Correlation and importance report");
  std::string rep_model, rep_data, rep_calib, rep_out, rep_corpus, rep_name = "qpu";
  bool rep_text = false;
  rep->add_option("--model", rep_model)->required();
  rep->add_option("--data", rep_data)->required();
  rep->add_option("--calib", rep_calib)->required();
  rep->add_option("--out", rep_out)->required();
  rep->add_option("--corpus", rep_corpus, "Corpus directory (default: from the dataset metadata)");
  rep->add_option("--name", rep_name, "Column name");
  rep->add_flag("--text", rep_text, "Also print an aligned table");

  // study
  auto* study = app.add_subcommand("study", "Run the full correlation study from a config");
  std::string study_config, study_out;
  bool study_text = false;
  study->add_option("--config", study_config)->required();
  study->add_option("--out", study_out)->required();
  study->add_flag("--text", study_text);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      corpus_spec.families = parse_families(families);
      parse_range(qubits, corpus_spec.qubit_lo, corpus_spec.qubit_hi);
      const auto corpus = generate_corpus(corpus_spec);
      write_corpus(corpus, corpus_out);
      std::cout << "wrote " << corpus.size() << " circuits to " << corpus_out << '\n';
    } else if (*feat) {
      const auto fv = extract_features(load_qasm(feat_file));
      const auto& names = feature_schema();
      if (feat_json) {
        ordered_json doc = ordered_json::object();
        for (std::size_t i = 0; i < kFeatureCount; ++i) doc[std::string(names[i])] = fv[i];
        std::cout << doc.dump(2) << '\n';
      } else {
        for (std::size_t i = 0; i < kFeatureCount; ++i) std::cout << names[i] << ' ' << fmt(fv[i]) << '\n';
      }
    } else if (*merit) {
      const auto scores = score_all(load_qasm(merit_file), load_calibration(merit_calib));
      std::cout << merit_json(scores).dump(2) << '\n';
    } else if (*sim) {
      const auto circuit = load_qasm(sim_file);
      if (sim_noise.empty() && sim_calib.empty()) {
        std::cout << simulate_ideal(circuit).to_json() << '\n';
      } else {
        if (sim_calib.empty()) throw Error(ErrorKind::InvalidArgument, "--noise needs --calib");
        const auto noise = sim_noise.empty() ? NoiseConfig{} : load_noise_config(sim_noise);
        std::cout << sample_noisy(circuit, load_calibration(sim_calib), noise, sim_shots).to_json() << '\n';
      }
    } else if (*build) {
      const auto circuits = load_corpus(build_corpus);
      const auto calib = load_calibration(build_calib);
      const auto noise = build_noise.empty() ? NoiseConfig{} : load_noise_config(build_noise);
      const auto built = build_dataset(circuits, calib, noise, build_shots);
      save_dataset(built.data, build_out);
      ordered_json meta;
      meta["corpus"] = fs::absolute(build_corpus).lexically_normal().string();
      meta["calibration"] = fs::absolute(build_calib).lexically_normal().string();
      meta["shots"] = build_shots;
      meta["noise"] = ordered_json::parse(noise.to_json());
      meta["circuits"] = circuits.size();
      meta["rows"] = built.data.size();
      ordered_json skipped = ordered_json::array();
      for (const auto& [id, why] : built.skipped) skipped.push_back({{"circuit_id", id}, {"reason", why}});
      meta["skipped"] = skipped;
      write_file(meta_path(build_out), meta.dump(2) + "\n");
      for (const auto& [id, why] : built.skipped) std::cerr << "warning: skipped " << id << ": " << why << '\n';
      std::cout << "wrote " << built.data.size() << " rows to " << build_out;
      if (!built.skipped.empty()) std::cout << " (" << built.skipped.size() << " skipped)";
      std::cout << '\n';
      if (built.too_many_skipped()) {
        std::cerr << "error: more than 10% of the circuits were skipped\n";
        return 2;
      }
    } else if (*train) {
      const auto data = load_dataset(train_data);
      const auto grid = train_grid.empty() ? default_grid(train_seed) : grid_from_json(read_file(train_grid), train_seed);
      auto [train_set, test_set] = split_train_test(data, train_test_frac, train_seed);
      const auto search = grid_search_cv(train_set, grid, train_folds, train_seed);
      const auto model = train_forest(train_set, search.best);
      write_file(train_out, model.to_json());
      if (train_test_out.empty()) train_test_out = train_out + ".test.csv";
      save_dataset(test_set, train_test_out);
      if (fs::exists(meta_path(train_data))) write_file(meta_path(train_test_out), read_file(meta_path(train_data)));
      std::cout << "best " << search.best.describe() << " cv_r " << fmt(search.best_score) << '\n';
      std::cout << "train " << train_set.size() << " test " << test_set.size() << " -> " << train_test_out << '\n';
    } else if (*pred) {
      const auto model = load_model(pred_model);
      std::cout << fmt(predict(model, extract_features(load_qasm(pred_file)))) << '\n';
    } else if (*rep) {
      const auto model = load_model(rep_model);
      const auto test = load_dataset(rep_data);
      const auto calib = load_calibration(rep_calib);
      if (rep_corpus.empty()) {
        if (!fs::exists(meta_path(rep_data))) {
          throw Error(ErrorKind::InvalidArgument, "no --corpus given and no metadata next to " + rep_data);
        }
        rep_corpus = ordered_json::parse(read_file(meta_path(rep_data))).at("corpus").get<std::string>();
      }
      std::map<std::string, Circuit> circuits;
      for (auto& nc : load_corpus(rep_corpus)) circuits.emplace(nc.id, std::move(nc.circuit));
      std::map<std::string, MeritScores> merits;
      for (const auto& s : test.samples) {
        const auto it = circuits.find(s.circuit_id);
        if (it == circuits.end()) throw Error(ErrorKind::InvalidArgument, "circuit " + s.circuit_id + " not in corpus");
        merits[s.circuit_id] = score_all(it->second, calib);
      }
      const auto report = evaluate_report(test, model, merits, rep_name);
      write_file(rep_out, report.to_json());
      if (rep_text) std::cout << report.to_text();
    } else if (*study) {
      const auto config = load_study_config(study_config);
      const auto result = run_study(config);
      write_file(study_out, result.report.to_json());
      for (const auto& run : result.runs) {
        std::cerr << run.name << ": train " << run.train.size() << " test " << run.test.size() << " best "
                  << run.search.best.describe() << " cv_r " << fmt(run.search.best_score) << '\n';
      }
      if (study_text) std::cout << result.report.to_text();
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
