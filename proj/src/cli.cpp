// Copyright 2026 The mincut-pool Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mincut/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "mincut/checkpoint.hpp"
#include "mincut/errors.hpp"
#include "mincut/gradcheck.hpp"
#include "mincut/graph_io.hpp"
#include "mincut/metrics.hpp"
#include "mincut/pool.hpp"
#include "mincut/spectral.hpp"
#include "mincut/training.hpp"

namespace mincut::cli {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr const char* kNmiNote =
    "# note: NMI is normalized by sqrt(H(pred) * H(truth)); the difference form "
    "sqrt(H(pred) - H(truth)) is not used because it can be zero or undefined";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::size_t parse_size(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + ": '" + s + "'");
  }
  if (pos != s.size() || s.empty() || s[0] == '-') throw ConfigError("invalid " + what + ": '" + s + "'");
  return static_cast<std::size_t>(v);
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("invalid " + what + ": '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("invalid " + what + ": '" + s + "'");
  return v;
}

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json config_json(const ExperimentConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  j["generator"] = c.generator.empty() ? Json(nullptr) : Json(c.generator);
  j["graph"] = c.graph_path.empty() ? Json(nullptr) : Json(c.graph_path);
  j["content"] = c.content_path.empty() ? Json(nullptr) : Json(c.content_path);
  j["cites"] = c.cites_path.empty() ? Json(nullptr) : Json(c.cites_path);
  j["method"] = c.method;
  j["k"] = c.k;
  j["seed"] = c.seed;
  j["iterations"] = c.iterations ? Json(*c.iterations) : Json(nullptr);
  j["lr"] = nullable(c.lr);
  j["temperature"] = c.temperature;
  j["out"] = c.out_dir;
  j["hidden"] = c.hidden;
  j["early_stop"] = c.early_stop;
  j["link_weight"] = c.link_weight;
  j["entropy_weight"] = c.entropy_weight;
  j["keep_ratio"] = c.keep_ratio;
  j["task"] = c.task;
  j["folds"] = c.folds;
  j["shuffle_labels"] = c.shuffle_labels;
  j["seeds"] = c.seeds;
  return j;
}

struct Metrics {
  std::optional<double> nmi, cs, l_c, l_o, l_u, mse, accuracy;
  double seconds = 0.0;
};

std::string metrics_json(const ExperimentConfig& c, const Metrics& m) {
  Json j;
  j["method"] = c.method;
  j["k"] = c.k;
  j["seed"] = c.seed;
  j["nmi"] = nullable(m.nmi);
  j["cs"] = nullable(m.cs);
  j["l_c"] = nullable(m.l_c);
  j["l_o"] = nullable(m.l_o);
  j["l_u"] = nullable(m.l_u);
  j["mse"] = nullable(m.mse);
  j["accuracy"] = nullable(m.accuracy);
  j["seconds"] = m.seconds;
  return j.dump(2) + "\n";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void prepare_output(const ExperimentConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.out_dir, ec);
  if (ec) throw Error("cannot create output directory '" + c.out_dir + "': " + ec.message());
  // config.json carries the resolved configuration, so it is written first.
  write_file_atomic(std::filesystem::path(c.out_dir) / "config.json", config_json(c).dump(2) + "\n");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
}

void validate_common(const ExperimentConfig& c) {
  if (c.k < 2) throw ConfigError("--k must be at least 2");
  if (c.iterations && *c.iterations < 1) throw ConfigError("--iterations must be at least 1");
  if (c.lr) require_positive(*c.lr, "--lr");
  require_positive(c.temperature, "--temperature");
}

struct LoadedGraph {
  Graph graph;
  std::vector<std::string> node_ids;
};

LoadedGraph load_input_graph(const ExperimentConfig& c) {
  const int sources = static_cast<int>(!c.generator.empty()) + static_cast<int>(!c.graph_path.empty()) +
                      static_cast<int>(!c.content_path.empty() || !c.cites_path.empty());
  if (sources != 1) throw ConfigError("give exactly one of --generator, --graph or --content/--cites");
  if (!c.content_path.empty() || !c.cites_path.empty()) {
    if (c.content_path.empty() || c.cites_path.empty())
      throw ConfigError("--content and --cites must be given together");
  }
  LoadedGraph out;
  if (!c.generator.empty()) {
    out.graph = make_generated_graph(c.generator, c.k, c.seed);
  } else if (!c.graph_path.empty()) {
    out.graph = load_graph(c.graph_path);
  } else {
    CitationNetwork net = load_citation_network(c.content_path, c.cites_path);
    if (net.skipped_citations > 0)
      std::cerr << "warning: skipped " << net.skipped_citations
                << " citation lines naming unknown ids\n";
    out.graph = std::move(net.graph);
    out.node_ids = std::move(net.node_ids);
  }
  if (out.node_ids.empty()) {
    for (std::size_t i = 0; i < out.graph.n; ++i) out.node_ids.push_back(std::to_string(i));
  }
  return out;
}

DenseMatrix one_hot(const std::vector<int>& labels, std::size_t k) {
  DenseMatrix s(labels.size(), k);
  for (std::size_t i = 0; i < labels.size(); ++i) s(i, static_cast<std::size_t>(labels[i])) = 1.0;
  return s;
}

}  // namespace

Graph make_generated_graph(const std::string& spec, std::size_t k, std::uint64_t seed) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.empty()) throw ConfigError("empty --generator");
  const std::string& kind = parts[0];
  try {
    if (kind == "sbm") {
      if (parts.size() > 5) throw ConfigError("sbm takes at most 4 parameters");
      const std::size_t communities = parts.size() > 1 ? parse_size(parts[1], "sbm communities") : k;
      const std::size_t npc = parts.size() > 2 ? parse_size(parts[2], "sbm nodes per community") : 20;
      const double p_in = parts.size() > 3 ? parse_double(parts[3], "sbm p_in") : 0.8;
      const double p_out = parts.size() > 4 ? parse_double(parts[4], "sbm p_out") : 0.02;
      return generate_community_graph(communities, npc, p_in, p_out, seed);
    }
    if (kind == "grid") {
      if (parts.size() != 2) throw ConfigError("grid generator expects grid:RxC");
      const std::vector<std::string> dims = split(parts[1], 'x');
      if (dims.size() != 2) throw ConfigError("grid generator expects grid:RxC");
      return generate_grid_graph(parse_size(dims[0], "grid rows"), parse_size(dims[1], "grid cols"));
    }
    if (kind == "ring") {
      if (parts.size() != 2) throw ConfigError("ring generator expects ring:N");
      return generate_ring_graph(parse_size(parts[1], "ring size"));
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("unknown generator '" + kind + "'");
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open '" + tmp.string() + "' for writing");
    f << content;
    f.flush();
    if (!f) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename '" + tmp.string() + "': " + ec.message());
  }
}

int cmd_cluster(const ExperimentConfig& c, std::ostream& out) {
  validate_common(c);
  if (c.method != "mincut" && c.method != "diffpool" && c.method != "spectral")
    throw ConfigError("cluster --method must be mincut, diffpool or spectral");
  if (c.hidden < 1) throw ConfigError("--hidden must be at least 1");
  const LoadedGraph input = load_input_graph(c);
  const Graph& g = input.graph;
  if (c.k > g.n) throw ConfigError("--k exceeds the number of nodes");
  prepare_output(c);
  out << kNmiNote << "\n";

  const auto start = Clock::now();
  std::vector<int> labels;
  DenseMatrix s;
  std::optional<TrainReport> report;
  std::optional<PoolModel> model;
  if (c.method == "spectral") {
    labels = spectral_clustering(g, c.k, c.seed).labels;
    s = one_hot(labels, c.k);
  } else {
    ClusteringConfig cc;
    cc.method = c.method == "mincut" ? ClusteringMethod::kMinCut : ClusteringMethod::kDiffPool;
    cc.k = c.k;
    cc.seed = c.seed;
    cc.temperature = c.temperature;
    cc.hidden = c.hidden;
    cc.early_stop = c.early_stop;
    cc.link_weight = c.link_weight;
    cc.entropy_weight = c.entropy_weight;
    if (c.iterations) cc.iterations = *c.iterations;
    if (c.lr) cc.lr = *c.lr;
    ClusteringResult r = train_clustering(g, cc);
    labels = std::move(r.labels);
    s = std::move(r.assignment.s);
    report = std::move(r.report);
    model = std::move(r.model);
  }
  Metrics m;
  m.seconds = std::chrono::duration<double>(Clock::now() - start).count();

  const NormalizedAdjacency norm = normalize_adjacency(g);
  m.l_c = cut_loss(s, norm);
  m.l_o = ortho_loss(s);
  m.l_u = *m.l_c + *m.l_o;
  if (g.labels) {
    m.nmi = nmi(labels, *g.labels);
    m.cs = completeness_score(labels, *g.labels);
  }

  const std::filesystem::path dir(c.out_dir);
  std::string assignments = "node_id,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    assignments += input.node_ids[i] + "," + std::to_string(labels[i]) + "\n";
  write_file_atomic(dir / "assignments.csv", assignments);
  if (report) {
    write_file_atomic(dir / "report.csv", report->to_csv());
  }
  if (model) save_pool_model(*model, dir / "model.json");
  write_file_atomic(dir / "metrics.json", metrics_json(c, m));

  out << "method=" << c.method << " k=" << c.k << " seed=" << c.seed;
  if (m.nmi) out << " nmi=" << fmt(*m.nmi) << " cs=" << fmt(*m.cs);
  out << " l_c=" << fmt(*m.l_c) << " l_o=" << fmt(*m.l_o) << "\n";
  return kExitOk;
}

int cmd_autoencode(const ExperimentConfig& c, std::ostream& out) {
  validate_common(c);
  if (!(c.keep_ratio > 0.0 && c.keep_ratio <= 1.0)) throw ConfigError("--keep-ratio must be in (0, 1]");
  AutoencoderConfig ac;
  try {
    ac.kind = pool_kind_from_string(c.method);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  const LoadedGraph input = load_input_graph(c);
  const Graph& g = input.graph;
  prepare_output(c);

  ac.keep_ratio = c.keep_ratio;
  ac.seed = c.seed;
  if (c.iterations) ac.iterations = *c.iterations;
  if (c.lr) ac.lr = *c.lr;
  const auto start = Clock::now();
  const AutoencoderResult r = train_autoencoder(g, ac);
  Metrics m;
  m.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  m.mse = r.mse;

  const std::size_t f = g.features.cols();
  std::string csv = "node_id";
  for (std::size_t j = 0; j < f; ++j) csv += ",x" + std::to_string(j);
  for (std::size_t j = 0; j < f; ++j) csv += ",rec" + std::to_string(j);
  csv += "\n";
  for (std::size_t i = 0; i < g.n; ++i) {
    csv += input.node_ids[i];
    for (std::size_t j = 0; j < f; ++j) csv += "," + fmt(g.features(i, j));
    for (std::size_t j = 0; j < f; ++j) csv += "," + fmt(r.x_rec(i, j));
    csv += "\n";
  }
  const std::filesystem::path dir(c.out_dir);
  write_file_atomic(dir / "reconstruction.csv", csv);
  write_file_atomic(dir / "report.csv", r.report.to_csv());
  write_file_atomic(dir / "metrics.json", metrics_json(c, m));

  out << "method=" << c.method << " pooled_nodes=" << r.pooled_nodes << " mse=" << fmt(r.mse) << "\n";
  return kExitOk;
}

int cmd_classify(const ExperimentConfig& c, std::ostream& out) {
  validate_common(c);
  if (c.task != "sbm23") throw ConfigError("unknown --task '" + c.task + "' (expected sbm23)");
  if (c.method != "none" && c.method != "mincut")
    throw ConfigError("classify --method must be none or mincut");
  if (c.folds < 1) throw ConfigError("--folds must be at least 1");
  prepare_output(c);

  std::string accuracies = "fold,train_accuracy,val_accuracy,test_accuracy,best_epoch\n";
  std::string report = "# early stopping on validation accuracy, patience " +
                       std::to_string(ClassifierConfig{}.patience) + " epochs\n" +
                       "fold,epoch,train_loss,l_u,train_accuracy,val_accuracy\n";
  double total = 0.0;
  const auto start = Clock::now();
  for (std::size_t fold = 0; fold < c.folds; ++fold) {
    const std::uint64_t fold_seed = c.seed + fold;
    ClassificationDataset data = make_sbm_classification_dataset(200, 50, 50, fold_seed);
    if (c.shuffle_labels) {
      std::mt19937_64 rng(fold_seed ^ 0x5bd1e995ULL);
      for (auto* split : {&data.train, &data.val, &data.test}) {
        std::vector<int> labels;
        for (const Graph& g : *split) labels.push_back(*g.graph_label);
        std::shuffle(labels.begin(), labels.end(), rng);
        for (std::size_t i = 0; i < split->size(); ++i) (*split)[i].graph_label = labels[i];
      }
    }
    ClassifierConfig cc;
    cc.kind = pool_kind_from_string(c.method);
    cc.k = c.k;
    cc.seed = fold_seed;
    cc.num_classes = 2;
    if (c.iterations) cc.max_epochs = *c.iterations;
    if (c.lr) cc.lr = *c.lr;
    const ClassifierResult r = train_classifier(data.train, data.val, cc);
    const double train_acc = evaluate_accuracy(r.model, data.train);
    const double test_acc = evaluate_accuracy(r.model, data.test);
    total += test_acc;
    accuracies += std::to_string(fold) + "," + fmt(train_acc) + "," + fmt(r.best_val_accuracy) + "," +
                  fmt(test_acc) + "," + std::to_string(r.best_epoch) + "\n";
    for (const EpochRecord& e : r.epochs) {
      report += std::to_string(fold) + "," + std::to_string(e.epoch) + "," + fmt(e.train_loss) + "," +
                fmt(e.l_u) + "," + fmt(e.train_accuracy) + "," + fmt(e.val_accuracy) + "\n";
    }
    out << "fold=" << fold << " test_accuracy=" << fmt(test_acc) << "\n";
  }
  Metrics m;
  m.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  m.accuracy = total / static_cast<double>(c.folds);

  const std::filesystem::path dir(c.out_dir);
  write_file_atomic(dir / "accuracies.csv", accuracies);
  write_file_atomic(dir / "report.csv", report);
  write_file_atomic(dir / "metrics.json", metrics_json(c, m));
  out << "method=" << c.method << " mean_test_accuracy=" << fmt(*m.accuracy) << "\n";
  return kExitOk;
}

int cmd_gradcheck(const ExperimentConfig& c, std::ostream& out) {
  if (c.seeds < 1) throw ConfigError("--seeds must be at least 1");
  constexpr double kTolerance = 1e-5;
  std::vector<std::string> order;
  std::vector<double> worst;
  for (std::size_t i = 0; i < c.seeds; ++i) {
    for (const GradCheckResult& r : run_gradient_checks(c.seed + i)) {
      auto it = std::find(order.begin(), order.end(), r.name);
      if (it == order.end()) {
        order.push_back(r.name);
        worst.push_back(r.max_relative_error);
      } else {
        double& w = worst[static_cast<std::size_t>(it - order.begin())];
        w = std::max(w, r.max_relative_error);
      }
    }
  }
  bool ok = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const bool pass = worst[i] < kTolerance;
    ok = ok && pass;
    char line[128];
    std::snprintf(line, sizeof line, "%-28s %.3e %s\n", order[i].c_str(), worst[i], pass ? "ok" : "FAIL");
    out << line;
  }
  return ok ? kExitOk : kExitRuntime;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  if (const char* env = std::getenv("MINCUT_SEED")) {
    try {
      config.seed = parse_size(env, "MINCUT_SEED");
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }

  CLI::App app{"Graph clustering and pooling experiments"};
  app.require_subcommand(1);

  auto add_graph_flags = [&](CLI::App* sub) {
    sub->add_option("--generator", config.generator, "sbm[:C[:N[:p_in[:p_out]]]], grid:RxC or ring:N");
    sub->add_option("--graph", config.graph_path, "graph JSON file");
    sub->add_option("--content", config.content_path, "citation content file");
    sub->add_option("--cites", config.cites_path, "citation cites file");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--method", config.method, "pooling or clustering method");
    sub->add_option("--k", config.k, "number of clusters");
    sub->add_option("--seed", config.seed, "random seed (default: MINCUT_SEED or 0)");
    sub->add_option("--iterations", config.iterations, "training iterations (epochs for classify)");
    sub->add_option("--lr", config.lr, "Adam learning rate");
    sub->add_option("--temperature", config.temperature, "softmax temperature");
    sub->add_option("--out", config.out_dir, "output directory");
  };

  CLI::App* cluster = app.add_subcommand("cluster", "unsupervised node clustering");
  add_graph_flags(cluster);
  add_common(cluster);
  cluster->add_option("--hidden", config.hidden, "hidden width");
  cluster->add_flag("!--no-early-stop", config.early_stop, "train for all iterations");
  cluster->add_option("--link-weight", config.link_weight, "DiffPool link loss weight");
  cluster->add_option("--entropy-weight", config.entropy_weight, "DiffPool entropy loss weight");

  CLI::App* autoencode = app.add_subcommand("autoencode", "pool/unpool feature reconstruction");
  add_graph_flags(autoencode);
  add_common(autoencode);
  autoencode->add_option("--keep-ratio", config.keep_ratio, "pooled nodes as a fraction of N");

  CLI::App* classify = app.add_subcommand("classify", "graph classification");
  add_common(classify);
  classify->add_option("--task", config.task, "dataset (sbm23)");
  classify->add_option("--folds", config.folds, "independent splits");
  classify->add_flag("--shuffle-labels", config.shuffle_labels, "permute labels in every split (chance-level control)");

  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient checks");
  gradcheck->add_option("--seed", config.seed, "first seed");
  gradcheck->add_option("--seeds", config.seeds, "number of seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  config.subcommand = app.get_subcommands().front()->get_name();
  if (config.subcommand == "classify" && !app.get_subcommands().front()->count("--k")) config.k = 8;

  try {
    if (config.subcommand == "cluster") return cmd_cluster(config, out);
    if (config.subcommand == "autoencode") return cmd_autoencode(config, out);
    if (config.subcommand == "classify") return cmd_classify(config, out);
    return cmd_gradcheck(config, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace mincut::cli
