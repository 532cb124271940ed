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

#include "mincut/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "mincut/errors.hpp"
#include "mincut/metrics.hpp"
#include "mincut/optim.hpp"

namespace mincut {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<DenseMatrix> collect_gradients(const Gradients& grads, const std::vector<Var>& vars) {
  std::vector<DenseMatrix> out;
  out.reserve(vars.size());
  for (const Var& v : vars) out.push_back(grads[v]);
  return out;
}

// Tracks the best loss seen and reports when `patience` iterations pass
// without an improvement of at least `min_delta`.
class Plateau {
 public:
  Plateau(int patience, double min_delta) : patience_(patience), min_delta_(min_delta) {}

  bool update(int iter, double loss) {
    if (loss < best_ - min_delta_) {
      best_ = loss;
      best_iter_ = iter;
      return false;
    }
    return iter - best_iter_ >= patience_;
  }

 private:
  int patience_;
  double min_delta_;
  double best_ = std::numeric_limits<double>::infinity();
  int best_iter_ = 0;
};

void check_common(const Graph& g, std::size_t k, int iterations) {
  g.validate();
  if (k < 2) throw ParameterError("k must be >= 2");
  if (k > g.n) throw ParameterError("k exceeds the node count");
  if (iterations < 1) throw ParameterError("iterations must be >= 1");
}

}  // namespace

std::string TrainReport::to_csv(bool include_seconds) const {
  std::ostringstream os;
  for (const auto& note : notes) os << "# " << note << '\n';
  os << "iter,l_c,l_o,l_u,task_loss,nmi";
  if (include_seconds) os << ",seconds";
  os << '\n';
  for (const auto& r : records) {
    os << r.iter << ',' << format_double(r.l_c) << ',' << format_double(r.l_o) << ','
       << format_double(r.l_u) << ',' << (r.task_loss ? format_double(*r.task_loss) : "") << ','
       << (r.nmi ? format_double(*r.nmi) : "");
    if (include_seconds) os << ',' << format_double(r.seconds);
    os << '\n';
  }
  return os.str();
}

// ---- clustering -----------------------------------------------------------

namespace {

ClusteringResult train_mincut_clustering(const Graph& g, const ClusteringConfig& config) {
  std::mt19937_64 rng(config.seed);
  PoolModelConfig mc;
  mc.in_features = g.features.cols();
  mc.k = config.k;
  mc.gnn_widths = {config.hidden};
  mc.gnn_activation = Activation::kElu;
  mc.mlp_hidden = {config.hidden};
  mc.mlp_hidden_activation = Activation::kLinear;
  mc.temperature = config.temperature;
  PoolModel model = make_pool_model(mc, rng);

  const NormalizedAdjacency norm = normalize_adjacency(g);
  std::vector<DenseMatrix*> params = parameters(model);
  AdamState adam({.lr = config.lr});
  Plateau plateau(config.patience, config.min_delta);
  ClusteringResult result;
  result.report.notes.push_back("method=mincut k=" + std::to_string(config.k) +
                                " seed=" + std::to_string(config.seed));
  const auto start = Clock::now();

  for (int it = 0; it < config.iterations; ++it) {
    Tape tape;
    ParameterBinder binder(tape);
    const BoundPoolModel bound = bind(binder, model);
    const Var s = compute_assignments(tape.constant(g.features), norm.matrix, bound);
    const Var lc = cut_loss(s, norm);
    const Var lo = ortho_loss(s);
    const Var lu = add(lc, lo);
    const Gradients grads = tape.backward(lu);

    IterationRecord rec;
    rec.iter = it;
    rec.l_c = lc.value().scalar();
    rec.l_o = lo.value().scalar();
    rec.l_u = lu.value().scalar();
    if (g.labels) rec.nmi = nmi(hard_labels(s.value()), *g.labels);
    rec.seconds = seconds_since(start);
    result.report.records.push_back(rec);

    adam.step(params, collect_gradients(grads, binder.variables()));
    if (config.early_stop && plateau.update(it, rec.l_u)) break;
  }

  result.assignment = compute_assignments(g.features, norm, model);
  result.labels = hard_labels(result.assignment.s);
  result.model = std::move(model);
  return result;
}

ClusteringResult train_diffpool_clustering(const Graph& g, const ClusteringConfig& config) {
  std::mt19937_64 rng(config.seed);
  DiffPoolParams model = make_diffpool_params(g.features.cols(), config.hidden, config.k, rng);
  const NormalizedAdjacency norm = normalize_adjacency(g);
  const DenseMatrix a_dense = norm.matrix.densify();
  std::vector<DenseMatrix*> params = parameters(model);
  AdamState adam({.lr = config.lr});
  Plateau plateau(config.patience, config.min_delta);
  ClusteringResult result;
  result.report.notes.push_back("method=diffpool k=" + std::to_string(config.k) +
                                " seed=" + std::to_string(config.seed));
  const auto start = Clock::now();

  auto assignments = [&](Tape& tape, ParameterBinder& binder) {
    const BoundDiffPool bound = bind(binder, model);
    return diffpool_forward(tape.constant(g.features), norm.matrix, bound).s;
  };

  for (int it = 0; it < config.iterations; ++it) {
    Tape tape;
    ParameterBinder binder(tape);
    const Var s = assignments(tape, binder);
    const DiffPoolLosses dl = diffpool_losses(s, a_dense);
    const Var loss = add(scale(dl.link, config.link_weight), scale(dl.entropy, config.entropy_weight));
    const Gradients grads = tape.backward(loss);

    IterationRecord rec;
    rec.iter = it;
    rec.l_c = cut_loss(s.value(), norm);
    rec.l_o = ortho_loss(s.value());
    rec.l_u = rec.l_c + rec.l_o;
    rec.task_loss = loss.value().scalar();
    if (g.labels) rec.nmi = nmi(hard_labels(s.value()), *g.labels);
    rec.seconds = seconds_since(start);
    result.report.records.push_back(rec);

    adam.step(params, collect_gradients(grads, binder.variables()));
    if (config.early_stop && plateau.update(it, *rec.task_loss)) break;
  }

  Tape tape;
  ParameterBinder binder(tape);
  result.assignment = {assignments(tape, binder).value()};
  result.labels = hard_labels(result.assignment.s);
  return result;
}

}  // namespace

ClusteringResult train_clustering(const Graph& g, const ClusteringConfig& config) {
  check_common(g, config.k, config.iterations);
  switch (config.method) {
    case ClusteringMethod::kMinCut: return train_mincut_clustering(g, config);
    case ClusteringMethod::kDiffPool: return train_diffpool_clustering(g, config);
  }
  throw ParameterError("unknown clustering method");
}

// ---- autoencoder ----------------------------------------------------------

std::string to_string(PoolKind kind) {
  switch (kind) {
    case PoolKind::kNone: return "none";
    case PoolKind::kMinCut: return "mincut";
    case PoolKind::kTopK: return "topk";
    case PoolKind::kDiffPool: return "diffpool";
  }
  return "none";
}

PoolKind pool_kind_from_string(const std::string& name) {
  if (name == "none") return PoolKind::kNone;
  if (name == "mincut") return PoolKind::kMinCut;
  if (name == "topk") return PoolKind::kTopK;
  if (name == "diffpool") return PoolKind::kDiffPool;
  throw ParameterError("unknown pooling method '" + name + "'");
}

AutoencoderResult train_autoencoder(const Graph& g, const AutoencoderConfig& config) {
  g.validate();
  if (config.iterations < 1) throw ParameterError("iterations must be >= 1");
  if (!(config.keep_ratio > 0.0 && config.keep_ratio <= 1.0)) {
    throw ParameterError("keep ratio must be in (0, 1]");
  }
  const std::size_t n = g.n;
  const std::size_t f = g.features.cols();
  const std::size_t h = config.hidden;
  const std::size_t k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(config.keep_ratio * static_cast<double>(n))));
  if ((config.kind == PoolKind::kMinCut || config.kind == PoolKind::kDiffPool) && k < 2) {
    throw ParameterError("autoencoder: keep ratio leaves fewer than 2 clusters");
  }

  std::mt19937_64 rng(config.seed);
  MpLayerParams encoder = make_mp_layer(f, h, Activation::kRelu, rng);
  MpLayerParams decoder = make_mp_layer(h, f, Activation::kLinear, rng);
  PoolModel mincut_head;
  TopKParams topk;
  MpLayerParams diffpool_assign;
  std::vector<DenseMatrix*> params;
  append_parameters(encoder, params);
  append_parameters(decoder, params);
  switch (config.kind) {
    case PoolKind::kMinCut: {
      PoolModelConfig mc;
      mc.in_features = h;
      mc.k = k;
      mc.gnn_widths = {};
      mc.mlp_hidden = {h};
      mc.mlp_hidden_activation = Activation::kRelu;
      mincut_head = make_pool_model(mc, rng);
      for (DenseMatrix* p : parameters(mincut_head)) params.push_back(p);
      break;
    }
    case PoolKind::kTopK:
      topk = make_topk_params(h, rng);
      params.push_back(&topk.p);
      break;
    case PoolKind::kDiffPool:
      diffpool_assign = make_mp_layer(h, k, Activation::kLinear, rng);
      append_parameters(diffpool_assign, params);
      break;
    case PoolKind::kNone: break;
  }

  const NormalizedAdjacency norm = normalize_adjacency(g);
  const DenseMatrix a_dense = config.kind == PoolKind::kDiffPool ? norm.matrix.densify() : DenseMatrix();
  const double inv_count = 1.0 / static_cast<double>(n * f);
  AdamState adam({.lr = config.lr});
  AutoencoderResult result;
  result.pooled_nodes = config.kind == PoolKind::kNone ? n : k;
  result.report.notes.push_back("autoencoder method=" + to_string(config.kind) +
                                " pooled_nodes=" + std::to_string(result.pooled_nodes));
  const auto start = Clock::now();

  struct Forward {
    Var x_rec;
    Var aux;  // invalid when the method has no auxiliary loss
    Var l_c, l_o;
  };
  auto forward = [&](Tape& tape, ParameterBinder& binder) {
    const BoundMpLayer enc = binder.bind(encoder);
    const BoundMpLayer dec = binder.bind(decoder);
    Forward out;
    const Var x = tape.constant(g.features);
    const Var hidden = mp_forward(x, norm.matrix, enc);
    Var up = hidden;
    switch (config.kind) {
      case PoolKind::kMinCut: {
        const BoundPoolModel head = bind(binder, mincut_head);
        const Var s = assignment_head(hidden, head);
        const PooledVars pooled = coarsen(s, norm.matrix, hidden);
        up = unpool(s, pooled.x_pool, pooled.a_pool).x_rec;
        out.l_c = cut_loss(s, norm);
        out.l_o = ortho_loss(s);
        out.aux = add(out.l_c, out.l_o);
        break;
      }
      case PoolKind::kTopK: {
        const Var p = binder.bind(topk.p);
        const TopKPooled pooled = topk_pool(hidden, norm.matrix, p, k);
        up = topk_unpool(pooled.kept, pooled.x_pool, n);
        break;
      }
      case PoolKind::kDiffPool: {
        const BoundMpLayer assign = binder.bind(diffpool_assign);
        const Var s = softmax_rows(mp_forward(hidden, norm.matrix, assign));
        up = matmul(s, matmul(transpose(s), hidden));
        const DiffPoolLosses dl = diffpool_losses(s, a_dense);
        out.aux = add(dl.link, dl.entropy);
        break;
      }
      case PoolKind::kNone: break;
    }
    out.x_rec = mp_forward(up, norm.matrix, dec);
    return out;
  };

  for (int it = 0; it < config.iterations; ++it) {
    Tape tape;
    ParameterBinder binder(tape);
    const Forward fw = forward(tape, binder);
    const Var mse_var = scale(sum_squares(subtract(fw.x_rec, tape.constant(g.features))), inv_count);
    const Var loss = fw.aux.valid() ? add(mse_var, fw.aux) : mse_var;
    const Gradients grads = tape.backward(loss);

    IterationRecord rec;
    rec.iter = it;
    if (fw.l_c.valid()) {
      rec.l_c = fw.l_c.value().scalar();
      rec.l_o = fw.l_o.value().scalar();
      rec.l_u = rec.l_c + rec.l_o;
    }
    rec.task_loss = mse_var.value().scalar();
    rec.seconds = seconds_since(start);
    result.report.records.push_back(rec);

    adam.step(params, collect_gradients(grads, binder.variables()));
  }

  Tape tape;
  ParameterBinder binder(tape);
  result.x_rec = forward(tape, binder).x_rec.value();
  result.mse = mse(result.x_rec, g.features);
  return result;
}

// ---- classification -------------------------------------------------------

std::vector<DenseMatrix*> parameters(ClassifierModel& model) {
  std::vector<DenseMatrix*> out;
  append_parameters(model.mp_in, out);
  if (model.kind == PoolKind::kMinCut) {
    for (DenseMatrix* p : parameters(model.pool)) out.push_back(p);
  }
  append_parameters(model.mp_out, out);
  append_parameters(model.readout, out);
  return out;
}

namespace {

struct ClassifierForward {
  Var logits;
  Var l_u;  // invalid without pooling
};

ClassifierForward classifier_forward(Tape& tape, ParameterBinder& binder,
                                     const ClassifierModel& model, const Graph& g,
                                     const NormalizedAdjacency& norm) {
  const BoundMpLayer mp_in = binder.bind(model.mp_in);
  BoundPoolModel head;
  if (model.kind == PoolKind::kMinCut) head = bind(binder, model.pool);
  const BoundMpLayer mp_out = binder.bind(model.mp_out);
  const BoundDenseLayer readout = binder.bind(model.readout);

  ClassifierForward out;
  const Var x1 = mp_forward(tape.constant(g.features), norm.matrix, mp_in);
  Var x2;
  if (model.kind == PoolKind::kMinCut) {
    const Var s = assignment_head(x1, head);
    const PooledVars pooled = coarsen(s, norm.matrix, x1);
    x2 = mp_forward(pooled.x_pool, pooled.a_tilde_pool, mp_out);
    out.l_u = unsupervised_loss(s, norm);
  } else {
    x2 = mp_forward(x1, norm.matrix, mp_out);
  }
  out.logits = dense_forward(mean_rows(x2), readout);
  return out;
}

int argmax_row(const DenseMatrix& logits) {
  const auto r = logits.row(0);
  return static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
}

}  // namespace

std::vector<int> predict(const ClassifierModel& model, const std::vector<Graph>& graphs) {
  std::vector<int> out;
  out.reserve(graphs.size());
  for (const Graph& g : graphs) {
    Tape tape;
    ParameterBinder binder(tape);
    const NormalizedAdjacency norm = normalize_adjacency(g);
    out.push_back(argmax_row(classifier_forward(tape, binder, model, g, norm).logits.value()));
  }
  return out;
}

double evaluate_accuracy(const ClassifierModel& model, const std::vector<Graph>& graphs) {
  if (graphs.empty()) return 0.0;
  std::vector<int> truth;
  for (const Graph& g : graphs) {
    if (!g.graph_label) throw DataError("graph without graph_label");
    truth.push_back(*g.graph_label);
  }
  return accuracy(predict(model, graphs), truth);
}

ClassifierResult train_classifier(const std::vector<Graph>& train, const std::vector<Graph>& val,
                                  const ClassifierConfig& config) {
  if (train.empty()) throw ParameterError("classifier: empty training set");
  if (config.kind != PoolKind::kNone && config.kind != PoolKind::kMinCut) {
    throw ParameterError("classifier supports pooling 'none' or 'mincut'");
  }
  if (config.batch_size == 0 || config.max_epochs < 1 || config.patience < 1) {
    throw ParameterError("classifier: batch size, epochs and patience must be positive");
  }
  int max_label = 0;
  for (const auto* set : {&train, &val}) {
    for (const Graph& g : *set) {
      if (!g.graph_label || *g.graph_label < 0) throw DataError("graph without a valid graph_label");
      max_label = std::max(max_label, *g.graph_label);
    }
  }
  const std::size_t classes =
      config.num_classes.value_or(static_cast<std::size_t>(max_label) + 1);
  if (classes <= static_cast<std::size_t>(max_label)) {
    throw ParameterError("classifier: num_classes smaller than the label range");
  }
  const std::size_t f = train.front().features.cols();
  const std::size_t h = config.hidden;

  std::mt19937_64 rng(config.seed);
  ClassifierModel model;
  model.kind = config.kind;
  model.num_classes = classes;
  model.mp_in = make_mp_layer(f, h, Activation::kRelu, rng);
  if (config.kind == PoolKind::kMinCut) {
    PoolModelConfig mc;
    mc.in_features = h;
    mc.k = config.k;
    mc.gnn_widths = {};
    mc.mlp_hidden = {h};
    mc.mlp_hidden_activation = Activation::kRelu;
    model.pool = make_pool_model(mc, rng);
  }
  model.mp_out = make_mp_layer(h, h, Activation::kRelu, rng);
  model.readout = make_dense_layer(h, classes, rng);

  std::vector<NormalizedAdjacency> norms;
  norms.reserve(train.size());
  for (const Graph& g : train) {
    if (config.kind == PoolKind::kMinCut && g.n < config.k) {
      throw ParameterError("classifier: a training graph has fewer nodes than k");
    }
    norms.push_back(normalize_adjacency(g));
  }

  std::vector<DenseMatrix*> params = parameters(model);
  // Biases are the 1-row parameters; they are excluded from the L2 penalty.
  std::vector<bool> decayed;
  for (const DenseMatrix* p : params) decayed.push_back(p->rows() != 1);

  AdamState adam({.lr = config.lr});
  ClassifierResult result;
  result.model = model;
  result.best_val_accuracy = -1.0;
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  int stale = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord rec;
    rec.epoch = epoch;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double inv_b = 1.0 / static_cast<double>(end - start);
      std::vector<DenseMatrix> grads;
      for (const DenseMatrix* p : params) grads.emplace_back(p->rows(), p->cols());
      // Per-graph passes, summed in batch order.
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t idx = order[b];
        const Graph& g = train[idx];
        Tape tape;
        ParameterBinder binder(tape);
        const ClassifierForward fw = classifier_forward(tape, binder, model, g, norms[idx]);
        const int label = *g.graph_label;
        Var loss = softmax_cross_entropy(fw.logits, std::span<const int>(&label, 1));
        if (fw.l_u.valid()) {
          rec.l_u += fw.l_u.value().scalar();
          loss = add(loss, fw.l_u);
        }
        rec.train_loss += loss.value().scalar();
        const Gradients gr = tape.backward(loss);
        const auto& vars = binder.variables();
        for (std::size_t i = 0; i < vars.size(); ++i) grads[i] += scale(gr[vars[i]], inv_b);
      }
      for (std::size_t i = 0; i < params.size(); ++i) {
        if (decayed[i]) grads[i] += scale(*params[i], 2.0 * config.l2);
      }
      adam.step(params, grads);
    }
    rec.train_loss /= static_cast<double>(train.size());
    rec.l_u /= static_cast<double>(train.size());
    rec.train_accuracy = evaluate_accuracy(model, train);
    rec.val_accuracy = val.empty() ? rec.train_accuracy : evaluate_accuracy(model, val);
    result.epochs.push_back(rec);

    if (rec.val_accuracy > result.best_val_accuracy) {
      result.best_val_accuracy = rec.val_accuracy;
      result.best_epoch = epoch;
      result.model = model;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  return result;
}

ClassificationDataset make_sbm_classification_dataset(std::size_t n_train, std::size_t n_val,
                                                      std::size_t n_test, std::uint64_t seed,
                                                      std::size_t nodes_per_community,
                                                      double p_in, double p_out) {
  std::mt19937_64 rng(seed);
  auto make = [&](std::size_t count) {
    std::vector<Graph> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const int label = static_cast<int>(i % 2);
      Graph g = generate_community_graph(static_cast<std::size_t>(2 + label), nodes_per_community,
                                         p_in, p_out, rng());
      g.graph_label = label;
      out.push_back(std::move(g));
    }
    return out;
  };
  ClassificationDataset d;
  d.train = make(n_train);
  d.val = make(n_val);
  d.test = make(n_test);
  return d;
}

}  // namespace mincut
