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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mincut/baselines.hpp"
#include "mincut/graph.hpp"
#include "mincut/layers.hpp"
#include "mincut/pool.hpp"

namespace mincut {

struct IterationRecord {
  int iter = 0;
  double l_c = 0.0;
  double l_o = 0.0;
  double l_u = 0.0;
  std::optional<double> task_loss;
  std::optional<double> nmi;
  double seconds = 0.0;  // wall time since training started
};

struct TrainReport {
  std::vector<IterationRecord> records;
  // Lines written as `# ...` comments above the CSV header.
  std::vector<std::string> notes;

  // iter,l_c,l_o,l_u,task_loss,nmi,seconds; empty cells for absent values.
  std::string to_csv(bool include_seconds = true) const;
};

// ---- unsupervised clustering ----------------------------------------------

enum class ClusteringMethod { kMinCut, kDiffPool };

struct ClusteringConfig {
  ClusteringMethod method = ClusteringMethod::kMinCut;
  std::size_t k = 2;
  int iterations = 10000;
  double lr = 5e-4;
  std::uint64_t seed = 0;
  double temperature = 1.0;
  std::size_t hidden = 16;
  // Stop once L_u (or the DiffPool loss) has not improved by `min_delta`
  // within `patience` iterations.
  bool early_stop = true;
  int patience = 500;
  double min_delta = 1e-6;
  // DiffPool loss weights.
  double link_weight = 1.0;
  double entropy_weight = 1.0;
};

struct ClusteringResult {
  std::optional<PoolModel> model;  // set for MinCut
  SoftAssignment assignment;
  std::vector<int> labels;  // row argmax of S
  TrainReport report;
};

// Full-graph Adam on L_u (MinCut) or link + entropy (DiffPool). Records
// L_c, L_o and L_u of the current S every iteration, plus NMI when the graph
// has labels.
ClusteringResult train_clustering(const Graph& g, const ClusteringConfig& config);

// ---- autoencoder ----------------------------------------------------------

enum class PoolKind { kNone, kMinCut, kTopK, kDiffPool };

std::string to_string(PoolKind kind);
// "none", "mincut", "topk", "diffpool"; throws ParameterError otherwise.
PoolKind pool_kind_from_string(const std::string& name);

struct AutoencoderConfig {
  PoolKind kind = PoolKind::kMinCut;
  double keep_ratio = 0.25;
  int iterations = 5000;
  double lr = 5e-3;
  std::uint64_t seed = 0;
  std::size_t hidden = 32;
};

struct AutoencoderResult {
  DenseMatrix x_rec;
  double mse = 0.0;
  std::size_t pooled_nodes = 0;
  TrainReport report;
};

// MP -> pool -> unpool -> MP, trained on ||X - X_rec||^2 (mean) plus the
// pooling method's auxiliary loss.
AutoencoderResult train_autoencoder(const Graph& g, const AutoencoderConfig& config);

// ---- graph classification -------------------------------------------------

struct ClassifierConfig {
  PoolKind kind = PoolKind::kMinCut;  // kNone or kMinCut
  std::size_t hidden = 16;
  std::size_t k = 8;  // clusters in the pooling layer
  int max_epochs = 200;
  int patience = 50;
  std::size_t batch_size = 32;
  double lr = 1e-3;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  // Defaults to 1 + the largest label in the training and validation sets.
  std::optional<std::size_t> num_classes;
};

struct ClassifierModel {
  PoolKind kind = PoolKind::kMinCut;
  MpLayerParams mp_in;
  PoolModel pool;  // assignment head only (no MP layers); unused for kNone
  MpLayerParams mp_out;
  DenseLayerParams readout;
  std::size_t num_classes = 0;
};

std::vector<DenseMatrix*> parameters(ClassifierModel& model);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double l_u = 0.0;  // mean over the epoch; 0 without pooling
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
};

struct ClassifierResult {
  ClassifierModel model;  // parameters from the best validation epoch
  int best_epoch = 0;
  double best_val_accuracy = 0.0;
  std::vector<EpochRecord> epochs;
};

// Mini-batch Adam on cross-entropy + L_u + l2 * ||W||^2 with early stopping
// on validation accuracy. Graphs must carry graph_label.
ClassifierResult train_classifier(const std::vector<Graph>& train, const std::vector<Graph>& val,
                                  const ClassifierConfig& config);

std::vector<int> predict(const ClassifierModel& model, const std::vector<Graph>& graphs);
double evaluate_accuracy(const ClassifierModel& model, const std::vector<Graph>& graphs);

struct ClassificationDataset {
  std::vector<Graph> train;
  std::vector<Graph> val;
  std::vector<Graph> test;
};

// SBM graphs with 2 (label 0) or 3 (label 1) communities of
// `nodes_per_community` nodes; features are the generator's 2-D layout.
// Labels alternate so every split is balanced.
ClassificationDataset make_sbm_classification_dataset(std::size_t n_train, std::size_t n_val,
                                                      std::size_t n_test, std::uint64_t seed,
                                                      std::size_t nodes_per_community = 10,
                                                      double p_in = 0.7, double p_out = 0.05);

}  // namespace mincut
