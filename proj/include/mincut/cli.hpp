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

// Command-line experiments. Every subcommand writes config.json plus its
// result files into the output directory.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "mincut/graph.hpp"

namespace mincut::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

struct ExperimentConfig {
  std::string subcommand;
  // Graph source: exactly one of generator, graph_path or content/cites.
  std::string generator;
  std::string graph_path;
  std::string content_path;
  std::string cites_path;
  std::string method = "mincut";
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::optional<int> iterations;
  std::optional<double> lr;
  double temperature = 1.0;
  std::string out_dir = "out";
  // cluster
  std::size_t hidden = 16;
  bool early_stop = true;
  double link_weight = 1.0;
  double entropy_weight = 1.0;
  // autoencode
  double keep_ratio = 0.25;
  // classify
  std::string task = "sbm23";
  std::size_t folds = 1;
  bool shuffle_labels = false;
  // gradcheck
  std::size_t seeds = 1;
};

// Thrown for invalid flag combinations; mapped to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds a generated graph from `sbm[:C[:N[:p_in[:p_out]]]]`, `grid:RxC` or
// `ring:N`. SBM defaults: C = k communities of N = 20 nodes, p_in = 0.8,
// p_out = 0.02.
Graph make_generated_graph(const std::string& spec, std::size_t k, std::uint64_t seed);

// Writes `content` to `path` through a temporary file and a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

int cmd_cluster(const ExperimentConfig& config, std::ostream& out);
int cmd_autoencode(const ExperimentConfig& config, std::ostream& out);
int cmd_classify(const ExperimentConfig& config, std::ostream& out);
int cmd_gradcheck(const ExperimentConfig& config, std::ostream& out);

// Parses argv, dispatches, and maps failures to exit codes.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace mincut::cli
