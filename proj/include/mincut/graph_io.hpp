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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mincut/graph.hpp"

namespace mincut {

// Native format: a JSON object
//   {"n": N, "edges": [[i, j, w], ...], "features": [row-major values],
//    "feature_dim": F, "labels": [...], "graph_label": c}
// `labels` and `graph_label` are optional. Each undirected edge is written
// once with i < j. Doubles round-trip exactly.
void save_graph(const Graph& g, const std::filesystem::path& path);
Graph load_graph(const std::filesystem::path& path);

std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

struct CitationNetwork {
  Graph graph;
  std::vector<std::string> node_ids;     // original id per node, file order
  std::vector<std::string> class_names;  // label i -> name, sorted
  std::size_t skipped_citations = 0;     // cites lines naming unknown ids
};

// Reads the per-line content format `<id> <F binary flags> <class>` and a
// cites file of `<id> <id>` pairs. Citations are symmetrized and self-cites
// dropped. Throws ParseError (with line number) on malformed lines and
// DataError on duplicate ids or when `expected_nodes` does not match.
CitationNetwork load_citation_network(const std::filesystem::path& content,
                                      const std::filesystem::path& cites,
                                      std::optional<std::size_t> expected_nodes = std::nullopt);

}  // namespace mincut
