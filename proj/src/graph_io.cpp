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

#include "mincut/graph_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mincut/errors.hpp"

namespace mincut {

using nlohmann::json;

std::string graph_to_json(const Graph& g) {
  json j;
  j["n"] = g.n;
  json edges = json::array();
  for (const auto& e : g.adjacency.entries()) {
    if (e.row < e.col) edges.push_back({e.row, e.col, e.value});
  }
  j["edges"] = std::move(edges);
  j["feature_dim"] = g.features.cols();
  j["features"] = g.features.storage();
  if (g.labels) j["labels"] = *g.labels;
  if (g.graph_label) j["graph_label"] = *g.graph_label;
  return j.dump();
}

Graph graph_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate it to a line.
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(
                              std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
    throw ParseError(std::string("graph JSON: ") + e.what(), line);
  }
  try {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<SparseEntry> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw DataError("graph JSON: edge must be [i, j, weight]");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    auto values = j.at("features").get<std::vector<double>>();
    std::size_t dim = 0;
    if (j.contains("feature_dim")) {
      dim = j["feature_dim"].get<std::size_t>();
    } else if (n > 0) {
      dim = values.size() / n;
    }
    if (values.size() != n * dim) {
      throw DataError("graph JSON: " + std::to_string(values.size()) + " feature values for " +
                      std::to_string(n) + " nodes of width " + std::to_string(dim));
    }
    std::optional<std::vector<int>> labels;
    if (j.contains("labels") && !j["labels"].is_null()) labels = j["labels"].get<std::vector<int>>();
    Graph g = make_graph(n, edges, DenseMatrix(n, dim, std::move(values)), std::move(labels));
    if (j.contains("graph_label") && !j["graph_label"].is_null()) {
      g.graph_label = j["graph_label"].get<int>();
    }
    return g;
  } catch (const json::exception& e) {
    throw DataError(std::string("graph JSON: ") + e.what());
  }
}

void save_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << graph_to_json(g) << '\n';
  if (!out) throw DataError("failed writing " + path.string());
}

Graph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return graph_from_json(buf.str());
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> tokens;
  std::string t;
  while (is >> t) tokens.push_back(t);
  return tokens;
}

}  // namespace

CitationNetwork load_citation_network(const std::filesystem::path& content,
                                      const std::filesystem::path& cites,
                                      std::optional<std::size_t> expected_nodes) {
  std::ifstream cin_(content);
  if (!cin_) throw DataError("cannot open " + content.string());

  CitationNetwork net;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> class_of_node;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(cin_, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) throw ParseError("content line needs id, flags and class", line_no);
    const std::size_t f = tokens.size() - 2;
    if (rows.empty()) {
      width = f;
    } else if (f != width) {
      throw ParseError("content line has " + std::to_string(f) + " features, expected " +
                           std::to_string(width),
                       line_no);
    }
    std::vector<double> row(f);
    for (std::size_t i = 0; i < f; ++i) {
      const std::string& t = tokens[i + 1];
      if (t == "0") {
        row[i] = 0.0;
      } else if (t == "1") {
        row[i] = 1.0;
      } else {
        throw ParseError("feature flag '" + t + "' is not 0 or 1", line_no);
      }
    }
    if (!index.emplace(tokens.front(), rows.size()).second) {
      throw DataError("duplicate node id '" + tokens.front() + "' at line " +
                      std::to_string(line_no));
    }
    net.node_ids.push_back(tokens.front());
    rows.push_back(std::move(row));
    class_of_node.push_back(tokens.back());
  }
  const std::size_t n = rows.size();
  if (expected_nodes && *expected_nodes != n) {
    throw DataError("content file has " + std::to_string(n) + " nodes, expected " +
                    std::to_string(*expected_nodes));
  }

  std::map<std::string, int> class_ids;
  for (const auto& c : class_of_node) class_ids.emplace(c, 0);
  int next = 0;
  for (auto& [name, id] : class_ids) {
    id = next++;
    net.class_names.push_back(name);
  }
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = class_ids.at(class_of_node[i]);

  DenseMatrix features(n, width);
  for (std::size_t i = 0; i < n; ++i) std::copy(rows[i].begin(), rows[i].end(), features.row(i).begin());

  std::ifstream cites_in(cites);
  if (!cites_in) throw DataError("cannot open " + cites.string());
  std::vector<SparseEntry> edges;
  line_no = 0;
  while (std::getline(cites_in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError("cites line must hold two ids", line_no);
    const auto a = index.find(tokens[0]);
    const auto b = index.find(tokens[1]);
    if (a == index.end() || b == index.end()) {
      ++net.skipped_citations;
      continue;
    }
    edges.push_back({a->second, b->second, 1.0});
  }

  net.graph = make_graph(n, edges, std::move(features), std::move(labels));
  return net;
}

}  // namespace mincut
