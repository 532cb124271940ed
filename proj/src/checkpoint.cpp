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

#include "mincut/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mincut/errors.hpp"

namespace mincut {

using nlohmann::json;

namespace {

json matrix_to_json(const DenseMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.storage()}};
}

DenseMatrix matrix_from_json(const json& j) {
  return DenseMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                     j.at("data").get<std::vector<double>>());
}

}  // namespace

std::string pool_model_to_json(const PoolModel& model) {
  json j;
  j["k"] = model.k;
  j["temperature"] = model.temperature;
  j["mlp_hidden_activation"] = to_string(model.mlp.hidden_activation);
  json gnn = json::array();
  for (const auto& layer : model.gnn) {
    gnn.push_back({{"activation", to_string(layer.activation)},
                   {"theta_m", matrix_to_json(layer.theta_m)},
                   {"theta_s", matrix_to_json(layer.theta_s)}});
  }
  j["gnn"] = std::move(gnn);
  json mlp = json::array();
  for (const auto& layer : model.mlp.layers) {
    mlp.push_back({{"weight", matrix_to_json(layer.weight)}, {"bias", matrix_to_json(layer.bias)}});
  }
  j["mlp"] = std::move(mlp);
  return j.dump(1);
}

PoolModel pool_model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    PoolModel model;
    model.k = j.at("k").get<std::size_t>();
    model.temperature = j.at("temperature").get<double>();
    model.mlp.hidden_activation =
        activation_from_string(j.at("mlp_hidden_activation").get<std::string>());
    for (const auto& layer : j.at("gnn")) {
      MpLayerParams p;
      p.activation = activation_from_string(layer.at("activation").get<std::string>());
      p.theta_m = matrix_from_json(layer.at("theta_m"));
      p.theta_s = matrix_from_json(layer.at("theta_s"));
      model.gnn.push_back(std::move(p));
    }
    for (const auto& layer : j.at("mlp")) {
      model.mlp.layers.push_back(
          {matrix_from_json(layer.at("weight")), matrix_from_json(layer.at("bias"))});
    }
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model checkpoint: ") + e.what());
  }
}

void save_pool_model(const PoolModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << pool_model_to_json(model) << '\n';
}

PoolModel load_pool_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return pool_model_from_json(buf.str());
}

}  // namespace mincut
