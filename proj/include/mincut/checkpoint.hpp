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

#include <filesystem>
#include <string>

#include "mincut/pool.hpp"

namespace mincut {

// JSON checkpoint: architecture hyperparameters plus row-major weights.
//   {"k": K, "temperature": t, "mlp_hidden_activation": "linear",
//    "gnn": [{"activation": "elu", "theta_m": M, "theta_s": M}, ...],
//    "mlp": [{"weight": M, "bias": M}, ...]}
// where M = {"rows": r, "cols": c, "data": [...]}. Round-trips exactly.
std::string pool_model_to_json(const PoolModel& model);
PoolModel pool_model_from_json(const std::string& text);

void save_pool_model(const PoolModel& model, const std::filesystem::path& path);
PoolModel load_pool_model(const std::filesystem::path& path);

}  // namespace mincut
