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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mincut/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mincut");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = mincut::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mincut_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

json metrics_without_seconds(const fs::path& dir) {
  json j = json::parse(slurp(dir / "metrics.json"));
  j.erase("seconds");
  return j;
}

}  // namespace

TEST_CASE("configuration errors exit with 2") {
  CHECK(invoke({"cluster", "--generator", "sbm", "--k", "1", "--out", fresh_dir("k1").string()}).code == 2);
  CHECK(invoke({"cluster", "--generator", "torus:3", "--k", "2"}).code == 2);
  CHECK(invoke({"cluster", "--generator", "sbm", "--method", "topk"}).code == 2);
  CHECK(invoke({"cluster", "--k", "2"}).code == 2);
  CHECK(invoke({"cluster", "--generator", "ring:8", "--graph", "x.json"}).code == 2);
  CHECK(invoke({"cluster", "--generator", "sbm", "--iterations", "0"}).code == 2);
  CHECK(invoke({"autoencode", "--generator", "ring:8", "--keep-ratio", "1.5"}).code == 2);
  CHECK(invoke({"classify", "--task", "mnist"}).code == 2);
  CHECK(invoke({"bogus"}).code == 2);
  CHECK(invoke({}).code == 2);
}

TEST_CASE("runtime failures exit with 1") {
  const Run r = invoke({"cluster", "--graph", "/nonexistent/graph.json", "--k", "2", "--out",
                        fresh_dir("missing").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("error") != std::string::npos);
}

TEST_CASE("cluster writes every output and is reproducible") {
  const fs::path a = fresh_dir("cluster_a"), b = fresh_dir("cluster_b");
  const std::vector<std::string> base{"cluster", "--generator", "sbm:3:10", "--k", "3", "--method", "mincut",
                                      "--seed", "4", "--iterations", "400"};
  auto args = base;
  args.insert(args.end(), {"--out", a.string()});
  const Run r = invoke(args);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("sqrt(H(pred) * H(truth))") != std::string::npos);
  for (const char* f : {"assignments.csv", "metrics.json", "report.csv", "config.json", "model.json"})
    CHECK(fs::exists(a / f));
  for (const auto& entry : fs::directory_iterator(a)) CHECK(entry.path().extension() != ".tmp");

  const json m = json::parse(slurp(a / "metrics.json"));
  for (const char* key : {"method", "k", "seed", "nmi", "cs", "l_c", "l_o", "l_u", "mse", "accuracy", "seconds"})
    CHECK(m.contains(key));
  CHECK(m["mse"].is_null());
  CHECK(m["accuracy"].is_null());
  CHECK(m["nmi"].is_number());
  const json cfg = json::parse(slurp(a / "config.json"));
  CHECK(cfg["lr"].is_null());
  CHECK(cfg["iterations"] == 400);
  CHECK(slurp(a / "assignments.csv").rfind("node_id,cluster\n0,", 0) == 0);

  args = base;
  args.insert(args.end(), {"--out", b.string()});
  REQUIRE(invoke(args).code == 0);
  CHECK(metrics_without_seconds(a) == metrics_without_seconds(b));
  CHECK(slurp(a / "assignments.csv") == slurp(b / "assignments.csv"));
}

TEST_CASE("spectral cluster on a saved graph") {
  const fs::path dir = fresh_dir("spectral");
  REQUIRE(invoke({"cluster", "--generator", "ring:12", "--k", "2", "--method", "spectral", "--out", dir.string()})
              .code == 0);
  const json m = json::parse(slurp(dir / "metrics.json"));
  CHECK(m["nmi"].is_null());
  CHECK(m["l_c"].is_number());
  CHECK(!fs::exists(dir / "report.csv"));
}

TEST_CASE("seed defaults to MINCUT_SEED") {
  const fs::path dir = fresh_dir("envseed");
  ::setenv("MINCUT_SEED", "42", 1);
  const int code = invoke({"cluster", "--generator", "ring:10", "--k", "2", "--method", "spectral", "--out",
                           dir.string()})
                       .code;
  ::unsetenv("MINCUT_SEED");
  REQUIRE(code == 0);
  CHECK(json::parse(slurp(dir / "config.json"))["seed"] == 42);
}

TEST_CASE("autoencode writes the reconstruction") {
  const fs::path dir = fresh_dir("autoencode");
  REQUIRE(invoke({"autoencode", "--generator", "ring:16", "--method", "topk", "--iterations", "50", "--out",
                  dir.string()})
              .code == 0);
  CHECK(slurp(dir / "reconstruction.csv").rfind("node_id,x0,x1,rec0,rec1\n", 0) == 0);
  CHECK(json::parse(slurp(dir / "metrics.json"))["mse"].is_number());
}

TEST_CASE("classify writes accuracies") {
  const fs::path dir = fresh_dir("classify");
  REQUIRE(invoke({"classify", "--method", "none", "--iterations", "3", "--out", dir.string()}).code == 0);
  CHECK(slurp(dir / "accuracies.csv").rfind("fold,train_accuracy,val_accuracy,test_accuracy", 0) == 0);
  CHECK(slurp(dir / "report.csv").rfind("# early stopping", 0) == 0);
  CHECK(json::parse(slurp(dir / "metrics.json"))["accuracy"].is_number());
}

TEST_CASE("gradcheck passes") {
  const Run r = invoke({"gradcheck", "--seed", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("unsupervised_loss_model") != std::string::npos);
}

TEST_CASE("generator specs") {
  CHECK(mincut::cli::make_generated_graph("sbm", 4, 1).n == 80);
  CHECK(mincut::cli::make_generated_graph("sbm:2:5:1:0", 9, 1).edge_count() == 20);
  CHECK(mincut::cli::make_generated_graph("grid:3x4", 2, 1).n == 12);
  CHECK(mincut::cli::make_generated_graph("ring:7", 2, 1).n == 7);
  CHECK_THROWS_AS(mincut::cli::make_generated_graph("grid:3", 2, 1), mincut::cli::ConfigError);
  CHECK_THROWS_AS(mincut::cli::make_generated_graph("sbm:2:5:0.1:0.5", 2, 1), mincut::cli::ConfigError);
}
