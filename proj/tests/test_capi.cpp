/*
  Copyright (c) 2026 The walkpool-lp authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#include <walkpool/walkpool.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const char* base = std::getenv("WALKPOOL_TEST_TMP");
  fs::path dir = (base ? fs::path(base) : fs::temp_directory_path() / "walkpool_capi") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Four 5-cliques in a ring, written with sparse file ids (100 + 3v).
fs::path write_clique_ring(const fs::path& dir) {
  std::ofstream out(dir / "ring.txt");
  out << "# four cliques\n";
  for (int c = 0; c < 4; ++c) {
    for (int a = 0; a < 5; ++a)
      for (int b = a + 1; b < 5; ++b) out << 100 + 3 * (5 * c + a) << ' ' << 100 + 3 * (5 * c + b) << '\n';
    out << 100 + 3 * (5 * c) << ' ' << 100 + 3 * ((5 * c + 7) % 20) << '\n';
  }
  return dir / "ring.txt";
}

wp_config* small_config() {
  wp_config* c = nullptr;
  REQUIRE(wp_config_create(&c) == WP_OK);
  const char* kv[][2] = {{"init_dim", "4"},   {"gcn_hidden", "4"}, {"gcn_out", "3"},
                         {"attention_mlp_hidden", "5"}, {"attention_mlp_out", "3"}, {"tau_c", "4"},
                         {"classifier_ratios", "2,1"}, {"epochs", "3"}, {"batch_size", "8"}};
  for (auto& p : kv) REQUIRE(wp_config_set(c, p[0], p[1]) == WP_OK);
  return c;
}

void count_epochs(const wp_epoch_record* r, void* user) {
  auto* seen = static_cast<std::vector<size_t>*>(user);
  seen->push_back(r->epoch);
}

}  // namespace

TEST_CASE("version and error reporting") {
  wp_set_log_level(WP_LOG_OFF);
  CHECK(std::string(wp_version()) == "1.0.0");
  wp_graph* g = nullptr;
  CHECK(wp_graph_load("/nonexistent/graph.txt", &g) == WP_ERROR_IO);
  CHECK(g == nullptr);
  CHECK(std::string(wp_last_error()).find("graph.txt") != std::string::npos);
  CHECK(wp_graph_load(nullptr, &g) == WP_ERROR_INPUT);

  auto dir = tmp_dir("errors");
  std::ofstream(dir / "bad.txt") << "1 2\n3 x\n";
  CHECK(wp_graph_load((dir / "bad.txt").c_str(), &g) == WP_ERROR_PARSE);
  CHECK(std::string(wp_last_error()).find(":2") != std::string::npos);

  const int64_t pairs[] = {0, 1, 1, 5};
  CHECK(wp_graph_from_edges(3, pairs, 2, &g) == WP_ERROR_INPUT);
}

TEST_CASE("graphs, splits and heuristics") {
  auto dir = tmp_dir("split");
  wp_graph* g = nullptr;
  REQUIRE(wp_graph_load(write_clique_ring(dir).c_str(), &g) == WP_OK);
  CHECK(wp_graph_num_nodes(g) == 20);
  CHECK(wp_graph_num_edges(g) == 44);
  CHECK(wp_graph_average_clustering(g) > 0.5);

  wp_split* s = nullptr;
  REQUIRE(wp_split_create(g, 0.1, 0.1, 9, &s) == WP_OK);
  CHECK(wp_split_seed(s) == 9);
  CHECK(wp_split_tier_size(s, WP_TIER_TEST, 0) == 4);
  CHECK(wp_split_tier_size(s, WP_TIER_TEST, 1) == 4);
  CHECK(wp_graph_num_edges(wp_split_observed_graph(s)) == wp_split_tier_size(s, WP_TIER_TRAIN, 0));

  std::vector<int64_t> test(8);
  REQUIRE(wp_split_tier_pairs(s, WP_TIER_TEST, 0, test.data(), test.size()) == WP_OK);
  for (int64_t id : test) {
    CHECK(id >= 100);
    CHECK((id - 100) % 3 == 0);
  }
  CHECK(wp_split_tier_pairs(s, WP_TIER_TEST, 0, test.data(), 3) == WP_ERROR_INPUT);

  REQUIRE(wp_split_save(s, (dir / "saved").c_str()) == WP_OK);
  wp_split* back = nullptr;
  REQUIRE(wp_split_load((dir / "saved").c_str(), &back) == WP_OK);
  std::vector<int64_t> again(8);
  REQUIRE(wp_split_tier_pairs(back, WP_TIER_TEST, 0, again.data(), again.size()) == WP_OK);
  CHECK(again == test);

  auto hp = wp_heuristic_params_default();
  CHECK(hp.katz_beta == 0.001);
  CHECK(hp.katz_lmax == 32);
  CHECK(hp.pr_alpha == 0.85);
  double score = -1.0;
  const int64_t same_clique[] = {100, 103};
  REQUIRE(wp_heuristic_score(g, "cn", &hp, same_clique, 1, &score) == WP_OK);
  CHECK(score == 3.0);
  const int64_t unknown[] = {100, 101};
  CHECK(wp_heuristic_score(g, "cn", &hp, unknown, 1, &score) == WP_ERROR_INPUT);
  CHECK(wp_heuristic_score(g, "jaccard", &hp, same_clique, 1, &score) == WP_ERROR_INPUT);

  wp_eval_result r{};
  for (const char* m : {"cn", "aa", "katz", "pr"}) {
    REQUIRE(wp_heuristic_evaluate(s, m, &hp, &r) == WP_OK);
    CHECK(r.n_pos == 4);
    CHECK(r.auc >= 0.0);
    CHECK(r.auc <= 1.0);
  }

  const double pos[] = {0.9, 0.6};
  const double neg[] = {0.7, 0.2};
  REQUIRE(wp_metrics_evaluate(pos, 2, neg, 2, &r) == WP_OK);
  CHECK(r.auc == 0.75);
  CHECK(wp_metrics_evaluate(pos, 0, neg, 2, &r) == WP_ERROR_INPUT);

  wp_split_free(back);
  wp_split_free(s);
  wp_graph_free(g);
}

TEST_CASE("config handles") {
  wp_config* c = nullptr;
  REQUIRE(wp_config_create(&c) == WP_OK);
  CHECK(std::string(wp_config_text(c)).find("tau_c=7\n") != std::string::npos);
  CHECK(wp_config_set(c, "tau_c", "3") == WP_OK);
  CHECK(std::string(wp_config_text(c)).find("tau_c=3\n") != std::string::npos);
  CHECK(wp_config_set(c, "colour", "red") == WP_ERROR_INPUT);
  CHECK(std::string(wp_last_error()).find("colour") != std::string::npos);
  wp_config_free(c);

  auto dir = tmp_dir("config");
  std::ofstream(dir / "a.cfg") << "epochs=4\nfoo=1\n";
  CHECK(wp_config_load((dir / "a.cfg").c_str(), &c) == WP_ERROR_PARSE);
}

TEST_CASE("train, save, load and predict") {
  auto dir = tmp_dir("model");
  wp_graph* g = nullptr;
  REQUIRE(wp_graph_load(write_clique_ring(dir).c_str(), &g) == WP_OK);
  wp_split* s = nullptr;
  REQUIRE(wp_split_create(g, 0.1, 0.2, 2, &s) == WP_OK);
  wp_config* c = small_config();

  std::vector<size_t> epochs;
  wp_model* m = nullptr;
  REQUIRE(wp_train(s, c, nullptr, count_epochs, &epochs, &m) == WP_OK);
  CHECK(epochs == std::vector<size_t>{0, 1, 2});
  CHECK(wp_model_selected_epoch(m) < 3);
  CHECK(std::string(wp_model_config_text(m)) == wp_config_text(c));

  REQUIRE(wp_model_save(m, (dir / "m.ckpt").c_str()) == WP_OK);
  wp_model* loaded = nullptr;
  REQUIRE(wp_model_load((dir / "m.ckpt").c_str(), &loaded) == WP_OK);
  CHECK(wp_model_selection_metric(loaded) == wp_model_selection_metric(m));

  const int64_t pairs[] = {100, 103, 103, 100, 100, 157};
  double a[3], b[3];
  REQUIRE(wp_model_predict(m, s, nullptr, pairs, 3, a) == WP_OK);
  REQUIRE(wp_model_predict(loaded, s, nullptr, pairs, 3, b) == WP_OK);
  for (int k = 0; k < 3; ++k) {
    CHECK(a[k] == b[k]);
    CHECK(a[k] > 0.0);
    CHECK(a[k] < 1.0);
  }
  CHECK(a[0] == a[1]);

  wp_eval_result ra{}, rb{};
  REQUIRE(wp_model_evaluate(m, s, nullptr, &ra) == WP_OK);
  REQUIRE(wp_model_evaluate(loaded, s, nullptr, &rb) == WP_OK);
  CHECK(ra.auc == rb.auc);
  CHECK(ra.ap == rb.ap);

  REQUIRE(wp_config_set(c, "init_mode", "file") == WP_OK);
  wp_model* none = nullptr;
  CHECK(wp_train(s, c, nullptr, nullptr, nullptr, &none) == WP_ERROR_INPUT);
  CHECK(none == nullptr);

  std::ofstream(dir / "garbage.ckpt") << "not a checkpoint";
  CHECK(wp_model_load((dir / "garbage.ckpt").c_str(), &none) == WP_ERROR_PARSE);

  wp_model_free(loaded);
  wp_model_free(m);
  wp_config_free(c);
  wp_split_free(s);
  wp_graph_free(g);
}
