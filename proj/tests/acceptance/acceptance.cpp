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

// Acceptance runner. One PASS/FAIL line per criterion; the exit status is
// non-zero when any selected criterion fails.
//
//   acceptance --core        criteria 4-8 (self-contained, seconds to minutes)
//   acceptance --benchmarks  criteria 1-3 (need the benchmark edge lists)
//   acceptance               everything

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset_io.hpp"
#include "graph_core.hpp"
#include "heuristics.hpp"
#include "log.hpp"
#include "metrics.hpp"
#include "testing.hpp"
#include "trainer.hpp"
#include "walkpool.hpp"
#include "walkpool_fixtures.hpp"

namespace fs = std::filesystem;
using namespace walkpool;
using namespace walkpool::testing;
using ad::Tensor;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

fs::path data_dir() {
  if (const char* env = std::getenv("WALKPOOL_DATA_DIR")) return env;
  return WALKPOOL_DATA_DIR;
}

fs::path work_dir(const std::string& name) {
  fs::path dir = fs::path(WALKPOOL_WORK_DIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---- criterion 4 -------------------------------------------------------------

Outcome locality() {
  Rng rng(404);
  double worst = 0.0;
  std::size_t compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(29);
    auto g = random_graph(n, rng.uniform(0.1, 0.4), rng);
    std::vector<NodePair> edges = g.edges();
    std::erase(edges, NodePair{0, 1});
    auto minus = build_graph(n, edges);
    edges.emplace_back(0, 1);
    auto plus = build_graph(n, edges);
    auto omega = Tensor::constant(random_matrix(n, n, rng, -3, 3));
    const auto pp = attention_transition(plus, omega).value();
    const auto pm = attention_transition(minus, omega).value();
    const NodeId focal[] = {0, 1};
    const auto d = bfs_distances(plus, focal);
    DenseMatrix a = pp, b = pm;
    for (unsigned tau = 1; tau <= 7; ++tau) {
      if (tau > 1) {
        a = multiply(a, pp);
        b = multiply(b, pm);
      }
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (d[x] > tau && d[y] > tau) {
            worst = std::max(worst, std::abs(a(x, y) - b(x, y)));
            ++compared;
          }
    }
  }
  return {worst <= 1e-12 && compared > 0,
          "200 graphs, " + std::to_string(compared) + " far entries, max |P+^t - P-^t| = " + fmt(worst)};
}

// ---- criterion 5 -------------------------------------------------------------

Outcome oracles() {
  Rng rng(505);
  std::size_t path_mismatch = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_graph(1 + rng.below(8), rng.uniform(0.1, 0.9), rng);
    for (unsigned tau = 1; tau <= 4; ++tau)
      if (!(path_count_matrix(g, tau) == enumerate_walks(g, tau))) ++path_mismatch;
  }

  double katz_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto g = random_graph(8, rng.uniform(0.2, 0.7), rng);
    const double beta = rng.uniform(0.01, 0.2);
    const unsigned lmax = 1 + static_cast<unsigned>(rng.below(4));
    std::vector<DenseMatrix> walks;
    for (unsigned l = 1; l <= lmax; ++l) walks.push_back(enumerate_walks(g, l));
    for (NodeId i = 0; i < 8; ++i)
      for (NodeId j = 0; j < 8; ++j) {
        if (i == j) continue;
        double expect = 0.0;
        for (unsigned l = 1; l <= lmax; ++l) expect += std::pow(beta, l) * walks[l - 1](i, j);
        katz_err = std::max(katz_err, std::abs(katz(g, i, j, beta, lmax) - expect));
      }
  }

  double pr_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    auto g = random_graph(n, rng.uniform(0.2, 0.8), rng);
    const double alpha = rng.uniform(0.5, 0.95);
    for (NodeId root = 0; root < n; ++root) {
      auto iter = rooted_pagerank_vector(g, root, alpha, 100000, 1e-14);
      auto exact = pagerank_by_solve(g, root, alpha);
      for (NodeId v = 0; v < n; ++v) pr_err = std::max(pr_err, std::abs(iter[v] - exact[v]));
    }
  }

  std::size_t metric_mismatch = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto draw = [&](std::size_t len, std::uint64_t levels) {
      std::vector<double> v(len);
      for (auto& x : v) x = static_cast<double>(rng.below(levels)) / static_cast<double>(levels);
      return v;
    };
    auto pos = draw(1 + rng.below(30), 1 + rng.below(12));
    auto neg = draw(1 + rng.below(30), 1 + rng.below(12));
    if (auc(pos, neg) != brute_auc(pos, neg)) ++metric_mismatch;
    if (std::abs(average_precision(pos, neg) - brute_ap(pos, neg)) > 1e-12) ++metric_mismatch;
  }

  const bool ok = path_mismatch == 0 && katz_err <= 1e-10 && pr_err <= 1e-8 && metric_mismatch == 0;
  return {ok, "path-count mismatches " + std::to_string(path_mismatch) + ", Katz err " + fmt(katz_err) +
                  ", PageRank err " + fmt(pr_err) + ", AUC/AP mismatches " + std::to_string(metric_mismatch)};
}

// ---- criterion 6 -------------------------------------------------------------

Outcome gradients() {
  TrainConfig cfg;
  auto g = make_graph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {1, 4}});
  auto params = ModelParams::init(cfg, cfg.init_dim, 606);
  Sample s = make_sample(g, {0, 1}, 1.0, cfg);
  const Sample* batch[] = {&s};
  std::vector<Tensor> tensors;
  std::vector<std::string> names;
  for (auto& [n, t] : params.named()) {
    names.push_back(n);
    tensors.push_back(t);
  }
  auto report = ad::grad_check([&] { return ad::sum(forward(batch, params, cfg, nullptr)); }, tensors, names, 1e-5,
                               24, 6);
  return {s.variant.base.num_nodes() == 5 && report.max_rel_error < 1e-4,
          std::to_string(tensors.size()) + " tensors, " + std::to_string(report.checked) +
              " coordinates, max rel err " + fmt(report.max_rel_error) + " at " + report.worst};
}

// ---- criterion 7 -------------------------------------------------------------

Outcome invariances() {
  Rng rng(707);
  const int cases = 100;
  int swap_fail = 0, perm_fail = 0, stoch_fail = 0, mono_fail = 0;
  for (int t = 0; t < cases; ++t) {
    auto v = random_variant(rng, 5 + rng.below(20), rng.uniform(0.15, 0.5));
    const AttentionHead heads[] = {random_head(3, rng), random_head(3, rng)};
    auto z = random_matrix(v.base.num_nodes(), 3, rng);
    auto [sv, sz] = swap_focal(v, z);
    if (!(wp_features(v, Tensor::constant(z), heads, 7).value() ==
          wp_features(sv, Tensor::constant(sz), heads, 7).value()))
      ++swap_fail;
  }
  for (int t = 0; t < cases; ++t) {
    auto v = random_variant(rng, 5 + rng.below(20), rng.uniform(0.15, 0.5));
    const std::size_t n = v.base.num_nodes();
    const AttentionHead heads[] = {random_head(3, rng), random_head(3, rng)};
    auto z = random_matrix(n, 3, rng);
    std::vector<NodeId> perm(n);
    for (NodeId i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(std::span<NodeId>(perm).subspan(2));
    auto [pv, pz] = relabel_variant(v, z, perm);
    auto a = wp_features(v, Tensor::constant(z), heads, 7).value();
    auto b = wp_features(pv, Tensor::constant(pz), heads, 7).value();
    if (max_abs_diff(a, b) > 1e-12) ++perm_fail;
  }
  for (int t = 0; t < cases; ++t) {
    const std::size_t n = 2 + rng.below(30);
    auto g = random_graph(n, rng.uniform(0.05, 0.5), rng);
    const auto p = attention_transition(g, Tensor::constant(random_matrix(n, n, rng, -5, 5))).value();
    const auto u = transition_matrix(g);
    for (NodeId x = 0; x < n; ++x) {
      const double want = g.degree(x) == 0 ? 0.0 : 1.0;
      if (std::abs(p.row_sum(x) - want) > 1e-12 || std::abs(u.row_sum(x) - want) > 1e-12) ++stoch_fail;
      for (std::size_t y = 0; y < n; ++y)
        if (p(x, y) < 0.0 || (p(x, y) != 0.0 && !g.has_edge(x, static_cast<NodeId>(y)))) ++stoch_fail;
    }
  }
  for (int t = 0; t < cases; ++t) {
    auto draw = [&](std::size_t len) {
      std::vector<double> v(len);
      for (auto& x : v) x = static_cast<double>(rng.below(10)) / 10.0;
      return v;
    };
    auto pos = draw(1 + rng.below(25));
    auto neg = draw(1 + rng.below(25));
    auto tp = pos, tn = neg;
    for (auto& x : tp) x = std::exp(3.0 * x) - 7.0;
    for (auto& x : tn) x = std::exp(3.0 * x) - 7.0;
    if (auc(pos, neg) != auc(tp, tn)) ++mono_fail;
  }
  const bool ok = swap_fail + perm_fail + stoch_fail + mono_fail == 0;
  return {ok, std::to_string(cases) + " cases each; failures: focal swap " + std::to_string(swap_fail) +
                  ", non-focal relabel " + std::to_string(perm_fail) + ", row stochasticity " +
                  std::to_string(stoch_fail) + ", AUC monotone " + std::to_string(mono_fail)};
}

// ---- criterion 8 -------------------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + WALKPOOL_CLI_PATH + "\" --log-level off " + args;
  return std::system(cmd.c_str());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Drops the trailing wall_time_s column of every row.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

Outcome determinism() {
  const fs::path dir = work_dir("determinism");
  {
    Rng rng(808);
    std::ofstream out(dir / "graph.txt");
    for (int u = 0; u < 60; ++u)
      for (int v = u + 1; v < 60; ++v)
        if (rng.uniform() < (u / 15 == v / 15 ? 0.5 : 0.03)) out << u << ' ' << v << '\n';
  }
  const std::string q = "\"";
  if (run_cli("split --graph " + q + (dir / "graph.txt").string() + q + " --seed 3 --out " + q +
              (dir / "split").string() + q) != 0)
    return {false, "split command failed"};
  for (const char* run : {"a", "b"}) {
    const fs::path r = dir / run;
    fs::create_directories(r);
    const std::string flags = " --epochs 3 --seed 11";
    if (run_cli("train --split " + q + (dir / "split").string() + q + " --out " + q + (r / "model.ckpt").string() + q +
                flags) != 0)
      return {false, std::string("train run ") + run + " failed"};
    if (run_cli("eval --ckpt " + q + (r / "model.ckpt").string() + q + " --split " + q + (dir / "split").string() +
                q + " --dataset synth --csv " + q + (r / "eval.csv").string() + q) != 0)
      return {false, std::string("eval run ") + run + " failed"};
  }
  const bool ckpt = slurp(dir / "a" / "model.ckpt") == slurp(dir / "b" / "model.ckpt");
  const bool log = slurp(dir / "a" / "model.ckpt.log.csv") == slurp(dir / "b" / "model.ckpt.log.csv");
  const bool eval = without_wall_time(slurp(dir / "a" / "eval.csv")) == without_wall_time(slurp(dir / "b" / "eval.csv"));
  const bool nonempty = !slurp(dir / "a" / "model.ckpt").empty() && !slurp(dir / "a" / "model.ckpt.log.csv").empty();
  return {ckpt && log && eval && nonempty, std::string("checkpoint ") + (ckpt ? "identical" : "DIFFERS") +
                                               ", epoch log " + (log ? "identical" : "DIFFERS") +
                                               ", eval rows (minus wall time) " + (eval ? "identical" : "DIFFERS")};
}

// ---- criteria 1-3 -------------------------------------------------------------

struct Dataset {
  std::string name;
  fs::path path;
  bool available = false;
  Graph graph;
};

Dataset open_dataset(const std::string& name, const std::string& file) {
  Dataset d;
  d.name = name;
  d.path = data_dir() / file;
  if (fs::exists(d.path)) {
    d.graph = load_edge_list(d.path);
    d.available = true;
  }
  return d;
}

std::string missing(const Dataset& d) { return "dataset file " + d.path.string() + " not found"; }

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double heuristic_auc(const EdgeSplit& split, HeuristicMethod m) {
  std::vector<double> pos, neg;
  const HeuristicParams params;
  for (const auto& r : score_pairs(split.observed_graph, m, split.test_pos, params)) pos.push_back(r.value);
  for (const auto& r : score_pairs(split.observed_graph, m, split.test_neg, params)) neg.push_back(r.value);
  return auc(pos, neg);
}

struct WpRun {
  double auc = 0.0;
  double aa_auc = 0.0;
  double seconds = 0.0;
};

WpRun walkpool_run(const Graph& g, std::uint64_t seed, const std::string& exclude = "") {
  auto split = split_edges(g, 0.1, 0.05, seed);
  TrainConfig cfg;
  cfg.seed = seed;
  if (!exclude.empty()) cfg.set("exclude", exclude);
  const auto t0 = Clock::now();
  auto model = train(split, cfg);
  WpRun r;
  r.auc = evaluate_model(model, split).auc;
  r.seconds = seconds_since(t0);
  r.aa_auc = heuristic_auc(split, HeuristicMethod::adamic_adar);
  std::printf("  [%s] seed %llu%s: WP AUC %.4f, AA AUC %.4f, %.0f s\n", exclude.empty() ? "full" : "ablation",
              static_cast<unsigned long long>(seed), exclude.empty() ? "" : (" exclude=" + exclude).c_str(), r.auc,
              r.aa_auc, r.seconds);
  std::fflush(stdout);
  return r;
}

Outcome heuristic_benchmark(const Dataset& usair, const Dataset& ns) {
  if (!usair.available) return {false, missing(usair)};
  if (!ns.available) return {false, missing(ns)};
  std::vector<double> aa, pr, kz;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto su = split_edges(usair.graph, 0.1, 0.0, seed);
    auto sn = split_edges(ns.graph, 0.1, 0.0, seed);
    auto t0 = Clock::now();
    aa.push_back(heuristic_auc(su, HeuristicMethod::adamic_adar));
    pr.push_back(heuristic_auc(su, HeuristicMethod::rooted_pagerank));
    kz.push_back(heuristic_auc(sn, HeuristicMethod::katz));
    slowest = std::max(slowest, seconds_since(t0));
  }
  const double a = 100 * mean(aa), k = 100 * mean(kz), p = 100 * mean(pr);
  const bool ok = std::abs(a - 95.06) <= 2.0 && std::abs(k - 94.85) <= 2.0 && std::abs(p - 94.67) <= 2.0;
  return {ok, "AA/USAir " + fmt(a) + " (95.06 +- 2), Katz/NS " + fmt(k) + " (94.85 +- 2), PR/USAir " + fmt(p) +
                  " (94.67 +- 2), slowest split " + fmt(slowest, 3) + " s"};
}

Outcome headline_benchmark(const Dataset& usair, const Dataset& cele, std::vector<WpRun>& cele_runs) {
  if (!usair.available) return {false, missing(usair)};
  if (!cele.available) return {false, missing(cele)};
  std::vector<double> wp, aa, ce;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto r = walkpool_run(usair.graph, seed);
    wp.push_back(r.auc);
    aa.push_back(r.aa_auc);
    slowest = std::max(slowest, r.seconds);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    cele_runs.push_back(walkpool_run(cele.graph, seed));
    ce.push_back(cele_runs.back().auc);
    slowest = std::max(slowest, cele_runs.back().seconds);
  }
  const double w = 100 * mean(wp), a = 100 * mean(aa), c = 100 * mean(ce);
  const bool ok = w >= 96.5 && w > a && c >= 89.0 && slowest <= 1800.0;
  return {ok, "WP/USAir " + fmt(w) + " (>= 96.5), AA on same splits " + fmt(a) + ", WP/C.ele " + fmt(c) +
                  " (>= 89), slowest seed " + fmt(slowest, 4) + " s (<= 1800)"};
}

Outcome ablation_benchmark(const Dataset& cele, const std::vector<WpRun>& cele_runs) {
  if (!cele.available) return {false, missing(cele)};
  std::vector<double> full, omega;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    full.push_back(seed <= cele_runs.size() ? cele_runs[seed - 1].auc : walkpool_run(cele.graph, seed).auc);
    omega.push_back(walkpool_run(cele.graph, seed, "node,link,graph").auc);
  }
  const double f = 100 * mean(full), o = 100 * mean(omega);
  return {f - o >= 2.0, "C.ele full " + fmt(f) + " vs omega-only " + fmt(o) + ", gap " + fmt(f - o) + " (>= 2)"};
}

}  // namespace

int main(int argc, char** argv) {
  bool core = true, benchmarks = true;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--core") {
      benchmarks = false;
    } else if (a == "--benchmarks") {
      core = false;
    } else {
      std::fprintf(stderr, "usage: acceptance [--core | --benchmarks]\n");
      return 2;
    }
  }
  log::set_level(log::Level::error);

  int failures = 0;
  auto report = [&](int id, const std::string& name, const std::function<Outcome()>& fn) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %d  %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  };

  if (benchmarks) {
    const auto usair = open_dataset("USAir", "USAir.txt");
    const auto ns = open_dataset("NS", "NS.txt");
    const auto cele = open_dataset("C.ele", "Celegans.txt");
    std::vector<WpRun> cele_runs;
    report(1, "heuristic baselines", [&] { return heuristic_benchmark(usair, ns); });
    report(2, "WalkPool headline AUC", [&] { return headline_benchmark(usair, cele, cele_runs); });
    report(3, "omega-only ablation gap", [&] { return ablation_benchmark(cele, cele_runs); });
  }
  if (core) {
    report(4, "locality of walk probabilities", locality);
    report(5, "oracle equivalences", oracles);
    report(6, "end-to-end gradients", gradients);
    report(7, "invariance suite", invariances);
    report(8, "CLI determinism", determinism);
  }
  return failures == 0 ? 0 : 1;
}
