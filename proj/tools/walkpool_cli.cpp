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

// walkpool-cli: splits, heuristic baselines, WalkPool training/evaluation,
// ablations and multi-seed sweeps. Talks to the library through the C API
// only.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "walkpool/walkpool.h"

namespace fs = std::filesystem;

namespace {

constexpr const char* kCsvHeader = "dataset,method,seed,auc,ap,prec_at_half,wall_time_s";

class CommandError : public std::runtime_error {
 public:
  CommandError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

int exit_code_for(wp_status s) {
  switch (s) {
    case WP_ERROR_INPUT:
    case WP_ERROR_PARSE:
    case WP_ERROR_IO:
      return 2;
    default:
      return 1;
  }
}

void check(wp_status s) {
  if (s != WP_OK) throw CommandError(exit_code_for(s), wp_last_error());
}

void usage_error(const std::string& what) { throw CommandError(2, what); }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GraphPtr = std::unique_ptr<wp_graph, Deleter<wp_graph, wp_graph_free>>;
using SplitPtr = std::unique_ptr<wp_split, Deleter<wp_split, wp_split_free>>;
using ConfigPtr = std::unique_ptr<wp_config, Deleter<wp_config, wp_config_free>>;
using EmbeddingsPtr = std::unique_ptr<wp_embeddings, Deleter<wp_embeddings, wp_embeddings_free>>;
using ModelPtr = std::unique_ptr<wp_model, Deleter<wp_model, wp_model_free>>;

std::string fmt(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string fmt_fixed(double x, int digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, digits);
  return std::string(buf, ptr);
}

struct ReportRow {
  std::string dataset;
  std::string method;
  std::uint64_t seed = 0;
  wp_eval_result result{};
  double wall_time = 0.0;
};

std::string csv_line(const ReportRow& r) {
  return r.dataset + ',' + r.method + ',' + std::to_string(r.seed) + ',' + fmt(r.result.auc) + ',' +
         fmt(r.result.ap) + ',' + fmt(r.result.precision_at_half) + ',' + fmt_fixed(r.wall_time, 3);
}

// Prints to stdout, or appends to `path` (header written once for a new file).
void emit_rows(const std::vector<ReportRow>& rows, const std::string& path) {
  if (path.empty()) {
    std::cout << kCsvHeader << '\n';
    for (const auto& r : rows) std::cout << csv_line(r) << '\n';
    return;
  }
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw CommandError(2, "cannot open " + path + " for writing");
  if (fresh) out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
}

std::string dataset_name(const std::string& explicit_name, const std::string& path) {
  if (!explicit_name.empty()) return explicit_name;
  fs::path p(path);
  if (p.filename().empty()) p = p.parent_path();
  return p.stem().string();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SplitPtr load_split(const std::string& dir) {
  wp_split* s = nullptr;
  check(wp_split_load(dir.c_str(), &s));
  return SplitPtr(s);
}

wp_heuristic_params heuristic_params(std::optional<double> beta, std::optional<unsigned> lmax,
                                     std::optional<double> alpha) {
  auto p = wp_heuristic_params_default();
  if (beta) p.katz_beta = *beta;
  if (lmax) p.katz_lmax = *lmax;
  if (alpha) p.pr_alpha = *alpha;
  return p;
}

void require_method(const std::string& m) {
  if (m != "cn" && m != "aa" && m != "katz" && m != "pr") usage_error("unknown heuristic method '" + m + "'");
}

// Options shared by every command that trains a model.
struct TrainOptions {
  std::string config_path;
  std::string init;
  std::string embeddings_path;
  std::optional<std::size_t> epochs;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr;
  std::optional<std::size_t> batch_size;
  std::string select;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--init", init, "initial node features")->check(CLI::IsMember({"ones", "dl", "file"}));
    cmd->add_option("--embeddings", embeddings_path, "node feature file for --init file");
    cmd->add_option("--epochs", epochs);
    cmd->add_option("--seed", seed, "model seed");
    cmd->add_option("--lr", lr);
    cmd->add_option("--batch-size", batch_size);
    cmd->add_option("--select", select, "checkpoint selection")->check(CLI::IsMember({"best_val", "final"}));
    cmd->add_option("--set", sets, "extra KEY=VALUE config overrides");
  }

  ConfigPtr build() const {
    wp_config* raw = nullptr;
    if (config_path.empty()) {
      check(wp_config_create(&raw));
    } else {
      check(wp_config_load(config_path.c_str(), &raw));
    }
    ConfigPtr c(raw);
    auto put = [&](const std::string& k, const std::string& v) { check(wp_config_set(c.get(), k.c_str(), v.c_str())); };
    if (!init.empty()) put("init_mode", init);
    if (epochs) put("epochs", std::to_string(*epochs));
    if (seed) put("seed", std::to_string(*seed));
    if (lr) put("lr", fmt(*lr));
    if (batch_size) put("batch_size", std::to_string(*batch_size));
    if (!select.empty()) put("select", select);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) usage_error("--set expects KEY=VALUE, got '" + kv + "'");
      put(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return c;
  }
};

std::string config_value(wp_config* c, const std::string& key) {
  std::istringstream in(wp_config_text(c));
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + '=', 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

EmbeddingsPtr load_embeddings_for(const std::string& path, const wp_split* split) {
  if (path.empty()) return nullptr;
  wp_embeddings* e = nullptr;
  check(wp_embeddings_load(path.c_str(), wp_split_observed_graph(split), &e));
  return EmbeddingsPtr(e);
}

std::string wp_method_name(wp_config* c) {
  std::string name = "wp-" + config_value(c, "init_mode");
  const std::string excluded = config_value(c, "exclude");
  if (!excluded.empty()) {
    std::string joined = excluded;
    for (auto& ch : joined) {
      if (ch == ',') ch = '+';
    }
    name += "-excl:" + joined;
  }
  return name;
}

struct TrainLog {
  std::string csv = "epoch,train_loss,val_auc\n";
};

void on_epoch(const wp_epoch_record* r, void* user) {
  auto* log = static_cast<TrainLog*>(user);
  log->csv += std::to_string(r->epoch) + ',' + fmt(r->train_loss) + ',' + fmt(r->val_auc) + '\n';
}

ModelPtr train_model(const wp_split* split, wp_config* config, const wp_embeddings* emb, TrainLog* log) {
  wp_model* m = nullptr;
  check(wp_train(split, config, emb, log ? on_epoch : nullptr, log, &m));
  return ModelPtr(m);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw CommandError(2, "cannot write " + path);
}

// ---- commands ---------------------------------------------------------------

struct SplitCmd {
  std::string graph, out;
  double test_ratio = 0.1, val_ratio = 0.05;
  std::uint64_t seed = 1;

  void run() const {
    wp_graph* g = nullptr;
    check(wp_graph_load(graph.c_str(), &g));
    GraphPtr gp(g);
    wp_split* s = nullptr;
    check(wp_split_create(gp.get(), test_ratio, val_ratio, seed, &s));
    SplitPtr sp(s);
    check(wp_split_save(sp.get(), out.c_str()));
    std::cerr << "split: " << wp_split_tier_size(s, WP_TIER_TRAIN, 0) << " train, "
              << wp_split_tier_size(s, WP_TIER_VAL, 0) << " val, " << wp_split_tier_size(s, WP_TIER_TEST, 0)
              << " test positives -> " << out << '\n';
  }
};

struct HeuristicCmd {
  std::string split, method, dataset, csv;
  std::optional<double> beta, alpha;
  std::optional<unsigned> lmax;

  void run() const {
    require_method(method);
    auto s = load_split(split);
    const auto params = heuristic_params(beta, lmax, alpha);
    const auto start = std::chrono::steady_clock::now();
    wp_eval_result r{};
    check(wp_heuristic_evaluate(s.get(), method.c_str(), &params, &r));
    emit_rows({{dataset_name(dataset, split), method, wp_split_seed(s.get()), r, seconds_since(start)}}, csv);
  }
};

struct TrainCmd {
  std::string split, out, log_path;
  TrainOptions opts;

  void run() const {
    auto s = load_split(split);
    auto config = opts.build();
    auto emb = load_embeddings_for(opts.embeddings_path, s.get());
    TrainLog log;
    auto model = train_model(s.get(), config.get(), emb.get(), &log);
    check(wp_model_save(model.get(), out.c_str()));
    write_file(log_path.empty() ? out + ".log.csv" : log_path, log.csv);
    std::cerr << "trained: selected epoch " << wp_model_selected_epoch(model.get()) << ", val auc "
              << fmt(wp_model_selection_metric(model.get())) << " -> " << out << '\n';
  }
};

struct EvalCmd {
  std::string ckpt, split, embeddings, dataset, csv;

  void run() const {
    auto s = load_split(split);
    wp_model* raw = nullptr;
    check(wp_model_load(ckpt.c_str(), &raw));
    ModelPtr m(raw);
    auto emb = load_embeddings_for(embeddings, s.get());
    wp_config* c = nullptr;
    check(wp_config_create(&c));
    ConfigPtr cfg(c);
    // Recover the method label from the checkpoint's own config.
    std::istringstream in(wp_model_config_text(m.get()));
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos || line[0] == '#') continue;
      check(wp_config_set(c, line.substr(0, eq).c_str(), line.substr(eq + 1).c_str()));
    }
    const auto start = std::chrono::steady_clock::now();
    wp_eval_result r{};
    check(wp_model_evaluate(m.get(), s.get(), emb.get(), &r));
    emit_rows({{dataset_name(dataset, split), wp_method_name(c), wp_split_seed(s.get()), r, seconds_since(start)}},
              csv);
  }
};

struct AblateCmd {
  std::string split, dataset, csv;
  std::vector<std::string> excludes;
  bool skip_full = false;
  TrainOptions opts;

  void run() const {
    auto s = load_split(split);
    auto emb = load_embeddings_for(opts.embeddings_path, s.get());
    std::vector<std::string> masks;
    if (!skip_full) masks.emplace_back("");
    masks.insert(masks.end(), excludes.begin(), excludes.end());
    std::vector<ReportRow> rows;
    for (const auto& mask : masks) {
      auto config = opts.build();
      check(wp_config_set(config.get(), "exclude", mask.c_str()));
      const auto start = std::chrono::steady_clock::now();
      auto model = train_model(s.get(), config.get(), emb.get(), nullptr);
      wp_eval_result r{};
      check(wp_model_evaluate(model.get(), s.get(), emb.get(), &r));
      rows.push_back({dataset_name(dataset, split), wp_method_name(config.get()), wp_split_seed(s.get()), r,
                      seconds_since(start)});
      std::cerr << rows.back().method << ": auc " << fmt(r.auc) << '\n';
    }
    emit_rows(rows, csv);
  }
};

struct SweepCmd {
  std::string graph, dataset, out, summary, methods = "aa,katz,pr";
  std::size_t seeds = 10;
  std::uint64_t first_seed = 1;
  double test_ratio = 0.1, val_ratio = 0.05;
  std::optional<double> beta, alpha;
  std::optional<unsigned> lmax;
  TrainOptions opts;

  void run() const {
    if (seeds == 0) usage_error("--seeds must be at least 1");
    std::vector<std::string> list;
    std::stringstream ss(methods);
    for (std::string m; std::getline(ss, m, ',');) {
      if (m.empty()) continue;
      if (m != "wp") require_method(m);
      list.push_back(m);
    }
    if (list.empty()) usage_error("--methods is empty");

    wp_graph* g = nullptr;
    check(wp_graph_load(graph.c_str(), &g));
    GraphPtr gp(g);
    const auto params = heuristic_params(beta, lmax, alpha);
    const std::string name = dataset_name(dataset, graph);

    std::vector<ReportRow> rows;
    for (std::size_t k = 0; k < seeds; ++k) {
      const std::uint64_t seed = first_seed + k;
      wp_split* raw = nullptr;
      check(wp_split_create(gp.get(), test_ratio, val_ratio, seed, &raw));
      SplitPtr s(raw);
      for (const auto& m : list) {
        const auto start = std::chrono::steady_clock::now();
        wp_eval_result r{};
        std::string label = m;
        if (m == "wp") {
          auto config = opts.build();
          if (!opts.seed) check(wp_config_set(config.get(), "seed", std::to_string(seed).c_str()));
          auto emb = load_embeddings_for(opts.embeddings_path, s.get());
          auto model = train_model(s.get(), config.get(), emb.get(), nullptr);
          check(wp_model_evaluate(model.get(), s.get(), emb.get(), &r));
          label = wp_method_name(config.get());
        } else {
          check(wp_heuristic_evaluate(s.get(), m.c_str(), &params, &r));
        }
        rows.push_back({name, label, seed, r, seconds_since(start)});
        std::cerr << name << " seed " << seed << ' ' << label << ": auc " << fmt(r.auc) << '\n';
      }
    }

    if (out.empty()) {
      emit_rows(rows, "");
    } else {
      write_file(out, "");
      emit_rows(rows, out);
    }
    const std::string agg = aggregate(rows);
    if (summary.empty()) {
      std::cout << '\n' << agg;
    } else {
      write_file(summary, agg);
    }
  }

  static std::string aggregate(const std::vector<ReportRow>& rows) {
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<const ReportRow*>> groups;
    for (const auto& r : rows) {
      auto key = std::make_pair(r.dataset, r.method);
      if (!groups.count(key)) order.push_back(key);
      groups[key].push_back(&r);
    }
    std::string text =
        "dataset,method,n_seeds,auc_mean,auc_std,ap_mean,ap_std,prec_at_half_mean,prec_at_half_std\n";
    for (const auto& key : order) {
      const auto& g = groups[key];
      text += key.first + ',' + key.second + ',' + std::to_string(g.size());
      for (auto field : {&wp_eval_result::auc, &wp_eval_result::ap, &wp_eval_result::precision_at_half}) {
        double mean = 0.0;
        for (const auto* r : g) mean += r->result.*field;
        mean /= static_cast<double>(g.size());
        text += ',' + fmt(mean) + ',';
        if (g.size() >= 2) {
          double ss = 0.0;
          for (const auto* r : g) ss += (r->result.*field - mean) * (r->result.*field - mean);
          text += fmt(std::sqrt(ss / static_cast<double>(g.size() - 1)));
        }
      }
      text += '\n';
    }
    return text;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"WalkPool link prediction"};
  app.require_subcommand(1);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "debug, info, warn, error or off")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));

  SplitCmd split;
  auto* c_split = app.add_subcommand("split", "split a graph into train/val/test tiers");
  c_split->add_option("--graph", split.graph, "edge list")->required();
  c_split->add_option("--test-ratio", split.test_ratio);
  c_split->add_option("--val-ratio", split.val_ratio, "fraction of the non-test edges");
  c_split->add_option("--seed", split.seed);
  c_split->add_option("--out", split.out, "output directory")->required();

  HeuristicCmd heur;
  auto* c_heur = app.add_subcommand("heuristic", "score the test tier with a heuristic");
  c_heur->add_option("--split", heur.split)->required();
  c_heur->add_option("--method", heur.method, "cn, aa, katz or pr")->required();
  c_heur->add_option("--beta", heur.beta, "Katz decay");
  c_heur->add_option("--lmax", heur.lmax, "Katz truncation length");
  c_heur->add_option("--alpha", heur.alpha, "PageRank continuation probability");
  c_heur->add_option("--dataset", heur.dataset, "dataset label for the CSV row");
  c_heur->add_option("--csv", heur.csv, "append rows to this file instead of stdout");

  TrainCmd train;
  auto* c_train = app.add_subcommand("train", "train a WalkPool model");
  c_train->add_option("--split", train.split)->required();
  c_train->add_option("--out", train.out, "checkpoint path")->required();
  c_train->add_option("--log", train.log_path, "training log CSV (default: <out>.log.csv)");
  train.opts.attach(c_train);

  EvalCmd eval;
  auto* c_eval = app.add_subcommand("eval", "evaluate a checkpoint on the test tier");
  c_eval->add_option("--ckpt", eval.ckpt)->required();
  c_eval->add_option("--split", eval.split)->required();
  c_eval->add_option("--embeddings", eval.embeddings);
  c_eval->add_option("--dataset", eval.dataset);
  c_eval->add_option("--csv", eval.csv);

  AblateCmd ablate;
  auto* c_ablate = app.add_subcommand("ablate", "train with feature groups removed");
  c_ablate->add_option("--split", ablate.split)->required();
  c_ablate->add_option("--exclude", ablate.excludes, "comma list from omega,node,link,graph; repeatable")
      ->required();
  c_ablate->add_flag("--skip-full", ablate.skip_full, "do not train the full-feature reference model");
  c_ablate->add_option("--dataset", ablate.dataset);
  c_ablate->add_option("--csv", ablate.csv);
  ablate.opts.attach(c_ablate);

  SweepCmd sweep;
  auto* c_sweep = app.add_subcommand("sweep", "evaluate methods over several random splits");
  c_sweep->add_option("--graph", sweep.graph)->required();
  c_sweep->add_option("--seeds", sweep.seeds, "number of splits");
  c_sweep->add_option("--first-seed", sweep.first_seed);
  c_sweep->add_option("--methods", sweep.methods, "comma list of cn,aa,katz,pr,wp");
  c_sweep->add_option("--test-ratio", sweep.test_ratio);
  c_sweep->add_option("--val-ratio", sweep.val_ratio);
  c_sweep->add_option("--beta", sweep.beta);
  c_sweep->add_option("--lmax", sweep.lmax);
  c_sweep->add_option("--alpha", sweep.alpha);
  c_sweep->add_option("--dataset", sweep.dataset);
  c_sweep->add_option("--out", sweep.out, "per-seed rows CSV");
  c_sweep->add_option("--summary", sweep.summary, "aggregate CSV");
  sweep.opts.attach(c_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  static const std::map<std::string, wp_log_level> levels = {
      {"debug", WP_LOG_DEBUG}, {"info", WP_LOG_INFO}, {"warn", WP_LOG_WARN}, {"error", WP_LOG_ERROR}, {"off", WP_LOG_OFF}};
  wp_set_log_level(levels.at(log_level));

  try {
    if (*c_split) split.run();
    if (*c_heur) heur.run();
    if (*c_train) train.run();
    if (*c_eval) eval.run();
    if (*c_ablate) ablate.run();
    if (*c_sweep) sweep.run();
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
