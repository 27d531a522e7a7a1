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

#include "dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <unordered_set>

#include "errors.hpp"
#include "log.hpp"
#include "rng.hpp"

namespace walkpool {

namespace fs = std::filesystem;

bool EdgeSplit::operator==(const EdgeSplit& o) const {
  return observed_graph.num_nodes() == o.observed_graph.num_nodes() &&
         observed_graph.edges() == o.observed_graph.edges() &&
         observed_graph.original_ids() == o.observed_graph.original_ids() && train_pos == o.train_pos &&
         val_pos == o.val_pos && test_pos == o.test_pos && train_neg == o.train_neg &&
         val_neg == o.val_neg && test_neg == o.test_neg && seed == o.seed &&
         test_ratio == o.test_ratio && val_ratio == o.val_ratio;
}

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

bool parse_id(std::string_view tok, std::int64_t& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && out >= 0;
}

bool parse_real(std::string_view tok, double& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

using RawEdges = std::vector<std::pair<std::int64_t, std::int64_t>>;

// Reads "u v" pairs in original ids. Self-loops are rejected when asked.
RawEdges read_raw_edges(const fs::path& path, bool reject_self_loops) {
  auto in = open_input(path);
  RawEdges edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    std::int64_t u = 0;
    std::int64_t v = 0;
    if (toks.size() != 2 || !parse_id(toks[0], u) || !parse_id(toks[1], v)) {
      throw ParseError(path.string(), lineno, "expected two non-negative integer node ids");
    }
    if (reject_self_loops && u == v) {
      throw ParseError(path.string(), lineno, "self-loop on node " + std::to_string(u));
    }
    edges.emplace_back(u, v);
  }
  return edges;
}

std::size_t tier_size(double ratio, std::size_t n) {
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

const char* const kTierFiles[6] = {"train_pos.txt", "train_neg.txt", "val_pos.txt",
                                   "val_neg.txt",   "test_pos.txt",  "test_neg.txt"};

}  // namespace

Graph load_edge_list(const fs::path& path) {
  const RawEdges raw = read_raw_edges(path, true);
  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto to_internal = [&](std::int64_t x) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  std::vector<NodePair> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) edges.emplace_back(to_internal(u), to_internal(v));
  return build_graph(ids.size(), edges).with_original_ids(std::move(ids));
}

EdgeSplit split_edges(const Graph& g, double test_ratio, double val_ratio, std::uint64_t seed) {
  if (!(test_ratio >= 0.0) || !(val_ratio >= 0.0) || !(test_ratio + val_ratio < 1.0)) {
    throw InputError("split_edges: need test_ratio, val_ratio >= 0 and test_ratio + val_ratio < 1");
  }
  Rng rng(seed);
  std::vector<NodePair> edges = g.edges();
  rng.shuffle(std::span<NodePair>(edges));

  EdgeSplit split;
  split.seed = seed;
  split.test_ratio = test_ratio;
  split.val_ratio = val_ratio;

  const std::size_t n_test = tier_size(test_ratio, edges.size());
  const std::size_t n_val = tier_size(val_ratio, edges.size() - n_test);
  split.test_pos.assign(edges.begin(), edges.begin() + n_test);
  split.val_pos.assign(edges.begin() + n_test, edges.begin() + n_test + n_val);
  split.train_pos.assign(edges.begin() + n_test + n_val, edges.end());

  const std::size_t n = g.num_nodes();
  const std::size_t needed = edges.size();
  const std::size_t max_pairs = n * (n - 1) / 2;
  if (n < 2 || max_pairs - edges.size() < needed) {
    throw RuntimeFailure("split_edges: graph too dense to sample " + std::to_string(needed) +
                         " distinct non-edges");
  }

  std::unordered_set<std::uint64_t> taken;
  taken.reserve(2 * (edges.size() + needed));
  for (auto [u, v] : edges) taken.insert(pair_key(u, v));

  const std::size_t max_rejections = 100 * needed;
  std::size_t rejections = 0;
  auto draw = [&](std::vector<NodePair>& tier, std::size_t count) {
    tier.reserve(count);
    while (tier.size() < count) {
      auto u = static_cast<NodeId>(rng.below(n));
      auto v = static_cast<NodeId>(rng.below(n));
      if (u == v || !taken.insert(pair_key(u, v)).second) {
        if (++rejections > max_rejections) {
          throw RuntimeFailure("split_edges: negative sampling gave up after " +
                               std::to_string(max_rejections) + " rejections");
        }
        continue;
      }
      tier.emplace_back(std::min(u, v), std::max(u, v));
    }
  };
  draw(split.test_neg, split.test_pos.size());
  draw(split.val_neg, split.val_pos.size());
  draw(split.train_neg, split.train_pos.size());

  split.observed_graph = build_graph(n, split.train_pos).with_original_ids(g.original_ids());
  return split;
}

void validate_split(const EdgeSplit& split) {
  const std::size_t n = split.observed_graph.num_nodes();
  std::unordered_set<std::uint64_t> positives;
  auto add_pos = [&](const std::vector<NodePair>& tier, const char* name) {
    for (auto [u, v] : tier) {
      if (u >= n || v >= n || u == v) throw InputError(std::string("invalid pair in ") + name);
      if (!positives.insert(pair_key(u, v)).second) {
        throw InputError(std::string("positive edge repeated across tiers (") + name + ")");
      }
    }
  };
  add_pos(split.train_pos, "train_pos");
  add_pos(split.val_pos, "val_pos");
  add_pos(split.test_pos, "test_pos");

  std::unordered_set<std::uint64_t> negatives;
  auto add_neg = [&](const std::vector<NodePair>& tier, const char* name) {
    for (auto [u, v] : tier) {
      if (u >= n || v >= n || u == v) throw InputError(std::string("invalid pair in ") + name);
      const auto key = pair_key(u, v);
      if (positives.count(key)) {
        throw InputError(std::string(name) + " contains a positive edge (" +
                         std::to_string(split.observed_graph.original_id(u)) + ", " +
                         std::to_string(split.observed_graph.original_id(v)) + ")");
      }
      if (!negatives.insert(key).second) {
        throw InputError(std::string(name) + " repeats a negative pair");
      }
    }
  };
  add_neg(split.train_neg, "train_neg");
  add_neg(split.val_neg, "val_neg");
  add_neg(split.test_neg, "test_neg");

  if (split.observed_graph.edge_count() != split.train_pos.size()) {
    throw InputError("observed graph does not match the training positives");
  }
}

NodeFeatures load_embeddings(const fs::path& path, const Graph& g) {
  auto in = open_input(path);
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<double>> rows(n);
  std::vector<bool> seen(n, false);
  std::size_t dim = 0;
  bool have_dim = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokenize(strip_comment(line));
    if (toks.empty()) continue;
    std::int64_t id = 0;
    if (!parse_id(toks[0], id)) throw ParseError(path.string(), lineno, "bad node id");
    const std::size_t row_dim = toks.size() - 1;
    if (!have_dim) {
      if (row_dim == 0) throw ParseError(path.string(), lineno, "row has no feature values");
      dim = row_dim;
      have_dim = true;
    } else if (row_dim != dim) {
      throw ParseError(path.string(), lineno,
                       "ragged row: " + std::to_string(row_dim) + " values, expected " + std::to_string(dim));
    }
    std::vector<double> values(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      if (!parse_real(toks[c + 1], values[c])) {
        throw ParseError(path.string(), lineno, "bad feature value '" + std::string(toks[c + 1]) + "'");
      }
    }
    const auto internal = g.internal_id(id);
    if (!internal) continue;  // node not in the graph
    if (seen[*internal]) throw ParseError(path.string(), lineno, "duplicate node " + std::to_string(id));
    seen[*internal] = true;
    rows[*internal] = std::move(values);
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!seen[v]) {
      throw InputError("embedding file " + path.string() + " is missing node " +
                       std::to_string(g.original_id(v)));
    }
  }
  NodeFeatures f{DenseMatrix(n, dim)};
  for (NodeId v = 0; v < n; ++v) std::copy(rows[v].begin(), rows[v].end(), f.rows.row(v).begin());
  return f;
}

void save_split(const EdgeSplit& split, const fs::path& dir) {
  fs::create_directories(dir);
  const Graph& g = split.observed_graph;
  const std::vector<NodePair>* tiers[6] = {&split.train_pos, &split.train_neg, &split.val_pos,
                                           &split.val_neg,   &split.test_pos,  &split.test_neg};
  for (int t = 0; t < 6; ++t) {
    std::ofstream out(dir / kTierFiles[t], std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / kTierFiles[t]).string());
    for (auto [u, v] : *tiers[t]) out << g.original_id(u) << ' ' << g.original_id(v) << '\n';
  }
  std::ofstream meta(dir / "meta.txt", std::ios::binary | std::ios::trunc);
  if (!meta) throw IoError("cannot write " + (dir / "meta.txt").string());
  meta << "seed=" << split.seed << '\n'
       << "test_ratio=" << format_real(split.test_ratio) << '\n'
       << "val_ratio=" << format_real(split.val_ratio) << '\n'
       << "num_nodes=" << g.num_nodes() << '\n';
  // Nodes without any positive edge cannot be recovered from the tier files.
  std::vector<bool> covered(g.num_nodes(), false);
  for (const auto* tier : {&split.train_pos, &split.val_pos, &split.test_pos})
    for (auto [u, v] : *tier) covered[u] = covered[v] = true;
  std::string extra;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (covered[v]) continue;
    if (!extra.empty()) extra += ',';
    extra += std::to_string(g.original_id(v));
  }
  if (!extra.empty()) meta << "extra_nodes=" << extra << '\n';
}

EdgeSplit load_split(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("split directory not found: " + dir.string());
  std::map<std::string, std::string> meta;
  {
    auto in = open_input(dir / "meta.txt");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto body = strip_comment(line);
      if (tokenize(body).empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) throw ParseError((dir / "meta.txt").string(), lineno, "expected key=value");
      const auto key = tokenize(body.substr(0, eq));
      const auto value = tokenize(body.substr(eq + 1));
      if (key.size() != 1 || value.size() != 1) {
        throw ParseError((dir / "meta.txt").string(), lineno, "expected key=value");
      }
      meta[std::string(key[0])] = std::string(value[0]);
    }
  }
  auto require = [&](const char* key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) throw ParseError("meta.txt in " + dir.string() + " lacks '" + key + "'");
    return it->second;
  };

  EdgeSplit split;
  {
    std::int64_t seed = 0;
    if (!parse_id(require("seed"), seed)) throw ParseError("meta.txt: bad seed");
    split.seed = static_cast<std::uint64_t>(seed);
    if (!parse_real(require("test_ratio"), split.test_ratio)) throw ParseError("meta.txt: bad test_ratio");
    if (!parse_real(require("val_ratio"), split.val_ratio)) throw ParseError("meta.txt: bad val_ratio");
  }

  RawEdges raw[6];
  for (int t = 0; t < 6; ++t) raw[t] = read_raw_edges(dir / kTierFiles[t], false);

  // The positive tiers plus extra_nodes name the whole node set; ids map in
  // ascending order like load_edge_list.
  std::vector<std::int64_t> ids;
  for (int t : {0, 2, 4})
    for (auto [u, v] : raw[t]) {
      ids.push_back(u);
      ids.push_back(v);
    }
  if (auto it = meta.find("extra_nodes"); it != meta.end()) {
    std::string_view list = it->second;
    while (!list.empty()) {
      const auto comma = list.find(',');
      const auto tok = list.substr(0, comma);
      std::int64_t id = 0;
      if (!parse_id(tok, id)) throw ParseError("meta.txt: bad extra_nodes entry");
      ids.push_back(id);
      list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (auto it = meta.find("num_nodes"); it != meta.end()) {
    std::int64_t expected = 0;
    if (!parse_id(it->second, expected) || static_cast<std::size_t>(expected) != ids.size()) {
      throw InputError("split " + dir.string() + ": meta num_nodes=" + it->second + " but positives name " +
                       std::to_string(ids.size()) + " nodes");
    }
  }

  auto convert = [&](const RawEdges& in, const char* name) {
    std::vector<NodePair> out;
    out.reserve(in.size());
    for (auto [u, v] : in) {
      auto iu = std::lower_bound(ids.begin(), ids.end(), u);
      auto iv = std::lower_bound(ids.begin(), ids.end(), v);
      if (iu == ids.end() || *iu != u || iv == ids.end() || *iv != v) {
        throw InputError(std::string(name) + " names a node outside the split's node set");
      }
      auto a = static_cast<NodeId>(iu - ids.begin());
      auto b = static_cast<NodeId>(iv - ids.begin());
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
    return out;
  };
  split.train_pos = convert(raw[0], kTierFiles[0]);
  split.train_neg = convert(raw[1], kTierFiles[1]);
  split.val_pos = convert(raw[2], kTierFiles[2]);
  split.val_neg = convert(raw[3], kTierFiles[3]);
  split.test_pos = convert(raw[4], kTierFiles[4]);
  split.test_neg = convert(raw[5], kTierFiles[5]);
  split.observed_graph = build_graph(ids.size(), split.train_pos).with_original_ids(ids);
  validate_split(split);

  // Directory names like "usair_seed3" are expected to carry the split seed.
  static const std::regex seed_in_name(R"(seed[_-]?([0-9]+))");
  std::smatch m;
  const std::string base = dir.filename().empty() ? dir.parent_path().filename().string()
                                                  : dir.filename().string();
  if (std::regex_search(base, m, seed_in_name) && m[1].str() != std::to_string(split.seed)) {
    log::warn("split directory " + base + " suggests seed " + m[1].str() + " but meta.txt has seed=" +
              std::to_string(split.seed));
  }
  return split;
}

}  // namespace walkpool
