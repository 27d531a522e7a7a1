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

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace walkpool {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw InputError("config key '" + std::string(key) + "': invalid value '" + std::string(value) + "' (expected " +
                   expected + ")");
}

template <typename Int>
Int parse_count(std::string_view key, std::string_view value, Int min_value) {
  Int out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || out < min_value) {
    bad_value(key, value, ("integer >= " + std::to_string(min_value)).c_str());
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value, "real number");
  }
  return out;
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view init_mode_name(InitMode m) {
  switch (m) {
    case InitMode::ones: return "ones";
    case InitMode::distance_labels: return "dl";
    case InitMode::file: return "file";
  }
  return "?";
}

std::string_view select_mode_name(SelectMode m) { return m == SelectMode::best_val ? "best_val" : "final"; }

void TrainConfig::set(std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "k_hops") {
    k_hops = parse_count<unsigned>(key, value, 1);
  } else if (key == "max_per_hop") {
    max_per_hop = parse_count<std::size_t>(key, value, 0);
  } else if (key == "tau_c") {
    tau_c = parse_count<unsigned>(key, value, 2);
  } else if (key == "heads") {
    heads = parse_count<std::size_t>(key, value, 1);
  } else if (key == "init_mode") {
    if (value == "ones") {
      init_mode = InitMode::ones;
    } else if (value == "dl") {
      init_mode = InitMode::distance_labels;
    } else if (value == "file") {
      init_mode = InitMode::file;
    } else {
      bad_value(key, value, "ones, dl or file");
    }
  } else if (key == "init_dim") {
    init_dim = parse_count<std::size_t>(key, value, 1);
  } else if (key == "gcn_hidden") {
    gcn_hidden = parse_count<std::size_t>(key, value, 1);
  } else if (key == "gcn_out") {
    gcn_out = parse_count<std::size_t>(key, value, 1);
  } else if (key == "attention_mlp_hidden") {
    attention_mlp_hidden = parse_count<std::size_t>(key, value, 1);
  } else if (key == "attention_mlp_out") {
    attention_mlp_out = parse_count<std::size_t>(key, value, 1);
  } else if (key == "classifier_ratios") {
    std::vector<double> ratios;
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const double r = parse_double(key, trim(rest.substr(0, comma)));
      if (!(r > 0.0)) bad_value(key, value, "positive ratios");
      ratios.push_back(r);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    classifier_ratios = std::move(ratios);
  } else if (key == "lr") {
    lr = parse_double(key, value);
    if (!(lr > 0.0)) bad_value(key, value, "positive real");
  } else if (key == "weight_decay") {
    weight_decay = parse_double(key, value);
    if (weight_decay < 0.0) bad_value(key, value, "non-negative real");
  } else if (key == "batch_size") {
    batch_size = parse_count<std::size_t>(key, value, 1);
  } else if (key == "epochs") {
    epochs = parse_count<std::size_t>(key, value, 1);
  } else if (key == "seed") {
    seed = parse_count<std::uint64_t>(key, value, 0);
  } else if (key == "select") {
    if (value == "best_val") {
      select = SelectMode::best_val;
    } else if (value == "final") {
      select = SelectMode::final_epoch;
    } else {
      bad_value(key, value, "best_val or final");
    }
  } else if (key == "exclude") {
    features = FeatureMask::excluding(value);
  } else {
    throw InputError("unknown config key '" + std::string(key) + "'");
  }
}

std::string TrainConfig::to_text() const {
  std::ostringstream out;
  out << "k_hops=" << k_hops << '\n'
      << "max_per_hop=" << max_per_hop << '\n'
      << "tau_c=" << tau_c << '\n'
      << "heads=" << heads << '\n'
      << "init_mode=" << init_mode_name(init_mode) << '\n'
      << "init_dim=" << init_dim << '\n'
      << "gcn_hidden=" << gcn_hidden << '\n'
      << "gcn_out=" << gcn_out << '\n'
      << "attention_mlp_hidden=" << attention_mlp_hidden << '\n'
      << "attention_mlp_out=" << attention_mlp_out << '\n'
      << "classifier_ratios=";
  for (std::size_t i = 0; i < classifier_ratios.size(); ++i) {
    if (i) out << ',';
    out << format_real(classifier_ratios[i]);
  }
  out << '\n'
      << "lr=" << format_real(lr) << '\n'
      << "weight_decay=" << format_real(weight_decay) << '\n'
      << "batch_size=" << batch_size << '\n'
      << "epochs=" << epochs << '\n'
      << "seed=" << seed << '\n'
      << "select=" << select_mode_name(select) << '\n'
      << "exclude=" << features.excluded_list() << '\n';
  return out.str();
}

void TrainConfig::validate() const {
  if (init_mode == InitMode::distance_labels && init_dim < 4) {
    throw InputError("config: init_mode=dl needs init_dim >= 4");
  }
  if (feature_length() == 0) throw InputError("config: the feature mask leaves no features");
}

std::vector<std::size_t> TrainConfig::classifier_sizes() const {
  const std::size_t length = feature_length();
  std::vector<std::size_t> sizes{length};
  for (double r : classifier_ratios) {
    sizes.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(r * static_cast<double>(length)))));
  }
  sizes.push_back(1);
  return sizes;
}

TrainConfig parse_config(std::string_view text, const std::string& origin) {
  TrainConfig cfg;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(origin, lineno, "expected key=value");
    const auto key = trim(line.substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1));
    } catch (const InputError& e) {
      throw ParseError(origin, lineno, e.what());
    }
  }
  return cfg;
}

TrainConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

}  // namespace walkpool
