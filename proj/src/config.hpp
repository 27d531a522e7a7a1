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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "walkpool.hpp"

namespace walkpool {

enum class InitMode { ones, distance_labels, file };
enum class SelectMode { best_val, final_epoch };

/// Every knob of the WalkPool pipeline. Defaults reproduce the published
/// attribute-free setup: 2 hops, 100 nodes per hop, tau_c = 7, 2 heads,
/// all-ones Z0 of width 32, 32-wide GCN and attention MLPs, Adam at 5e-5
/// without weight decay, batches of 32 for 50 epochs.
struct TrainConfig {
  unsigned k_hops = 2;
  std::size_t max_per_hop = 100;
  unsigned tau_c = 7;
  std::size_t heads = 2;
  InitMode init_mode = InitMode::ones;
  std::size_t init_dim = 32;
  std::size_t gcn_hidden = 32;
  std::size_t gcn_out = 32;
  std::size_t attention_mlp_hidden = 32;
  std::size_t attention_mlp_out = 32;
  // Classifier hidden widths as multiples of the feature length; a final
  // scalar output layer is always appended.
  std::vector<double> classifier_ratios = {20, 20, 10, 1};
  double lr = 5e-5;
  double weight_decay = 0.0;
  std::size_t batch_size = 32;
  std::size_t epochs = 50;
  std::uint64_t seed = 1;
  SelectMode select = SelectMode::best_val;
  FeatureMask features;

  /// Sets one field from its key=value spelling. Throws InputError naming the
  /// key on unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  /// Canonical key=value lines, one per field, in declaration order.
  std::string to_text() const;

  void validate() const;

  std::size_t feature_length() const { return walk_profile_length(heads, tau_c, features); }
  std::vector<std::size_t> classifier_sizes() const;
};

/// Parses a key=value config. '#' comments and blank lines are ignored;
/// values not mentioned keep their defaults.
TrainConfig parse_config(std::string_view text, const std::string& origin = "<config>");
TrainConfig load_config(const std::filesystem::path& path);

std::string_view init_mode_name(InitMode m);
std::string_view select_mode_name(SelectMode m);

}  // namespace walkpool
