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
#include <utility>
#include <vector>

#include "graph_core.hpp"

namespace walkpool {

/// Checkpoint container, version 1. All integers are unsigned little-endian;
/// doubles are stored as their IEEE-754 bit patterns in a little-endian u64.
///
///   bytes 0..7   magic "WPCKPT\0\1"
///   u32          format version (1)
///   u32          reserved, 0
///   u64 + bytes  header text (key=value lines)
///   u64          tensor count
///   per tensor:  u64 + bytes name, u64 rows, u64 cols, rows*cols doubles
struct Checkpoint {
  std::string header;
  std::vector<std::pair<std::string, DenseMatrix>> tensors;

  bool operator==(const Checkpoint&) const = default;
};

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace walkpool
