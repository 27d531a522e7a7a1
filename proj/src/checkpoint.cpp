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

#include "checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "errors.hpp"

namespace walkpool {

namespace {

constexpr char kMagic[8] = {'W', 'P', 'C', 'K', 'P', 'T', '\0', '\1'};
constexpr std::uint32_t kVersion = 1;
// Guards against allocating absurd sizes from a corrupt file.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_bytes(std::string& out, const std::string& s) {
  put_u64(out, s.size());
  out += s;
}

class Reader {
 public:
  Reader(const std::string& data, std::string origin) : data_(data), origin_(std::move(origin)) {}

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
    pos_ += 8;
    return v;
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
    pos_ += 4;
    return v;
  }

  std::string bytes() {
    const std::uint64_t n = u64();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void expect_magic() {
    need(8);
    if (std::memcmp(data_.data() + pos_, kMagic, 8) != 0) throw ParseError(origin_ + ": not a walkpool checkpoint");
    pos_ += 8;
  }

  bool done() const { return pos_ == data_.size(); }
  std::uint64_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::uint64_t n) const {
    if (n > data_.size() - pos_) throw ParseError(origin_ + ": truncated checkpoint");
  }

  const std::string& data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  put_u32(out, 0);
  put_bytes(out, ckpt.header);
  put_u64(out, ckpt.tensors.size());
  for (const auto& [name, m] : ckpt.tensors) {
    put_bytes(out, name);
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (double x : m.data()) put_u64(out, std::bit_cast<std::uint64_t>(x));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write checkpoint " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint " + path.string());
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  Reader r(data, path.string());
  r.expect_magic();
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw ParseError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  r.u32();
  Checkpoint ckpt;
  ckpt.header = r.bytes();
  const std::uint64_t count = r.u64();
  for (std::uint64_t t = 0; t < count; ++t) {
    std::string name = r.bytes();
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    if (rows != 0 && (cols > kMaxElements / rows || rows * cols > r.remaining() / 8)) {
      throw ParseError(path.string() + ": tensor '" + name + "' exceeds the file size");
    }
    std::vector<double> values(rows * cols);
    for (double& x : values) x = std::bit_cast<double>(r.u64());
    ckpt.tensors.emplace_back(std::move(name), DenseMatrix(rows, cols, std::move(values)));
  }
  if (!r.done()) throw ParseError(path.string() + ": trailing bytes after checkpoint");
  return ckpt;
}

}  // namespace walkpool
