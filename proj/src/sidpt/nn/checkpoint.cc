// Copyright (c) 2026 The sidpt Authors
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

#include "sidpt/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sidpt/common/error.h"

namespace sidpt::nn {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'D', 'P', 'T', 'C', 'K', 'P'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

}  // namespace

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  nlohmann::json header;
  header["schema_version"] = kCheckpointSchemaVersion;
  header["config"] = ckpt.config;
  header["meta"] = ckpt.meta;
  header["tensors"] = nlohmann::json::array();
  std::string data;
  for (const auto& [name, m] : ckpt.params.entries()) {
    header["tensors"].push_back(
        {{"name", name}, {"rows", m.rows()}, {"cols", m.cols()}, {"offset", data.size()}});
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      auto f = static_cast<float>(m.data()[i]);
      char buf[4];
      std::memcpy(buf, &f, 4);
      data.append(buf, 4);
    }
  }
  const std::string text = header.dump();
  const auto len = static_cast<uint32_t>(text.size());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kMagic, 8);
  char lenbuf[4];
  std::memcpy(lenbuf, &len, 4);
  out.write(lenbuf, 4);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("write failed: " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw CheckpointError(path + ": not a checkpoint file");
  }
  uint32_t len = 0;
  std::memcpy(&len, bytes.data() + 8, 4);
  if (12 + static_cast<size_t>(len) > bytes.size()) throw CheckpointError(path + ": truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(12, len));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(path + ": bad header: " + e.what());
  }
  if (header.value("schema_version", -1) != kCheckpointSchemaVersion) {
    throw CheckpointError(path + ": unsupported schema version");
  }
  Checkpoint ckpt;
  ckpt.config = header.value("config", nlohmann::json::object());
  ckpt.meta = header.value("meta", nlohmann::json::object());
  const size_t data_start = 12 + len;
  for (const auto& t : header.at("tensors")) {
    const auto name = t.at("name").get<std::string>();
    const auto rows = t.at("rows").get<Eigen::Index>();
    const auto cols = t.at("cols").get<Eigen::Index>();
    const auto offset = t.at("offset").get<size_t>();
    const size_t n = static_cast<size_t>(rows * cols);
    if (data_start + offset + 4 * n > bytes.size()) {
      throw CheckpointError(path + ": tensor '" + name + "' out of bounds");
    }
    Matrix m(rows, cols);
    const char* p = bytes.data() + data_start + offset;
    for (size_t i = 0; i < n; ++i) {
      float f;
      std::memcpy(&f, p + 4 * i, 4);
      m.data()[i] = f;
    }
    ckpt.params.Add(name, std::move(m));
  }
  return ckpt;
}

}  // namespace sidpt::nn
