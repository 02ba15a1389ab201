// Copyright 2026 The drpr Authors. All Rights Reserved.
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
// =============================================================================

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace drpr::cli {

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

// Sidecar written next to every output file as "<output>.manifest.json". The
// data files themselves never embed run metadata, so identical runs produce
// identical bytes.
class RunManifest {
 public:
  explicit RunManifest(std::string command);

  void flag(const std::string& name, const std::string& value) { flags_[name] = value; }
  void input(const std::filesystem::path& path);
  void output(const std::filesystem::path& path) { outputs_.push_back(path); }

  // Writes one sidecar per recorded output.
  void write_all() const;

 private:
  std::string command_;
  std::map<std::string, std::string> flags_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::filesystem::path> outputs_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace drpr::cli
