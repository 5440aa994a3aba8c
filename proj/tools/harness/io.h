// Copyright 2026 The qdiffuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDIFFUSE_HARNESS_IO_H_
#define QDIFFUSE_HARNESS_IO_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdiffuse/ensemble.h"

namespace qdiffuse::harness {

inline constexpr int kCsvSchemaVersion = 1;

using CsvCell = std::variant<std::string, std::int64_t, double>;

// Comma-separated output with a schema comment line and a header row. Doubles
// are written with 17 significant digits so they read back exactly.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<CsvCell>& cells);
  void close();

 private:
  std::filesystem::path path_;
  std::filesystem::path partial_;
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws if absent
};

CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double x);

// Creates `dir`; throws ConfigError if it exists and is not empty.
void prepare_output_dir(const std::filesystem::path& dir);

// Writes via a temporary file and a rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Ensemble dump: index, weight, task-appropriate summary columns, then every
// matrix entry as re_<i>_<j>, im_<i>_<j> so that the states can be reloaded.
void write_ensemble_csv(const std::filesystem::path& path, const WeightedEnsemble& ensemble,
                        const std::vector<std::vector<CsvCell>>& provenance = {},
                        const std::vector<std::string>& provenance_header = {});
WeightedEnsemble read_ensemble_csv(const std::filesystem::path& path);

}  // namespace qdiffuse::harness

#endif  // QDIFFUSE_HARNESS_IO_H_
