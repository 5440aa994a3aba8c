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

#include "io.h"

#include <cstdio>
#include <sstream>

#include "config.h"
#include "qdiffuse/errors.h"
#include "qdiffuse/tasks.h"

namespace qdiffuse::harness {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), partial_(path.string() + ".partial"), columns_(header.size()) {
  out_.open(partial_, std::ios::binary);
  if (!out_) throw Error("cannot write " + partial_.string());
  out_ << "# schema_version=" << kCsvSchemaVersion << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != columns_) {
    throw Error(path_.string() + ": row has " + std::to_string(cells.size()) +
                " cells, header has " + std::to_string(columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& v) {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, double>) {
            out_ << format_double(v);
          } else {
            out_ << v;
          }
        },
        cells[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error("write failed: " + partial_.string());
  std::filesystem::rename(partial_, path_);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InvalidArgument("CSV has no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != table.header.size()) {
        throw InvalidArgument(path.string() + ": ragged row");
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (!have_header) throw InvalidArgument(path.string() + ": no header row");
  return table;
}

void prepare_output_dir(const std::filesystem::path& dir) {
  if (std::filesystem::exists(dir)) {
    if (!std::filesystem::is_directory(dir) || !std::filesystem::is_empty(dir)) {
      throw ConfigError("output directory " + dir.string() + " exists and is not empty");
    }
    return;
  }
  std::filesystem::create_directories(dir);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path partial = path.string() + ".partial";
  {
    std::ofstream out(partial, std::ios::binary);
    out << text;
    if (!out) throw Error("cannot write " + partial.string());
  }
  std::filesystem::rename(partial, path);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

void write_ensemble_csv(const std::filesystem::path& path, const WeightedEnsemble& ensemble,
                        const std::vector<std::vector<CsvCell>>& provenance,
                        const std::vector<std::string>& provenance_header) {
  if (!provenance.empty() && provenance.size() != ensemble.size()) {
    throw Error("provenance rows do not match ensemble size");
  }
  const int n = ensemble.num_qubits();
  const Eigen::Index d = ensemble.dim();
  std::vector<std::string> header = {"index", "weight"};
  if (n == 1) {
    header.insert(header.end(), {"bloch_x", "bloch_y", "bloch_z"});
  } else {
    header.push_back("mx");
  }
  header.push_back("purity");
  header.insert(header.end(), provenance_header.begin(), provenance_header.end());
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      header.push_back("re_" + std::to_string(i) + "_" + std::to_string(j));
      header.push_back("im_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  CsvWriter csv(path, header);
  for (std::size_t k = 0; k < ensemble.size(); ++k) {
    const auto& m = ensemble[k];
    std::vector<CsvCell> row = {static_cast<std::int64_t>(k), m.weight};
    if (n == 1) {
      const auto b = bloch_coordinates(m.state);
      row.insert(row.end(), {b.x, b.y, b.z});
    } else {
      row.push_back(magnetization_x(m.state));
    }
    row.push_back(purity(m.state));
    if (!provenance.empty()) row.insert(row.end(), provenance[k].begin(), provenance[k].end());
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        row.push_back(m.state(i, j).real());
        row.push_back(m.state(i, j).imag());
      }
    }
    csv.row(row);
  }
  csv.close();
}

WeightedEnsemble read_ensemble_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t weight = t.column("weight");
  const std::size_t first = t.column("re_0_0");
  const std::size_t entries = (t.header.size() - first) / 2;
  Eigen::Index d = 1;
  while (static_cast<std::size_t>(d * d) < entries) ++d;
  if (static_cast<std::size_t>(d * d) != entries) {
    throw InvalidArgument(path.string() + ": matrix columns do not form a square");
  }
  std::vector<EnsembleMember> members;
  for (const auto& r : t.rows) {
    Matrix m(d, d);
    std::size_t c = first;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j, c += 2) {
        m(i, j) = cplx(std::stod(r[c]), std::stod(r[c + 1]));
      }
    }
    members.push_back({DensityMatrix::from_matrix(std::move(m)), std::stod(r[weight])});
  }
  if (members.empty()) throw InvalidArgument(path.string() + ": no members");
  return WeightedEnsemble(std::move(members));
}

}  // namespace qdiffuse::harness
