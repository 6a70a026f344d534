// Copyright 2026 The VoiceBench Authors
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

#include "features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "csv.hpp"
#include "error.hpp"

namespace voicebench {

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::Embedding: return "embedding";
    case FeatureKind::Acoustic: return "acoustic";
    case FeatureKind::Mfcc: return "mfcc";
  }
  return "?";
}

FeatureKind feature_kind_from_name(const std::string& name) {
  const std::string n = lowercase(name);
  if (n == "embedding" || n == "featurestates") return FeatureKind::Embedding;
  if (n == "acoustic" || n == "opensmile") return FeatureKind::Acoustic;
  if (n == "mfcc") return FeatureKind::Mfcc;
  fail(ErrorCode::Config, "unknown feature set '" + name + "' (expected embedding, acoustic or mfcc)");
}

void write_feature_table(const std::string& path, const FeatureMatrix& fm) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out.precision(17);
  out << "id";
  for (const auto& name : fm.names) out << ',' << csv_quote(name);
  out << '\n';
  for (size_t r = 0; r < fm.ids.size(); ++r) {
    out << csv_quote(fm.ids[r]);
    for (size_t c = 0; c < fm.names.size(); ++c) {
      const double v = fm.values.at(r, c);
      out << ',';
      if (std::isnan(v)) out << "NA";
      else out << v;
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

FeatureMatrix read_feature_table(const std::string& path) {
  const CsvTable csv = read_csv(path);
  if (csv.header.empty() || csv.header[0] != "id") {
    fail(ErrorCode::Schema, path + ": first column must be 'id'");
  }
  FeatureMatrix fm;
  fm.names.assign(csv.header.begin() + 1, csv.header.end());
  fm.values = Matrix(csv.rows.size(), fm.names.size());
  for (size_t r = 0; r < csv.rows.size(); ++r) {
    fm.ids.push_back(csv.rows[r][0]);
    for (size_t c = 0; c < fm.names.size(); ++c) {
      const std::string& cell = csv.rows[r][c + 1];
      if (cell == "NA" || cell.empty()) {
        fm.values.at(r, c) = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size()) {
        fail(ErrorCode::Format, path + ": row " + std::to_string(r) + ", column '" +
                                    fm.names[c] + "': bad number '" + cell + "'");
      }
      fm.values.at(r, c) = v;
    }
  }
  return fm;
}

}  // namespace voicebench
