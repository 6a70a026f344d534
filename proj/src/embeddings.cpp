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

#include "embeddings.hpp"

#include <charconv>
#include <fstream>

#include "error.hpp"

namespace voicebench {

EmbeddingSet load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);

  EmbeddingSet set;
  std::string line;
  if (!std::getline(in, line)) return set;  // empty file -> empty map
  line = trim(line);
  if (line.empty()) return set;

  // Header: id,dim=<D>
  const std::string prefix = "id,dim=";
  if (line.rfind(prefix, 0) != 0) {
    fail(ErrorCode::Format, path + ": expected header 'id,dim=<D>', got '" + line + "'");
  }
  int dim = 0;
  const std::string dim_text = line.substr(prefix.size());
  auto [p, ec] = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
  if (ec != std::errc() || p != dim_text.data() + dim_text.size() || dim <= 0) {
    fail(ErrorCode::Format, path + ": bad embedding dimension '" + dim_text + "'");
  }
  set.dim = dim;

  std::string current_id;
  std::vector<double> current;  // row-major frames of current_id
  size_t line_no = 1;

  auto flush = [&] {
    if (current_id.empty()) return;
    if (set.by_id.count(current_id)) {
      fail(ErrorCode::Format, path + ": frames of id '" + current_id + "' are not contiguous");
    }
    Matrix m(current.size() / static_cast<size_t>(dim), static_cast<size_t>(dim));
    m.data = std::move(current);
    set.by_id.emplace(current_id, std::move(m));
    current = {};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos) {
      fail(ErrorCode::Format, path + ": line " + std::to_string(line_no) + " has no values");
    }
    const std::string id = line.substr(0, comma);
    if (id != current_id) {
      flush();
      current_id = id;
    }

    int count = 0;
    size_t pos = comma + 1;
    while (pos <= line.size()) {
      size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      double v = 0.0;
      const char* begin = line.data() + pos;
      const char* end = line.data() + next;
      auto [vp, vec] = std::from_chars(begin, end, v);
      if (vec != std::errc() || vp != end) {
        fail(ErrorCode::Format, path + ": id '" + id + "', line " + std::to_string(line_no) +
                                    ": bad value '" + std::string(begin, end) + "'");
      }
      current.push_back(v);
      ++count;
      pos = next + 1;
    }
    if (count != dim) {
      fail(ErrorCode::Format, path + ": id '" + id + "', line " + std::to_string(line_no) + " has " +
                                  std::to_string(count) + " values, declared dim is " + std::to_string(dim));
    }
  }
  flush();
  return set;
}

void write_embeddings(const std::string& path, const EmbeddingSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << "id,dim=" << set.dim << '\n';
  out.precision(17);
  for (const auto& [id, m] : set.by_id) {
    for (size_t r = 0; r < m.rows; ++r) {
      out << id;
      for (size_t c = 0; c < m.cols; ++c) out << ',' << m.at(r, c);
      out << '\n';
    }
  }
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

std::vector<double> mean_pool(const Matrix& frames) {
  if (frames.rows == 0) fail(ErrorCode::InvalidArgument, "mean_pool: no frames");
  std::vector<double> out(frames.cols, 0.0);
  for (size_t r = 0; r < frames.rows; ++r) {
    const double* row = frames.row(r);
    for (size_t c = 0; c < frames.cols; ++c) out[c] += row[c];
  }
  for (double& v : out) v /= static_cast<double>(frames.rows);
  return out;
}

}  // namespace voicebench
