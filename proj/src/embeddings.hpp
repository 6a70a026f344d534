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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "util.hpp"

namespace voicebench {

// Precomputed per-frame feature vectors, one T x D matrix per recording id.
//
// Interchange format (text): header line "id,dim=<D>", then one line per
// frame "id,v1,...,vD"; all frames of an id are contiguous. The same format
// with dim=88 supplies externally computed acoustic vectors.
struct EmbeddingSet {
  int dim = 0;
  std::map<std::string, Matrix> by_id;
};

EmbeddingSet load_embeddings(const std::string& path);

void write_embeddings(const std::string& path, const EmbeddingSet& set);

// Element d of the result is the mean over frames of column d.
std::vector<double> mean_pool(const Matrix& frames);

}  // namespace voicebench
