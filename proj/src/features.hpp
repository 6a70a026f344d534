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

#include <string>
#include <vector>

#include "util.hpp"

namespace voicebench {

enum class FeatureKind { Embedding, Acoustic, Mfcc };

const char* feature_kind_name(FeatureKind kind);
FeatureKind feature_kind_from_name(const std::string& name);

// Rows = patients, columns = named features. NaN marks a missing value.
struct FeatureMatrix {
  std::vector<std::string> ids;
  std::vector<std::string> names;
  Matrix values;  // ids.size() x names.size()
};

// Delimited text: "id" column plus named feature columns, missing marker NA.
void write_feature_table(const std::string& path, const FeatureMatrix& fm);
FeatureMatrix read_feature_table(const std::string& path);

}  // namespace voicebench
