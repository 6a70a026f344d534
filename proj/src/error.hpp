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

#include <stdexcept>
#include <string>

namespace voicebench {

// Error categories. Mirrored one-to-one by the vb_status codes of the C API.
enum class ErrorCode {
  InvalidArgument,
  Io,
  Format,       // malformed file contents (WAV, embeddings, bundle, ...)
  Schema,       // manifest/config column or key problems
  RowError,     // a specific manifest row is bad
  State,        // operation not valid for the object's current state
  Numeric,      // divergence, non-finite values
  Unsupported,  // recognized but unsupported input (e.g. compressed WAV)
  Checksum,
  Version,
  Config,
  Partial,      // some benchmark cells failed
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace voicebench
