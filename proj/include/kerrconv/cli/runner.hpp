// Copyright 2026 The kerrconv Authors
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

#include <cstdint>
#include <optional>
#include <string>

#include "kerrconv/cli/descriptor.hpp"

namespace kerrconv::cli {

enum class OutputFormat { Json, Csv };

struct RunOptions {
  /// Use the dense brute-force circuit wherever the protocol has one.
  bool oracle = false;
  std::optional<OutputFormat> format;
  std::optional<std::uint64_t> seed;
};

struct RunOutput {
  /// 0 on success, 1 when the protocol reported an error.
  int exit_code = 0;
  OutputFormat format = OutputFormat::Json;
  std::string text;
  Json document;
};

/// FNV-1a (64 bit) over the canonical dump of the descriptor and run options.
std::string config_hash(const ExperimentDescriptor& descriptor, const RunOptions& options);

/// Throws DescriptorError when the run needs a seed and none is given.
RunOutput run(const ExperimentDescriptor& descriptor, const RunOptions& options = {});

std::string format_double(double x);

}  // namespace kerrconv::cli
