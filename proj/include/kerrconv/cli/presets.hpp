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

#include <string>
#include <vector>

#include "kerrconv/json_io.hpp"

namespace kerrconv::cli {

struct Preset {
  std::string name;
  std::string description;
  Json descriptor;
};

/// Named scenarios covering every protocol and mode the CLI can run.
const std::vector<Preset>& presets();

/// Throws std::out_of_range for an unknown name.
const Preset& find_preset(const std::string& name);

}  // namespace kerrconv::cli
