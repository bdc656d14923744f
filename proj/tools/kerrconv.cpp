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

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kerrconv/cli/descriptor.hpp"
#include "kerrconv/cli/presets.hpp"
#include "kerrconv/cli/runner.hpp"

namespace {

constexpr int kUsageError = 2;

int list_presets() {
  std::size_t width = 0;
  for (const auto& p : kerrconv::cli::presets()) width = std::max(width, p.name.size());
  for (const auto& p : kerrconv::cli::presets()) {
    std::cout << std::left << std::setw(static_cast<int>(width) + 2) << p.name << p.description << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = kerrconv::cli;
  CLI::App app{"Simulate Kerr-based quantum state converters and their applications"};
  std::string preset;
  std::string config;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 0;
  bool use_oracle = false;
  bool show_presets = false;
  auto* preset_opt = app.add_option("--preset", preset, "Named scenario (see --list-presets)");
  auto* config_opt = app.add_option("--config", config, "Experiment descriptor (JSON file)")->check(CLI::ExistingFile);
  preset_opt->excludes(config_opt);
  app.add_option("--out", out_path, "Write the result here instead of stdout");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", seed, "Override the descriptor seed");
  app.add_flag("--oracle", use_oracle, "Use the dense brute-force circuit where available");
  app.add_flag("--list-presets", show_presets, "Print the named scenarios and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }
  if (show_presets) return list_presets();
  if (preset.empty() && config.empty()) {
    std::cerr << "error: give --preset NAME or --config FILE\n";
    return kUsageError;
  }

  cli::ExperimentDescriptor descriptor;
  try {
    if (!preset.empty()) {
      descriptor = cli::make_descriptor(cli::find_preset(preset).descriptor);
    } else {
      std::ifstream in(config);
      std::stringstream buffer;
      buffer << in.rdbuf();
      descriptor = cli::parse_descriptor(buffer.str());
    }
  } catch (const cli::DescriptorError& e) {
    std::cerr << (config.empty() ? preset : config) << ": " << e.what() << "\n";
    return kUsageError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  cli::RunOptions options;
  options.oracle = use_oracle;
  if (!format.empty()) options.format = format == "csv" ? cli::OutputFormat::Csv : cli::OutputFormat::Json;
  if (*seed_opt) options.seed = seed;

  cli::RunOutput result;
  try {
    result = cli::run(descriptor, options);
  } catch (const cli::DescriptorError& e) {
    std::cerr << (config.empty() ? preset : config) << ": " << e.what() << "\n";
    return kUsageError;
  }

  const std::string target = !out_path.empty() ? out_path : descriptor.output_path.value_or("");
  if (target.empty()) {
    std::cout << result.text;
  } else {
    std::ofstream out(target, std::ios::binary);
    out << result.text;
    if (!out) {
      std::cerr << "error: cannot write " << target << "\n";
      return 1;
    }
  }
  return result.exit_code;
}
