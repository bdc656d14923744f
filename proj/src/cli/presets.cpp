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

#include "kerrconv/cli/presets.hpp"

#include <stdexcept>

namespace kerrconv::cli {

namespace {

std::vector<Preset> make_presets() {
  std::vector<Preset> p;
  auto add = [&p](const char* name, const char* description, Json descriptor) {
    p.push_back({name, description, std::move(descriptor)});
  };

  add("fig1-device", "Kerr/splitter device against the dense circuit, N = 3",
      {{"protocol", "identity-check"}, {"check", "device"}, {"N", 3}});
  add("fig2-conversion", "Conditional a -> b conversion with phase-state detection, N = 3",
      {{"protocol", "convert"}, {"N", 3}, {"direction", "a2b"}, {"mode", "conditional"},
       {"input", {{"amplitudes", {0.4, Json::array({0.2, 0.5}), -0.3, Json::array({0.0, 0.6})}}}}});
  add("fig2b-backward", "Conditional b -> a conversion, N = 3",
      {{"protocol", "convert"}, {"N", 3}, {"direction", "b2a"}, {"mode", "conditional"},
       {"input", {{"fock_mixture", {0.4, 0.3, 0.2, 0.1}}}}});
  add("sec3-state-detection", "a -> b conversion detecting a general state, N = 2",
      {{"protocol", "convert"}, {"N", 2}, {"direction", "a2b"}, {"mode", "conditional"},
       {"detect_state", {0.6, Json::array({0.0, 0.5}), Json::array({0.4, -0.3})}},
       {"input", {{"phase", 0.7}}}});
  add("sec3-unconditional-a2b", "a -> b conversion with feed-forward over all phase outcomes, N = 3",
      {{"protocol", "convert"}, {"N", 3}, {"direction", "a2b"}, {"mode", "unconditional"},
       {"input", {{"random", "mixed"}}}, {"seed", 11}});
  add("sec3-unconditional-b2a", "b -> a conversion with click-dependent corrections, N = 3",
      {{"protocol", "convert"}, {"N", 3}, {"direction", "b2a"}, {"mode", "unconditional"},
       {"input", {{"random", "pure"}}}, {"seed", 12}});
  add("sec3-repeat-until-success", "Sampled b -> a repeat-until-success statistics, N = 3",
      {{"protocol", "convert"}, {"N", 3}, {"direction", "b2a"}, {"mode", "sampled"}, {"runs", 10000},
       {"input", {{"random", "pure"}}}, {"seed", 2026}});
  add("fig3-unitary", "Engineering a unitary with T_k = 0.8, N = 2",
      {{"protocol", "engineer"}, {"N", 2}, {"U", "dft"}, {"Tk", {0.8, 0.8, 0.8}}, {"mode", "conditional"},
       {"input", {{"amplitudes", {0.6, 0.0, 0.8}}}}});
  add("fig3-projective", "Engineering a projector onto a rotated Fock state, N = 2",
      {{"protocol", "engineer"}, {"N", 2}, {"UR", "random"}, {"Tk", {1.0, 0.0, 0.0}}, {"mode", "conditional"},
       {"input", {{"random", "pure"}}}, {"seed", 5}});
  add("fig3-target", "Engineering an arbitrary target operator, N = 2",
      {{"protocol", "engineer"}, {"N", 2},
       {"A", {{0.5, Json::array({0.0, 0.2}), 0.1}, {0.0, 0.7, -0.3}, {Json::array({0.1, 0.1}), 0.2, 0.4}}},
       {"mode", "conditional"}, {"input", {{"phase", 1.1}}}});
  add("fig3-vacuum", "Engineering with the auxiliary mode prepared in vacuum, N = 2",
      {{"protocol", "engineer"}, {"N", 2}, {"U", "dft"}, {"preparation", "vacuum"}, {"mode", "conditional"},
       {"input", {{"fock_mixture", {0.5, 0.25, 0.25}}}}});
  add("sec4-unconditional", "Engineering with phase feed-forward, T_k = 1, N = 2",
      {{"protocol", "engineer"}, {"N", 2}, {"U", "random"}, {"mode", "unconditional"},
       {"input", {{"random", "mixed"}}}, {"seed", 9}});
  add("sec5-overlap", "Overlap probes <phi_k|A rho A^dagger|phi_k>, N = 3",
      {{"protocol", "measure"}, {"kind", "overlap"}, {"N", 3}, {"U", "random"},
       {"input", {{"random", "mixed"}}}, {"seed", 21}});
  add("sec5-expectation", "Expectation value of a non-Hermitian observable, N = 2",
      {{"protocol", "measure"}, {"kind", "expectation"}, {"N", 2},
       {"Z", {{1.0, Json::array({0.0, 0.5}), 0.2}, {0.3, -0.4, 0.0}, {0.0, Json::array({0.1, 0.1}), 0.8}}},
       {"input", {{"random", "mixed"}}}, {"seed", 22}});
  add("sec5-matrix-elements", "Single Fock matrix element from two probe settings, N = 3",
      {{"protocol", "measure"}, {"kind", "matrix-element"}, {"N", 3}, {"m", 1}, {"n", 3},
       {"input", {{"random", "mixed"}}}, {"seed", 23}});
  add("sec5-unconditional-probe", "Phase feed-forward probe (N+1) times the conditional signal, N = 2",
      {{"protocol", "measure"}, {"kind", "unconditional"}, {"N", 2}, {"UR", "random"},
       {"Tk", {1.0, 0.0, 0.0}}, {"input", {{"random", "mixed"}}}, {"seed", 24}});
  add("sec5-reconstruct", "Experimental diagonalization of a mixed state, N = 3",
      {{"protocol", "reconstruct"}, {"kind", "diagonalize"}, {"N", 3}, {"mode", "analytic"},
       {"direction", "max"}, {"input", {{"random", "mixed"}}}, {"seed", 25}});
  add("sec5-fock-matrix", "Full Fock-basis density matrix from simulated shots, N = 2",
      {{"protocol", "reconstruct"}, {"kind", "fock-matrix"}, {"N", 2}, {"mode", "shots"}, {"shots", 100000},
       {"input", {{"random", "mixed"}}}, {"seed", 26}});
  add("sec5-qnd", "Purification towards the dominant eigenvector, N = 2",
      {{"protocol", "reconstruct"}, {"kind", "qnd"}, {"N", 2}, {"input", {{"random", "mixed"}}}, {"seed", 27}});
  add("fig4-telemanip", "Conditional telemanipulation of a unitary, N = 2",
      {{"protocol", "telemanip"}, {"N", 2}, {"U", "random"}, {"Tk", {0.9, 0.9, 0.9}}, {"mode", "conditional"},
       {"input", {{"random", "pure"}}}, {"seed", 31}});
  add("fig4-teleport", "Bare teleportation of a single-mode state, N = 3",
      {{"protocol", "telemanip"}, {"N", 3}, {"mode", "unconditional"},
       {"input", {{"amplitudes", {0.5, Json::array({0.0, 0.5}), -0.5, 0.5}}}}});
  add("fig4-reduced", "Reduced states of the telemanipulation source, N = 2",
      {{"protocol", "telemanip"}, {"N", 2}, {"U", "random"}, {"mode", "reduced"},
       {"input", {{"random", "mixed"}}}, {"seed", 32}});
  add("fig4-session", "Alice/Bob session with shutter-controlled delivery, N = 2",
      {{"protocol", "telemanip"}, {"N", 2}, {"U", "dft"}, {"mode", "session"}, {"feedback", "shutter"},
       {"trials", 12}, {"input", {{"phase", 0.3}}}, {"seed", 33}});
  add("sec6-unconditional", "Telemanipulation of a Fock-diagonal filter with phase corrections, N = 2",
      {{"protocol", "telemanip"}, {"N", 2}, {"Tk", {1.0, 0.8, 0.6}}, {"mode", "unconditional"},
       {"input", {{"random", "pure"}}}, {"seed", 34}});
  add("sec6-session", "Alice/Bob session with feed-forward corrections, N = 2",
      {{"protocol", "telemanip"}, {"N", 2}, {"mode", "session"}, {"feedback", "correction"}, {"trials", 12},
       {"input", {{"random", "pure"}}}, {"seed", 35}});
  add("appendix-identity", "Vacuum-projected splitter equals T^n over 50 random cases",
      {{"protocol", "identity-check"}, {"check", "appendix"}, {"cases", 50}, {"max_cutoff", 6}, {"seed", 41}});
  return p;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = make_presets();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw std::out_of_range("unknown preset: " + name);
}

}  // namespace kerrconv::cli
