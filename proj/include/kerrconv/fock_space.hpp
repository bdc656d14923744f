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

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kerrconv/types.hpp"

namespace kerrconv {

using Occupation = std::vector<int>;

struct OccupationHash {
  std::size_t operator()(const Occupation& occ) const noexcept;
};

/// Fixed total photon number over a group of modes (indices into the
/// owning space's mode list).
struct SectorConstraint {
  std::vector<std::size_t> modes;
  int total = 0;

  bool operator==(const SectorConstraint&) const = default;
};

class FockSpace;
using SpacePtr = std::shared_ptr<const FockSpace>;

/// Truncated multimode Fock space with an enumerated occupation basis.
///
/// Basis vectors are the occupation vectors admitted by the per-mode cutoffs
/// and all sector constraints, ordered colexicographically: mode 0 varies
/// fastest. For a single mode the index equals the photon number; for a
/// single-photon sector over modes b_0..b_N the index k holds |phi_k>. The
/// product of two spaces therefore indexes as i_first + dim_first * i_second.
///
/// Spaces are immutable and shared through SpacePtr.
class FockSpace {
 public:
  /// Throws ConfigurationError for an empty mode list, negative cutoffs,
  /// duplicate labels or a sector that no occupation vector can reach.
  static SpacePtr build(std::vector<std::string> modes, std::vector<int> cutoffs,
                        std::optional<int> sector = std::nullopt);

  /// Same cutoff for every mode.
  static SpacePtr build(std::vector<std::string> modes, int cutoff,
                        std::optional<int> sector = std::nullopt);

  static SpacePtr with_constraints(std::vector<std::string> modes, std::vector<int> cutoffs,
                                   std::vector<SectorConstraint> sectors);

  /// Modes of `first` followed by modes of `second`; labels must be disjoint.
  static SpacePtr product(const FockSpace& first, const FockSpace& second);

  /// Space over `keep` (kept in this space's mode order). Sector groups that
  /// lie entirely inside `keep` survive; groups split by `keep` are dropped
  /// and the kept modes' cutoffs are capped at the group total.
  SpacePtr restricted_to(const std::vector<std::string>& keep) const;

  std::size_t dimension() const { return basis_.size(); }
  std::size_t num_modes() const { return modes_.size(); }
  const std::vector<std::string>& modes() const { return modes_; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  const std::vector<SectorConstraint>& sectors() const { return sectors_; }

  const Occupation& occupation(std::size_t index) const { return basis_.at(index); }
  std::optional<std::size_t> index_of(const Occupation& occ) const;

  bool has_mode(const std::string& label) const;
  /// Throws UnknownMode.
  std::size_t mode_index(const std::string& label) const;
  std::vector<std::size_t> mode_indices(const std::vector<std::string>& labels) const;

  /// Sector total when exactly one constraint covers every mode.
  std::optional<int> uniform_sector() const;

  bool operator==(const FockSpace& other) const;
  std::string describe() const;

 private:
  FockSpace() = default;
  void enumerate();

  std::vector<std::string> modes_;
  std::vector<int> cutoffs_;
  std::vector<SectorConstraint> sectors_;
  std::vector<Occupation> basis_;
  std::unordered_map<Occupation, std::size_t, OccupationHash> index_;
};

bool same_space(const SpacePtr& a, const SpacePtr& b);

}  // namespace kerrconv
