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

#include "kerrconv/fock_space.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace kerrconv {

namespace {

constexpr std::size_t kMaxDimension = std::size_t{1} << 22;

}  // namespace

std::size_t OccupationHash::operator()(const Occupation& occ) const noexcept {
  std::size_t seed = occ.size();
  for (int n : occ) {
    seed ^= static_cast<std::size_t>(n) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  }
  return seed;
}

SpacePtr FockSpace::build(std::vector<std::string> modes, std::vector<int> cutoffs,
                          std::optional<int> sector) {
  std::vector<SectorConstraint> sectors;
  if (sector) {
    SectorConstraint all;
    all.modes.resize(modes.size());
    std::iota(all.modes.begin(), all.modes.end(), std::size_t{0});
    all.total = *sector;
    sectors.push_back(std::move(all));
  }
  return with_constraints(std::move(modes), std::move(cutoffs), std::move(sectors));
}

SpacePtr FockSpace::build(std::vector<std::string> modes, int cutoff, std::optional<int> sector) {
  std::vector<int> cutoffs(modes.size(), cutoff);
  return build(std::move(modes), std::move(cutoffs), sector);
}

SpacePtr FockSpace::with_constraints(std::vector<std::string> modes, std::vector<int> cutoffs,
                                     std::vector<SectorConstraint> sectors) {
  if (modes.empty()) {
    throw ConfigurationError("FockSpace: empty mode list");
  }
  if (cutoffs.size() != modes.size()) {
    throw ConfigurationError("FockSpace: one cutoff per mode required");
  }
  std::set<std::string> seen;
  for (const auto& m : modes) {
    if (!seen.insert(m).second) {
      throw ConfigurationError("FockSpace: duplicate mode label '" + m + "'");
    }
  }
  for (int c : cutoffs) {
    if (c < 0) throw ConfigurationError("FockSpace: negative cutoff");
  }
  std::vector<bool> covered(modes.size(), false);
  for (auto& s : sectors) {
    if (s.modes.empty()) throw ConfigurationError("FockSpace: sector over no modes");
    std::sort(s.modes.begin(), s.modes.end());
    int capacity = 0;
    for (std::size_t m : s.modes) {
      if (m >= modes.size()) throw ConfigurationError("FockSpace: sector mode out of range");
      if (covered[m]) throw ConfigurationError("FockSpace: overlapping sector groups");
      covered[m] = true;
      capacity += cutoffs[m];
    }
    if (s.total < 0 || s.total > capacity) {
      throw ConfigurationError("FockSpace: sector " + std::to_string(s.total) +
                               " unattainable under cutoffs (max " + std::to_string(capacity) + ")");
    }
  }

  auto space = std::shared_ptr<FockSpace>(new FockSpace());
  space->modes_ = std::move(modes);
  space->cutoffs_ = std::move(cutoffs);
  space->sectors_ = std::move(sectors);
  space->enumerate();
  return space;
}

void FockSpace::enumerate() {
  const std::size_t m = modes_.size();
  // group_of[i] = sector index or -1; below[i] = capacity of the group's
  // modes with index < i (those still unassigned when mode i is set).
  std::vector<int> group_of(m, -1);
  std::vector<int> below(m, 0);
  for (std::size_t g = 0; g < sectors_.size(); ++g) {
    int acc = 0;
    for (std::size_t idx : sectors_[g].modes) {
      group_of[idx] = static_cast<int>(g);
      below[idx] = acc;
      acc += cutoffs_[idx];
    }
  }

  Occupation occ(m, 0);
  std::vector<int> sums(sectors_.size(), 0);
  // Recurse from the last mode (most significant) down to mode 0.
  auto recurse = [&](auto&& self, std::ptrdiff_t i) -> void {
    if (i < 0) {
      for (std::size_t g = 0; g < sectors_.size(); ++g) {
        if (sums[g] != sectors_[g].total) return;
      }
      if (basis_.size() >= kMaxDimension) {
        throw ConfigurationError("FockSpace: dimension exceeds supported maximum");
      }
      index_.emplace(occ, basis_.size());
      basis_.push_back(occ);
      return;
    }
    const auto ui = static_cast<std::size_t>(i);
    const int g = group_of[ui];
    for (int n = 0; n <= cutoffs_[ui]; ++n) {
      if (g >= 0) {
        const int after = sums[g] + n;
        if (after > sectors_[g].total) break;
        if (after + below[ui] < sectors_[g].total) continue;
        sums[g] = after;
      }
      occ[ui] = n;
      self(self, i - 1);
      if (g >= 0) sums[g] -= n;
    }
    occ[ui] = 0;
  };
  recurse(recurse, static_cast<std::ptrdiff_t>(m) - 1);
  if (basis_.empty()) {
    throw ConfigurationError("FockSpace: no admissible occupation vectors");
  }
}

SpacePtr FockSpace::product(const FockSpace& first, const FockSpace& second) {
  std::vector<std::string> modes = first.modes_;
  modes.insert(modes.end(), second.modes_.begin(), second.modes_.end());
  std::vector<int> cutoffs = first.cutoffs_;
  cutoffs.insert(cutoffs.end(), second.cutoffs_.begin(), second.cutoffs_.end());
  std::vector<SectorConstraint> sectors = first.sectors_;
  for (auto s : second.sectors_) {
    for (auto& idx : s.modes) idx += first.num_modes();
    sectors.push_back(std::move(s));
  }
  for (const auto& label : second.modes_) {
    if (first.has_mode(label)) {
      throw SpaceMismatch("FockSpace::product: mode '" + label + "' appears in both factors");
    }
  }
  return with_constraints(std::move(modes), std::move(cutoffs), std::move(sectors));
}

SpacePtr FockSpace::restricted_to(const std::vector<std::string>& keep) const {
  if (keep.empty()) throw ConfigurationError("restricted_to: empty mode subset");
  std::vector<bool> kept(modes_.size(), false);
  for (const auto& label : keep) kept[mode_index(label)] = true;

  std::vector<std::size_t> new_index(modes_.size(), 0);
  std::vector<std::string> modes;
  std::vector<int> cutoffs;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!kept[i]) continue;
    new_index[i] = modes.size();
    modes.push_back(modes_[i]);
    cutoffs.push_back(cutoffs_[i]);
  }
  std::vector<SectorConstraint> sectors;
  for (const auto& s : sectors_) {
    const auto inside = std::count_if(s.modes.begin(), s.modes.end(),
                                      [&](std::size_t idx) { return kept[idx]; });
    if (inside == 0) continue;
    if (static_cast<std::size_t>(inside) == s.modes.size()) {
      SectorConstraint c;
      c.total = s.total;
      for (std::size_t idx : s.modes) c.modes.push_back(new_index[idx]);
      sectors.push_back(std::move(c));
    } else {
      for (std::size_t idx : s.modes) {
        if (kept[idx]) cutoffs[new_index[idx]] = std::min(cutoffs[new_index[idx]], s.total);
      }
    }
  }
  return with_constraints(std::move(modes), std::move(cutoffs), std::move(sectors));
}

std::optional<std::size_t> FockSpace::index_of(const Occupation& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FockSpace::has_mode(const std::string& label) const {
  return std::find(modes_.begin(), modes_.end(), label) != modes_.end();
}

std::size_t FockSpace::mode_index(const std::string& label) const {
  auto it = std::find(modes_.begin(), modes_.end(), label);
  if (it == modes_.end()) throw UnknownMode("unknown mode label '" + label + "'");
  return static_cast<std::size_t>(it - modes_.begin());
}

std::vector<std::size_t> FockSpace::mode_indices(const std::vector<std::string>& labels) const {
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(mode_index(l));
  return out;
}

std::optional<int> FockSpace::uniform_sector() const {
  if (sectors_.size() == 1 && sectors_[0].modes.size() == modes_.size()) return sectors_[0].total;
  return std::nullopt;
}

bool FockSpace::operator==(const FockSpace& other) const {
  return modes_ == other.modes_ && cutoffs_ == other.cutoffs_ && sectors_ == other.sectors_;
}

std::string FockSpace::describe() const {
  std::ostringstream os;
  os << "FockSpace(";
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (i) os << ", ";
    os << modes_[i] << "<=" << cutoffs_[i];
  }
  for (const auto& s : sectors_) {
    os << "; sum{";
    for (std::size_t j = 0; j < s.modes.size(); ++j) os << (j ? "," : "") << modes_[s.modes[j]];
    os << "}=" << s.total;
  }
  os << "; dim=" << dimension() << ")";
  return os.str();
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

}  // namespace kerrconv
