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

#include "kerrconv/json_io.hpp"

namespace kerrconv {

Json to_json(cd z) { return Json::array({z.real(), z.imag()}); }

cd complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigurationError("expected a number or [re, im], got " + j.dump());
}

Json to_json(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Eigen::VectorXcd vector_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigurationError("expected a non-empty array of amplitudes");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Json to_json(const Eigen::MatrixXcd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXcd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw ConfigurationError("expected a matrix as a non-empty array of rows");
  }
  const std::size_t cols = j[0].size();
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ConfigurationError("matrix rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

Json to_json(const FockSpace& space) {
  Json out;
  out["modes"] = space.modes();
  out["cutoffs"] = space.cutoffs();
  const auto sector = space.uniform_sector();
  out["sector"] = sector ? Json(*sector) : Json(nullptr);
  return out;
}

Json to_json(const StateVector& psi) {
  Json out = to_json(*psi.space());
  out["amplitudes"] = to_json(psi.amplitudes());
  return out;
}

Json to_json(const DensityOperator& rho) {
  Json out = to_json(*rho.space());
  out["matrix"] = to_json(rho.matrix());
  return out;
}

Json to_json(const LinearMap& map) {
  Json out;
  out["source"] = to_json(*map.source);
  out["target"] = to_json(*map.target);
  out["matrix"] = to_json(map.matrix);
  return out;
}

Json to_json(const Mesh& mesh) {
  Json out;
  out["size"] = mesh.size;
  Json sp = Json::array();
  for (const auto& s : mesh.splitters) {
    sp.push_back({{"ports", {s.first, s.second}}, {"T", to_json(s.T)}, {"R", to_json(s.R)}});
  }
  out["splitters"] = std::move(sp);
  Json ph = Json::array();
  for (Eigen::Index i = 0; i < mesh.phases.size(); ++i) ph.push_back(mesh.phases(i));
  out["phases"] = std::move(ph);
  return out;
}

Json to_json(const OutcomeRecord& rec) {
  Json out;
  out["outcome"] = rec.label.to_string();
  out["probability"] = rec.probability;
  if (rec.impossible()) {
    out["impossible"] = true;
  } else {
    out["state"] = to_json(*rec.post_state);
  }
  return out;
}

Json to_json(const UnconditionalResult& res) {
  Json out;
  out["probability"] = res.probability;
  if (res.state) out["state"] = to_json(*res.state);
  if (res.effective_operator) out["effective_operator"] = to_json(res.effective_operator->matrix);
  Json branches = Json::array();
  for (const auto& b : res.branches) branches.push_back({{"outcome", b.label.to_string()}, {"probability", b.probability}});
  out["branches"] = std::move(branches);
  return out;
}

}  // namespace kerrconv
