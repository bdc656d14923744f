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

#include "kerrconv/outcome.hpp"

#include <sstream>

namespace kerrconv {

std::string OutcomeLabel::to_string() const {
  std::ostringstream os;
  const char* sep = "";
  auto field = [&](const char* name, const std::optional<int>& v) {
    if (!v) return;
    os << sep << name << "=" << *v;
    sep = ";";
  };
  field("phase", phase);
  field("detect", detection);
  field("b", b_click);
  field("c", c_click);
  const auto s = os.str();
  return s.empty() ? "none" : s;
}

OutcomeRecord make_record(const OutcomeLabel& label, const LinearMap& op, const DensityOperator& rho) {
  OutcomeRecord rec{label, 0.0, std::nullopt, op};
  auto out = op.apply(rho);
  rec.probability = std::max(0.0, out.trace());
  if (rec.probability > kImpossibleTol) {
    rec.post_state = DensityOperator(out.space(), out.matrix() / rec.probability);
  }
  return rec;
}

Eigen::MatrixXcd completeness_sum(const std::vector<KrausOutcome>& outcomes) {
  if (outcomes.empty()) throw ConfigurationError("completeness_sum: empty outcome set");
  const auto dim = static_cast<Eigen::Index>(outcomes.front().op.source->dimension());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& o : outcomes) {
    if (!same_space(o.op.source, outcomes.front().op.source)) {
      throw SpaceMismatch("completeness_sum: outcomes act on different source spaces");
    }
    sum += o.op.gram();
  }
  return sum;
}

double completeness_defect(const std::vector<KrausOutcome>& outcomes) {
  const Eigen::MatrixXcd s = completeness_sum(outcomes);
  return (s - Eigen::MatrixXcd::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

const KrausOutcome& find_outcome(const std::vector<KrausOutcome>& outcomes, const OutcomeLabel& label) {
  for (const auto& o : outcomes) {
    if (o.label == label) return o;
  }
  throw ConfigurationError("no outcome labelled " + label.to_string());
}

}  // namespace kerrconv
