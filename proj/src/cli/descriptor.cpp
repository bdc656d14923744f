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

#include "kerrconv/cli/descriptor.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "kerrconv/converter.hpp"

namespace kerrconv::cli {

namespace {

enum class Kind { Int, Seed, Number, Choice, Complex, MatrixSpec, NumberList, AmplitudeList, StateSpec, Output };

struct FieldSpec {
  Kind kind;
  std::vector<std::string> choices;
  bool required = false;
};

using Schema = std::map<std::string, FieldSpec>;

const std::vector<std::string> kMatrixKeywords{"identity", "dft", "random"};

Schema common_schema() {
  return {{"protocol", {Kind::Choice, {"convert", "engineer", "measure", "reconstruct", "telemanip", "identity-check"}, true}},
          {"seed", {Kind::Seed, {}}},
          {"output", {Kind::Output, {}}}};
}

Schema arrays_schema() {
  return {{"A", {Kind::MatrixSpec, {}}},  {"U", {Kind::MatrixSpec, {}}}, {"UR", {Kind::MatrixSpec, {}}},
          {"Tk", {Kind::NumberList, {}}}, {"phi", {Kind::Number, {}}},   {"input", {Kind::StateSpec, {}}},
          {"N", {Kind::Int, {}, true}}};
}

Schema schema_for(Protocol p) {
  Schema s = common_schema();
  auto add = [&s](const Schema& more) { s.insert(more.begin(), more.end()); };
  switch (p) {
    case Protocol::Convert:
      add({{"N", {Kind::Int, {}, true}},
           {"direction", {Kind::Choice, {"a2b", "b2a"}}},
           {"mode", {Kind::Choice, {"conditional", "unconditional", "sampled"}}},
           {"phi", {Kind::Number, {}}},
           {"detect_state", {Kind::AmplitudeList, {}}},
           {"input", {Kind::StateSpec, {}}},
           {"runs", {Kind::Int, {}}},
           {"max_trials", {Kind::Int, {}}}});
      break;
    case Protocol::Engineer:
      add(arrays_schema());
      add({{"preparation", {Kind::Choice, {"phase", "vacuum"}}},
           {"mode", {Kind::Choice, {"conditional", "unconditional"}}}});
      break;
    case Protocol::Measure:
      add(arrays_schema());
      add({{"kind", {Kind::Choice, {"overlap", "expectation", "matrix-element", "unconditional"}, true}},
           {"Z", {Kind::MatrixSpec, {}}},
           {"m", {Kind::Int, {}}},
           {"n", {Kind::Int, {}}}});
      break;
    case Protocol::Reconstruct:
      add({{"N", {Kind::Int, {}, true}},
           {"input", {Kind::StateSpec, {}}},
           {"kind", {Kind::Choice, {"diagonalize", "fock-matrix", "qnd"}}},
           {"mode", {Kind::Choice, {"analytic", "shots"}}},
           {"shots", {Kind::Int, {}}},
           {"direction", {Kind::Choice, {"max", "min"}}}});
      break;
    case Protocol::Telemanip:
      add(arrays_schema());
      add({{"mode", {Kind::Choice, {"conditional", "unconditional", "reduced", "session"}}},
           {"feedback", {Kind::Choice, {"shutter", "correction"}}},
           {"trials", {Kind::Int, {}}}});
      break;
    case Protocol::IdentityCheck:
      add({{"check", {Kind::Choice, {"appendix", "device"}}},
           {"N", {Kind::Int, {}}},
           {"cases", {Kind::Int, {}}},
           {"max_cutoff", {Kind::Int, {}}},
           {"T", {Kind::Complex, {}}},
           {"cutoff", {Kind::Int, {}}}});
      break;
  }
  return s;
}

Protocol protocol_from(const std::string& s) {
  if (s == "convert") return Protocol::Convert;
  if (s == "engineer") return Protocol::Engineer;
  if (s == "measure") return Protocol::Measure;
  if (s == "reconstruct") return Protocol::Reconstruct;
  if (s == "telemanip") return Protocol::Telemanip;
  return Protocol::IdentityCheck;
}

// Locates the first occurrence of a key path in the source text.
class LineFinder {
 public:
  explicit LineFinder(const std::string* text) : text_(text) {}

  int operator()(const std::vector<std::string>& path) const {
    if (!text_) return 0;
    std::size_t pos = 0;
    for (const auto& key : path) {
      pos = text_->find("\"" + key + "\"", pos);
      if (pos == std::string::npos) return 0;
    }
    return line_at(pos);
  }

  int line_at(std::size_t pos) const {
    if (!text_) return 0;
    pos = std::min(pos, text_->size());
    return 1 + static_cast<int>(std::count(text_->begin(), text_->begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

 private:
  const std::string* text_;
};

bool is_complex(const Json& j) {
  return j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number());
}

bool is_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j[0].size() || row.empty()) return false;
    for (const auto& x : row) {
      if (!is_complex(x)) return false;
    }
  }
  return true;
}

bool is_list(const Json& j, bool complex_entries) {
  if (!j.is_array() || j.empty()) return false;
  for (const auto& x : j) {
    if (complex_entries ? !is_complex(x) : !x.is_number()) return false;
  }
  return true;
}

class Validator {
 public:
  explicit Validator(LineFinder lines) : lines_(lines) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
    std::string where;
    for (const auto& p : path) where += (where.empty() ? "" : ".") + p;
    throw DescriptorError(lines_(path), "field '" + where + "': " + msg);
  }

  void check(const std::string& key, const FieldSpec& spec, const Json& v,
             const std::vector<std::string>& prefix = {}) const {
    std::vector<std::string> path = prefix;
    path.push_back(key);
    switch (spec.kind) {
      case Kind::Int:
        if (!v.is_number_integer() || v.get<long long>() < 0) fail(path, "expected a non-negative integer");
        break;
      case Kind::Seed:
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
          fail(path, "expected a non-negative integer seed");
        }
        break;
      case Kind::Number:
        if (!v.is_number()) fail(path, "expected a number");
        break;
      case Kind::Choice:
        if (!v.is_string() || std::find(spec.choices.begin(), spec.choices.end(), v.get<std::string>()) == spec.choices.end()) {
          std::string all;
          for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
          fail(path, "expected one of: " + all);
        }
        break;
      case Kind::Complex:
        if (!is_complex(v)) fail(path, "expected a number or [re, im]");
        break;
      case Kind::MatrixSpec:
        if (v.is_string()) {
          if (std::find(kMatrixKeywords.begin(), kMatrixKeywords.end(), v.get<std::string>()) == kMatrixKeywords.end()) {
            fail(path, "expected a matrix or one of: identity, dft, random");
          }
        } else if (!is_matrix(v)) {
          fail(path, "expected a matrix (array of equal-length rows of numbers or [re, im])");
        }
        break;
      case Kind::NumberList:
        if (!is_list(v, false)) fail(path, "expected a non-empty array of numbers");
        break;
      case Kind::AmplitudeList:
        if (!is_list(v, true)) fail(path, "expected a non-empty array of amplitudes");
        break;
      case Kind::StateSpec:
        check_state(path, v);
        break;
      case Kind::Output:
        check_output(path, v);
        break;
    }
  }

 private:
  void check_state(const std::vector<std::string>& at, const Json& v) const {
    if (!v.is_object() || v.size() != 1) {
      fail(at, "expected an object with exactly one of fock, phase, amplitudes, matrix, fock_mixture, random");
    }
    const auto& [name, value] = *v.items().begin();
    std::vector<std::string> path = at;
    path.push_back(name);
    if (name == "fock") {
      if (!value.is_number_integer() || value.get<long long>() < 0) fail(path, "expected a non-negative integer");
    } else if (name == "phase") {
      if (!value.is_number()) fail(path, "expected a number");
    } else if (name == "amplitudes") {
      if (!is_list(value, true)) fail(path, "expected a non-empty array of amplitudes");
    } else if (name == "matrix") {
      if (!is_matrix(value)) fail(path, "expected a matrix");
    } else if (name == "fock_mixture") {
      if (!is_list(value, false)) fail(path, "expected a non-empty array of weights");
    } else if (name == "random") {
      if (!value.is_string() || (value != "pure" && value != "mixed")) fail(path, "expected \"pure\" or \"mixed\"");
    } else {
      fail(path, "unknown state kind");
    }
  }

  void check_output(const std::vector<std::string>& at, const Json& v) const {
    if (!v.is_object()) fail(at, "expected an object with path and/or format");
    for (const auto& [name, value] : v.items()) {
      std::vector<std::string> path = at;
      path.push_back(name);
      if (name == "path") {
        if (!value.is_string()) fail(path, "expected a string");
      } else if (name == "format") {
        if (value != "json" && value != "csv") fail(path, "expected \"json\" or \"csv\"");
      } else {
        fail(path, "unknown field");
      }
    }
  }

  LineFinder lines_;
};

ExperimentDescriptor validate(const Json& object, const LineFinder& lines) {
  const Validator v(lines);
  if (!object.is_object()) throw DescriptorError(lines.line_at(0), "descriptor must be a JSON object");
  if (!object.contains("protocol")) throw DescriptorError(lines.line_at(0), "missing required field 'protocol'");
  const auto common = common_schema();
  v.check("protocol", common.at("protocol"), object["protocol"]);
  ExperimentDescriptor d;
  d.protocol = protocol_from(object["protocol"].get<std::string>());
  const Schema schema = schema_for(d.protocol);
  // Protocol parameters may sit at the top level or inside "parameters".
  Json flat = Json::object();
  for (const auto& [key, value] : object.items()) {
    if (key == "parameters") {
      if (!value.is_object()) v.fail({key}, "expected an object");
      for (const auto& [inner, inner_value] : value.items()) {
        auto it = schema.find(inner);
        if (it == schema.end() || common.count(inner) > 0) {
          v.fail({key, inner}, "unknown parameter for protocol " + to_string(d.protocol));
        }
        if (object.contains(inner)) v.fail({key, inner}, "given both inside and outside parameters");
        v.check(inner, it->second, inner_value, {key});
        flat[inner] = inner_value;
      }
      continue;
    }
    auto it = schema.find(key);
    if (it == schema.end()) v.fail({key}, "unknown field for protocol " + to_string(d.protocol));
    v.check(key, it->second, value);
    flat[key] = value;
  }
  for (const auto& [key, spec] : schema) {
    if (spec.required && !flat.contains(key)) {
      throw DescriptorError(lines.line_at(0), "missing required field '" + key + "'");
    }
  }
  if (flat.contains("A") && (flat.contains("U") || flat.contains("UR") || flat.contains("Tk"))) {
    v.fail({"A"}, "give either A or the arrays U, UR, Tk, not both");
  }
  d.fields = flat;
  if (flat.contains("seed")) d.seed = flat["seed"].get<std::uint64_t>();
  if (flat.contains("output")) {
    const auto& out = flat["output"];
    if (out.contains("path")) d.output_path = out["path"].get<std::string>();
    if (out.contains("format")) d.output_format = out["format"].get<std::string>();
  }
  return d;
}

std::string str(const Json& fields, const char* key, const char* fallback) {
  return fields.contains(key) ? fields[key].get<std::string>() : std::string(fallback);
}

}  // namespace

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::Convert: return "convert";
    case Protocol::Engineer: return "engineer";
    case Protocol::Measure: return "measure";
    case Protocol::Reconstruct: return "reconstruct";
    case Protocol::Telemanip: return "telemanip";
    case Protocol::IdentityCheck: return "identity-check";
  }
  return "unknown";
}

DescriptorError::DescriptorError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

bool ExperimentDescriptor::needs_seed() const {
  const auto& f = fields;
  if (f.contains("input") && f["input"].contains("random")) return true;
  for (const char* key : {"A", "U", "UR", "Z"}) {
    if (f.contains(key) && f[key] == "random") return true;
  }
  switch (protocol) {
    case Protocol::Convert: return str(f, "mode", "conditional") == "sampled";
    case Protocol::Reconstruct: return str(f, "mode", "analytic") == "shots";
    case Protocol::Telemanip: return str(f, "mode", "conditional") == "session";
    case Protocol::IdentityCheck: return str(f, "check", "appendix") == "appendix" && !f.contains("T");
    default: return false;
  }
}

ExperimentDescriptor parse_descriptor(const std::string& text) {
  const LineFinder lines(&text);
  Json object;
  try {
    object = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DescriptorError(lines.line_at(e.byte > 0 ? e.byte - 1 : 0), std::string("malformed JSON: ") + e.what());
  }
  return validate(object, lines);
}

ExperimentDescriptor make_descriptor(const Json& object) { return validate(object, LineFinder(nullptr)); }

// ---------------------------------------------------------------------------
// Builders

namespace {

Rng& need(Rng* rng, const char* what) {
  if (!rng) throw ConfigurationError(std::string(what) + " requires a seed");
  return *rng;
}

}  // namespace

DensityOperator build_state(const Json& spec, const SpacePtr& space, Rng* rng) {
  const auto d = static_cast<Eigen::Index>(space->dimension());
  const auto& [name, value] = *spec.items().begin();
  if (name == "fock") {
    const auto n = value.get<std::size_t>();
    if (n >= space->dimension()) throw ConfigurationError("input: Fock number exceeds the cutoff");
    return DensityOperator::pure(StateVector::basis(space, n));
  }
  if (name == "phase") {
    if (space->num_modes() != 1) throw ConfigurationError("input: phase states need a single mode");
    return DensityOperator::pure(phase_state(space, value.get<double>()));
  }
  if (name == "amplitudes") {
    const Eigen::VectorXcd v = vector_from_json(value);
    if (v.size() != d) throw ConfigurationError("input: expected " + std::to_string(d) + " amplitudes");
    return DensityOperator::pure(StateVector::normalized_from(space, v));
  }
  if (name == "matrix") {
    const Eigen::MatrixXcd m = matrix_from_json(value);
    if (m.rows() != d || m.cols() != d) throw ConfigurationError("input: density matrix has the wrong size");
    return DensityOperator(space, m);
  }
  if (name == "fock_mixture") {
    if (static_cast<Eigen::Index>(value.size()) != d) throw ConfigurationError("input: expected one weight per basis state");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) m(k, k) = value[static_cast<std::size_t>(k)].get<double>();
    return DensityOperator(space, m);
  }
  Rng& r = need(rng, "random input");
  if (value == "pure") return DensityOperator::pure(random_state(space, r));
  return random_density(space, r);
}

Eigen::MatrixXcd build_matrix(const Json& spec, int dim, Rng* rng) {
  if (spec.is_string()) {
    const auto s = spec.get<std::string>();
    if (s == "identity") return Eigen::MatrixXcd::Identity(dim, dim);
    if (s == "dft") return dft_matrix(dim);
    return random_unitary(dim, need(rng, "random matrix"));
  }
  const Eigen::MatrixXcd m = matrix_from_json(spec);
  if (m.rows() != dim || m.cols() != dim) {
    throw ConfigurationError("matrix must be " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  return m;
}

EngineeringConfig build_engineering(const Json& fields, int n, Rng* rng, cd* realization_factor) {
  EngineeringConfig cfg = EngineeringConfig::identity(n);
  if (realization_factor) *realization_factor = 1.0;
  if (fields.contains("A")) {
    const auto dec = decompose_target(build_matrix(fields["A"], n + 1, rng));
    cfg = dec.config;
    if (realization_factor) *realization_factor = dec.realization_factor;
  } else {
    if (fields.contains("U")) cfg.U = build_matrix(fields["U"], n + 1, rng);
    if (fields.contains("UR")) cfg.U_R = build_matrix(fields["UR"], n + 1, rng);
    if (fields.contains("Tk")) cfg.Tk = fields["Tk"].get<std::vector<double>>();
  }
  if (fields.contains("phi")) cfg.phi = fields["phi"].get<double>();
  if (fields.contains("preparation") && fields["preparation"] == "vacuum") {
    cfg.preparation = AuxiliaryPreparation::Vacuum;
  }
  cfg.validate();
  return cfg;
}

}  // namespace kerrconv::cli
