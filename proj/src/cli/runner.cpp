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

#include "kerrconv/cli/runner.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "kerrconv/converter.hpp"
#include "kerrconv/engineering.hpp"
#include "kerrconv/isomorphism.hpp"
#include "kerrconv/measurement.hpp"
#include "kerrconv/optics.hpp"
#include "kerrconv/oracle.hpp"
#include "kerrconv/telemanip.hpp"

#ifndef KERRCONV_VERSION
#define KERRCONV_VERSION "0.0.0"
#endif

namespace kerrconv::cli {

namespace {

struct Row {
  std::string label;
  std::optional<double> probability;
  std::optional<double> fidelity;
  std::optional<double> trials;
};

struct Outcome {
  Json result = Json::object();
  std::vector<Row> rows;
  std::string path = "analytic";
};

struct Context {
  const Json& fields;
  Rng* rng;
  std::optional<std::uint64_t> seed;
  bool oracle;
};

int int_field(const Json& f, const char* key, int fallback) {
  return f.contains(key) ? f[key].get<int>() : fallback;
}

double num_field(const Json& f, const char* key, double fallback) {
  return f.contains(key) ? f[key].get<double>() : fallback;
}

std::string str_field(const Json& f, const char* key, const char* fallback) {
  return f.contains(key) ? f[key].get<std::string>() : std::string(fallback);
}

int order_field(const Json& f) {
  const int n = int_field(f, "N", 0);
  if (n < 0) throw ConfigurationError("N must be non-negative");
  return n;
}

Json input_spec(const Json& f) { return f.contains("input") ? f["input"] : Json{{"phase", 0.0}}; }

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

/// Fidelity of `out` with the normalized matrix `ideal` on the same space.
double fidelity_to(const DensityOperator& out, const Eigen::MatrixXcd& ideal) {
  return fidelity(out, DensityOperator(out.space(), ideal / ideal.trace().real()));
}

double trace_norm_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd d = a - b;
  const Eigen::MatrixXcd h = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Json to_json(const Eigen::VectorXd& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

using kerrconv::to_json;

void add_branch_rows(Outcome& out, const UnconditionalResult& res, const std::optional<Eigen::MatrixXcd>& ideal) {
  for (const auto& b : res.branches) {
    std::optional<double> fid;
    if (ideal && b.post_state) fid = fidelity_to(*b.post_state, *ideal);
    out.rows.push_back({b.label.to_string(), b.probability, fid, std::nullopt});
  }
  std::optional<double> fid;
  if (ideal && res.state) fid = fidelity_to(*res.state, *ideal);
  out.rows.push_back({"total", res.probability, fid, std::nullopt});
  out.result["probability"] = res.probability;
  out.result["fidelity"] = opt(fid);
  out.result["unconditional"] = to_json(res);
}

void add_record(Outcome& out, const OutcomeRecord& rec, const std::optional<Eigen::MatrixXcd>& ideal) {
  std::optional<double> fid;
  if (ideal && rec.post_state) fid = fidelity_to(*rec.post_state, *ideal);
  out.result["probability"] = rec.probability;
  out.result["fidelity"] = opt(fid);
  out.result["record"] = to_json(rec);
  out.rows.push_back({rec.label.to_string(), rec.probability, fid, std::nullopt});
}

// ---------------------------------------------------------------------------

Outcome run_convert(const Context& c) {
  const Json& f = c.fields;
  const int n = order_field(f);
  ConverterConfig cfg = ConverterConfig::canonical(n, num_field(f, "phi", 0.0));
  if (f.contains("detect_state")) {
    const Eigen::VectorXcd v = vector_from_json(f["detect_state"]);
    if (v.size() != n + 1) throw ConfigurationError("detect_state needs N+1 amplitudes");
    cfg = ConverterConfig::with_detection_state(n, StateVector::normalized_from(cfg.a_space(), v));
  }
  cfg.validate();
  const DensityOperator rho_a = build_state(input_spec(f), cfg.a_space(), c.rng);
  const IsomorphismMap iso = cfg.isomorphism();
  const bool forward = str_field(f, "direction", "a2b") == "a2b";
  const std::string mode = str_field(f, "mode", "conditional");

  Outcome out;
  out.result["direction"] = forward ? "a2b" : "b2a";
  out.result["mode"] = mode;
  if (mode == "sampled") {
    if (forward) throw ConfigurationError("sampled mode runs the b -> a repeat-until-success loop; use direction b2a");
    const int runs = int_field(f, "runs", 1000);
    if (runs < 1) throw ConfigurationError("runs must be positive");
    const TrialSummary s =
        summarize_trials(lift_state(rho_a, iso), cfg, runs, c.seed.value_or(0), int_field(f, "max_trials", 0));
    const double stderr_trials = s.successes > 0 ? s.stddev_trials / std::sqrt(double(s.successes)) : 0.0;
    out.result["runs"] = s.runs;
    out.result["successes"] = s.successes;
    out.result["cap_exceeded"] = s.cap_exceeded;
    out.result["mean_trials"] = s.mean_trials;
    out.result["stddev_trials"] = s.stddev_trials;
    out.result["standard_error"] = stderr_trials;
    out.result["expected_mean_trials"] = n + 1;
    out.result["min_restore_fidelity"] = s.min_restore_fidelity;
    out.rows.push_back({"repeat-until-success", double(s.successes) / s.runs, s.min_restore_fidelity, s.mean_trials});
    return out;
  }

  const DensityOperator input = forward ? rho_a : lift_state(rho_a, iso);
  const Eigen::MatrixXcd ideal = forward ? lift_state(rho_a, iso).matrix() : rho_a.matrix();
  std::vector<KrausOutcome> outcomes;
  if (c.oracle) {
    outcomes = forward ? oracle::a_to_b_outcomes(cfg) : oracle::b_to_a_outcomes(cfg);
    out.path = "dense-oracle";
  } else {
    outcomes = forward ? a_to_b_outcomes(cfg) : b_to_a_outcomes(cfg);
  }
  out.result["completeness_defect"] = completeness_defect(outcomes);
  if (mode == "conditional") {
    const OutcomeLabel label = forward ? a_to_b_success_label(cfg) : b_to_a_success_label();
    add_record(out, make_record(label, find_outcome(outcomes, label).op, input), ideal);
  } else {
    add_branch_rows(out,
                    forward ? convert_unconditional_a_to_b(input, cfg, outcomes)
                            : convert_unconditional_b_to_a(input, cfg, outcomes),
                    ideal);
  }
  return out;
}

Outcome run_engineer(const Context& c) {
  const Json& f = c.fields;
  const int n = order_field(f);
  cd factor{1.0};
  const EngineeringConfig cfg = build_engineering(f, n, c.rng, &factor);
  const DensityOperator rho = build_state(input_spec(f), cfg.a_space(), c.rng);
  const Eigen::MatrixXcd a = build_target_operator(cfg);

  Outcome out;
  std::vector<KrausOutcome> outcomes;
  if (c.oracle) {
    outcomes = oracle::engineering_outcomes(cfg);
    out.path = "dense-oracle";
  } else {
    outcomes = engineering_outcomes(cfg);
  }
  const std::string mode = str_field(f, "mode", "conditional");
  const bool phase_prep = cfg.preparation == AuxiliaryPreparation::PhaseState;
  out.result["mode"] = mode;
  out.result["preparation"] = phase_prep ? "phase" : "vacuum";
  out.result["target_operator"] = to_json(a);
  if (f.contains("A")) out.result["realization_factor"] = to_json(factor);
  out.result["completeness_defect"] = completeness_defect(outcomes);
  std::optional<Eigen::MatrixXcd> ideal;
  if (phase_prep) ideal = a * rho.matrix() * a.adjoint();
  if (mode == "conditional") {
    const OutcomeLabel label = engineering_success_label();
    add_record(out, make_record(label, find_outcome(outcomes, label).op, rho), ideal);
  } else {
    add_branch_rows(out, run_engineering_unconditional(rho, cfg, outcomes), ideal);
  }
  return out;
}

Outcome run_measure(const Context& c) {
  const Json& f = c.fields;
  const int n = order_field(f);
  const EngineeringConfig cfg = build_engineering(f, n, c.rng);
  const DensityOperator rho = build_state(input_spec(f), cfg.a_space(), c.rng);
  const std::string kind = f["kind"].get<std::string>();

  Outcome out;
  out.result["kind"] = kind;
  if (kind == "overlap") {
    Json probes = Json::array();
    for (int k = 0; k <= n; ++k) {
      const double joint = overlap_probe(rho, cfg, k);
      const double conditional = overlap_probe_conditional(rho, cfg, k);
      probes.push_back({{"channel", k}, {"joint", joint}, {"conditional", conditional}});
      out.rows.push_back({"b=" + std::to_string(k), joint, std::nullopt, std::nullopt});
    }
    out.result["probes"] = probes;
  } else if (kind == "expectation") {
    if (!f.contains("Z")) throw ConfigurationError("expectation needs an observable Z");
    const Eigen::MatrixXcd z = build_matrix(f["Z"], n + 1, c.rng);
    const cd value = expectation(z, ProbeChannel(rho));
    const cd exact = (z * rho.matrix()).trace();
    out.result["value"] = to_json(value);
    out.result["exact"] = to_json(exact);
    out.result["abs_error"] = std::abs(value - exact);
  } else if (kind == "matrix-element") {
    const int m = int_field(f, "m", 0);
    const int k = int_field(f, "n", 0);
    const cd value = matrix_element(ProbeChannel(rho), m, k);
    const cd exact = rho.matrix()(m, k);
    out.result["m"] = m;
    out.result["n"] = k;
    out.result["value"] = to_json(value);
    out.result["exact"] = to_json(exact);
    out.result["abs_error"] = std::abs(value - exact);
  } else {
    const Eigen::VectorXd p = unconditional_probe(rho, cfg);
    Json probes = Json::array();
    for (int k = 0; k <= n; ++k) {
      const double conditional = overlap_probe(rho, cfg, k);
      probes.push_back({{"channel", k},
                        {"unconditional", p(k)},
                        {"conditional", conditional},
                        {"ratio", conditional > 0.0 ? Json(p(k) / conditional) : Json(nullptr)}});
      out.rows.push_back({"b=" + std::to_string(k), p(k), std::nullopt, std::nullopt});
    }
    out.result["probes"] = probes;
    out.result["expected_ratio"] = n + 1;
  }
  return out;
}

Outcome run_reconstruct(const Context& c) {
  const Json& f = c.fields;
  const int n = order_field(f);
  const DensityOperator rho = build_state(input_spec(f), source_space(n), c.rng);
  const std::string kind = str_field(f, "kind", "diagonalize");
  const bool shots = str_field(f, "mode", "analytic") == "shots";
  const long shot_count = int_field(f, "shots", 100000);
  if (shots && shot_count < 1) throw ConfigurationError("shots must be positive");

  OptimizerSettings settings;
  settings.direction =
      str_field(f, "direction", "max") == "max" ? OptimizationDirection::Maximize : OptimizationDirection::Minimize;
  settings.mode = shots ? ProbeMode::Shots : ProbeMode::Analytic;
  settings.shots_per_evaluation = shot_count;
  settings.seed = c.seed.value_or(0);

  Outcome out;
  out.result["kind"] = kind;
  out.result["mode"] = shots ? "shots" : "analytic";
  const ProbeChannel probe(rho);
  if (kind == "diagonalize") {
    const DiagonalizationResult res = diagonalize_experimentally(probe, settings);
    Eigen::VectorXd exact = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho.matrix()).eigenvalues();
    if (settings.direction == OptimizationDirection::Maximize) exact.reverseInPlace();
    out.result["status"] = res.status == TuningStatus::Converged ? "converged" : "budget-exhausted";
    out.result["eigenvalues"] = to_json(res.eigenvalues);
    out.result["exact_eigenvalues"] = to_json(exact);
    out.result["eigenvalue_error"] = (res.eigenvalues - exact).cwiseAbs().maxCoeff();
    out.result["trace_distance"] = trace_norm_distance(res.reconstructed(), rho.matrix());
    out.result["U"] = to_json(res.U);
    out.result["evaluations"] = res.evaluations;
    Json stages = Json::array();
    for (const auto& t : res.tuning) {
      stages.push_back({{"stage", t.stage},
                        {"signal", t.best_signal},
                        {"cycles", t.cycles},
                        {"splitters", t.splitters.size()},
                        {"signals_history", t.history}});
      out.rows.push_back({"stage=" + std::to_string(t.stage), t.best_signal, std::nullopt, double(t.cycles)});
    }
    out.result["stages"] = stages;
  } else if (kind == "fock-matrix") {
    ReconstructionSettings rs;
    rs.mode = settings.mode;
    rs.shots = shot_count;
    rs.seed = settings.seed;
    const Eigen::MatrixXcd m = reconstruct_fock_matrix(probe, rs);
    out.result["matrix"] = to_json(m);
    out.result["exact"] = to_json(rho.matrix());
    out.result["max_abs_error"] = (m - rho.matrix()).cwiseAbs().maxCoeff();
    for (int k = 0; k <= n; ++k) {
      out.rows.push_back({"fock=" + std::to_string(k), m(k, k).real(), std::nullopt, std::nullopt});
    }
  } else {
    settings.direction = OptimizationDirection::Maximize;
    const PurificationResult res = qnd_purify(rho, settings);
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho.matrix()).eigenvalues().maxCoeff();
    out.result["status"] = res.status == TuningStatus::Converged ? "converged" : "budget-exhausted";
    out.result["fidelity_estimate"] = res.fidelity_estimate;
    out.result["largest_eigenvalue"] = top;
    out.result["probability"] = res.probability;
    out.result["output_vector"] = to_json(res.output_vector);
    out.result["U_R"] = to_json(res.U_R);
    out.result["cycles"] = res.tuning.cycles;
    out.rows.push_back({"qnd", res.probability, res.fidelity_estimate, double(res.tuning.cycles)});
  }
  return out;
}

Outcome run_telemanip(const Context& c) {
  const Json& f = c.fields;
  const int n = order_field(f);
  const TelemanipConfig cfg = TelemanipConfig::from(build_engineering(f, n, c.rng));
  const DensityOperator rho = build_state(input_spec(f), cfg.alice_space(), c.rng);
  const Eigen::MatrixXcd a_conj = cfg.A_conj();
  const Eigen::MatrixXcd ideal = a_conj * rho.matrix() * a_conj.adjoint();
  const std::string mode = str_field(f, "mode", "conditional");

  Outcome out;
  out.result["mode"] = mode;
  out.result["target_operator"] = to_json(a_conj);
  if (mode == "conditional" || mode == "unconditional") {
    std::vector<KrausOutcome> outcomes;
    if (c.oracle) {
      outcomes = oracle::telemanip_outcomes(cfg);
      out.path = "dense-oracle";
    } else {
      outcomes = telemanip_outcomes(cfg);
    }
    out.result["completeness_defect"] = completeness_defect(outcomes);
    if (mode == "conditional") {
      const OutcomeLabel label = engineering_success_label();
      add_record(out, make_record(label, find_outcome(outcomes, label).op, rho), ideal);
    } else {
      add_branch_rows(out, run_telemanip_unconditional(rho, cfg, outcomes), ideal);
    }
  } else if (mode == "reduced") {
    ReducedStates rs;
    if (c.oracle) {
      rs = oracle::reduced_states_telemanip(rho, cfg);
      out.path = "dense-oracle";
    } else {
      rs = reduced_states_telemanip(rho, cfg);
    }
    out.result["probability"] = rs.probability;
    if (rs.rho_red) out.result["rho_red"] = to_json(rs.rho_red->matrix());
    if (rs.rho_red_prime) {
      const Eigen::MatrixXcd& m = rs.rho_red_prime->matrix();
      out.result["rho_red_prime"] = to_json(m);
      out.result["bob_marginal_deviation"] =
          (m - Eigen::MatrixXcd::Identity(n + 1, n + 1) / double(n + 1)).cwiseAbs().maxCoeff();
    }
    out.rows.push_back({"b=0", rs.probability, std::nullopt, std::nullopt});
  } else {
    const bool shutter = str_field(f, "feedback", "shutter") == "shutter";
    const int trials = int_field(f, "trials", 10);
    TelemanipSession session(cfg, shutter ? TelemanipMode::Conditional : TelemanipMode::Unconditional,
                             c.seed.value_or(0));
    Json records = Json::array();
    int delivered = 0;
    for (int t = 0; t < trials; ++t) {
      const TrialRecord rec = session.run_trial(rho);
      std::optional<double> fid;
      if (rec.delivered) {
        fid = fidelity_to(rec.bob_state, ideal);
        ++delivered;
      }
      records.push_back({{"trial", rec.trial},
                         {"alice_outcome", rec.alice_outcome.to_string()},
                         {"delivered", rec.delivered},
                         {"fidelity", opt(fid)},
                         {"bob_state", to_json(rec.bob_state.matrix())}});
      out.rows.push_back({rec.alice_outcome.to_string(), std::nullopt, fid, double(rec.trial)});
    }
    Json transcript = Json::array();
    for (const auto& m : session.transcript()) transcript.push_back(m.to_string());
    out.result["feedback"] = shutter ? "shutter" : "correction";
    out.result["delivered"] = delivered;
    out.result["trials"] = records;
    out.result["transcript"] = transcript;
  }
  return out;
}

Outcome run_identity_check(const Context& c) {
  const Json& f = c.fields;
  constexpr double kTolerance = 1e-12;
  Outcome out;
  out.path = "analytic+dense-oracle";
  const std::string check = str_field(f, "check", "appendix");
  out.result["check"] = check;
  out.result["tolerance"] = kTolerance;
  double worst = 0.0;
  if (check == "appendix") {
    std::vector<std::pair<cd, int>> cases;
    if (f.contains("T")) {
      const cd t = complex_from_json(f["T"]);
      if (std::abs(t) > 1.0 + kNormTol) throw ConfigurationError("|T| must not exceed 1");
      cases.emplace_back(t, int_field(f, "cutoff", 6));
    } else {
      Rng& rng = *c.rng;
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::uniform_int_distribution<int> cut(0, int_field(f, "max_cutoff", 6));
      const int count = int_field(f, "cases", 50);
      for (int i = 0; i < count; ++i) {
        const double mag = unit(rng);
        const double arg = 2.0 * kPi * unit(rng);
        cases.emplace_back(std::polar(mag, arg), cut(rng));
      }
    }
    Json list = Json::array();
    for (const auto& [t, cutoff] : cases) {
      const double r = std::sqrt(std::max(0.0, 1.0 - std::norm(t)));
      const Eigen::MatrixXcd fast = vacuum_projected_splitter(t, *FockSpace::build({"b"}, cutoff));
      const Eigen::MatrixXcd dense = oracle::vacuum_projected_splitter(t, r, cutoff);
      Eigen::MatrixXcd closed = Eigen::MatrixXcd::Zero(cutoff + 1, cutoff + 1);
      for (int k = 0; k <= cutoff; ++k) closed(k, k) = std::pow(t, k);
      const double dev = std::max((fast - closed).cwiseAbs().maxCoeff(), (dense - closed).cwiseAbs().maxCoeff());
      worst = std::max(worst, dev);
      list.push_back({{"T", to_json(t)}, {"cutoff", cutoff}, {"deviation", dev}});
    }
    out.result["cases"] = list;
  } else {
    const int n = f.contains("N") ? order_field(f) : 2;
    const ConverterConfig cfg = ConverterConfig::canonical(n);
    std::vector<std::string> modes = cfg.b_labels();
    std::vector<std::size_t> b_modes;
    for (std::size_t k = 0; k < modes.size(); ++k) b_modes.push_back(k + 1);
    modes.insert(modes.begin(), cfg.a_label);
    std::vector<int> cutoffs(modes.size(), 1);
    cutoffs[0] = n;
    const SpacePtr space = FockSpace::with_constraints(modes, cutoffs, {SectorConstraint{b_modes, 1}});
    const Eigen::MatrixXcd dense = oracle::device_matrix(cfg);
    const double blockwise = (Eigen::MatrixXcd(build_M(cfg, *space)) - dense).cwiseAbs().maxCoeff();
    const double composed =
        (Eigen::MatrixXcd(build_M(cfg, *space, DeviceRoute::Composed)) - dense).cwiseAbs().maxCoeff();
    worst = std::max(blockwise, composed);
    out.result["N"] = n;
    out.result["blockwise_deviation"] = blockwise;
    out.result["composed_deviation"] = composed;
  }
  out.result["max_deviation"] = worst;
  out.result["passed"] = worst < kTolerance;
  return out;
}

Outcome dispatch(const ExperimentDescriptor& d, const Context& c) {
  switch (d.protocol) {
    case Protocol::Convert: return run_convert(c);
    case Protocol::Engineer: return run_engineer(c);
    case Protocol::Measure: return run_measure(c);
    case Protocol::Reconstruct: return run_reconstruct(c);
    case Protocol::Telemanip: return run_telemanip(c);
    case Protocol::IdentityCheck: return run_identity_check(c);
  }
  throw ConfigurationError("unsupported protocol");
}

std::string error_type(const std::exception& e) {
  if (dynamic_cast<const NotUnitary*>(&e)) return "NotUnitary";
  if (dynamic_cast<const UnknownMode*>(&e)) return "UnknownMode";
  if (dynamic_cast<const SpaceMismatch*>(&e)) return "SpaceMismatch";
  if (dynamic_cast<const ConfigurationError*>(&e)) return "ConfigurationError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

std::string csv_cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string config_hash(const ExperimentDescriptor& descriptor, const RunOptions& options) {
  nlohmann::json canonical = nlohmann::json::parse(descriptor.fields.dump());
  canonical.erase("output");
  if (options.seed) canonical["seed"] = *options.seed;
  canonical["oracle"] = options.oracle;
  const std::string text = canonical.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunOutput run(const ExperimentDescriptor& descriptor, const RunOptions& options) {
  const std::optional<std::uint64_t> seed = options.seed ? options.seed : descriptor.seed;
  if (descriptor.needs_seed() && !seed) {
    throw DescriptorError(0, "field 'seed': required because this run draws random numbers");
  }
  RunOutput output;
  output.format = options.format.value_or(
      descriptor.output_format && *descriptor.output_format == "csv" ? OutputFormat::Csv : OutputFormat::Json);

  Json provenance = {{"tool", "kerrconv"},
                     {"version", KERRCONV_VERSION},
                     {"config_hash", config_hash(descriptor, options)},
                     {"seed", seed ? Json(*seed) : Json(nullptr)}};
  std::optional<Rng> rng;
  if (seed) rng.emplace(*seed);
  const Context ctx{descriptor.fields, rng ? &*rng : nullptr, seed, options.oracle};

  Json doc;
  std::vector<Row> rows;
  std::optional<std::pair<std::string, std::string>> failure;
  try {
    Outcome out = dispatch(descriptor, ctx);
    provenance["path"] = out.path;
    doc["provenance"] = provenance;
    doc["protocol"] = to_string(descriptor.protocol);
    doc["descriptor"] = descriptor.fields;
    doc["result"] = std::move(out.result);
    Json jrows = Json::array();
    for (const auto& r : out.rows) {
      jrows.push_back({{"outcome_label", r.label},
                       {"probability", opt(r.probability)},
                       {"fidelity", opt(r.fidelity)},
                       {"trials", opt(r.trials)}});
    }
    doc["rows"] = jrows;
    rows = std::move(out.rows);
  } catch (const std::exception& e) {
    failure.emplace(error_type(e), e.what());
    provenance["path"] = nullptr;
    doc = Json::object();
    doc["provenance"] = provenance;
    doc["protocol"] = to_string(descriptor.protocol);
    doc["descriptor"] = descriptor.fields;
    doc["error"] = {{"type", failure->first}, {"message", failure->second}};
    output.exit_code = 1;
  }

  if (output.format == OutputFormat::Json) {
    output.text = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# kerrconv " << KERRCONV_VERSION << " config_hash=" << provenance["config_hash"].get<std::string>()
       << " seed=" << (seed ? std::to_string(*seed) : std::string("none"))
       << " path=" << (provenance["path"].is_string() ? provenance["path"].get<std::string>() : std::string("none"))
       << " protocol=" << to_string(descriptor.protocol) << "\n";
    if (failure) os << "# error " << failure->first << ": " << failure->second << "\n";
    os << "outcome_label,probability,fidelity,trials\n";
    for (const auto& r : rows) {
      os << csv_escape(r.label) << "," << csv_cell(r.probability) << "," << csv_cell(r.fidelity) << ","
         << csv_cell(r.trials) << "\n";
    }
    output.text = os.str();
  }
  output.document = std::move(doc);
  return output;
}

}  // namespace kerrconv::cli
