// Copyright 2026 The hvsinglet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HVSINGLET_CLI_HPP_
#define HVSINGLET_CLI_HPP_

// Command-line front end. `run` is the whole program minus process setup so
// that tests can drive it in-process with captured streams.
//
// Exit codes: 0 success, 1 verification/audit/admissibility failure,
// 2 usage error (bad flags, unknown model, unparsable expression).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hvsinglet/admissibility.hpp"
#include "hvsinglet/auditor.hpp"
#include "hvsinglet/expr.hpp"
#include "hvsinglet/model.hpp"
#include "hvsinglet/parallel.hpp"
#include "hvsinglet/quantum.hpp"
#include "hvsinglet/zoo.hpp"

namespace hvs::cli {

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  std::string model;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  Format format = Format::Csv;
  std::string out_path;
  unsigned workers = default_workers();
  std::optional<double> wa, wb;
  // verify
  std::size_t settings = 8;
  // scan
  double from_deg = 0.0, to_deg = 180.0, step_deg = 15.0;
  // frobenius / admissible
  std::size_t n_lambda = 0;
  std::string g, mu;
  double s_plus = 1.0, s_minus = 1.0;
};

/// One output cell. Doubles print with 17 significant digits so rows are
/// reproducible byte for byte.
using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) {
    if (s->find_first_of(",\"\n") == std::string::npos) return *s;
    std::string q = "\"";
    for (char ch : *s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<bool>(c) ? "true" : "false";
}

inline nlohmann::ordered_json json_cell(const Cell& c) {
  return std::visit([](const auto& v) -> nlohmann::ordered_json {
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(v)) return format_double(v);
    }
    return v;
  }, c);
}

inline void emit(const Table& t, const RunConfig& cfg, bool ok, std::ostream& os) {
  if (cfg.format == Format::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << '\n';
    }
    return;
  }
  nlohmann::ordered_json j;
  j["command"] = cfg.command;
  if (!cfg.model.empty()) j["model"] = cfg.model;
  j["seed"] = cfg.seed;
  j["ok"] = ok;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
    j["records"].push_back(std::move(r));
  }
  os << j.dump(2) << '\n';
}

inline Cell cell(std::size_t v) { return static_cast<std::int64_t>(v); }

/// Thrown for usage problems detected after flag parsing.
struct UsageError : Error {
  using Error::Error;
};

struct RunResult {
  Table table;
  bool ok = true;
  std::vector<std::string> failures;
};

inline Model resolve_model(const RunConfig& cfg) {
  ModelParams params;
  if (cfg.wa || cfg.wb) {
    const auto kind = model_kind_from_name(cfg.model);
    if (kind != ModelKind::DiLorenzo) throw UsageError("--wa/--wb apply only to dilorenzo");
    if (!cfg.wa || !cfg.wb) throw UsageError("--wa and --wb must be given together");
    try {
      params.dilorenzo = DiLorenzoWeights::paired(*cfg.wa, *cfg.wb);
    } catch (const InvalidParams& e) {
      throw UsageError(e.what());
    }
  }
  try {
    return model_from_spec(cfg.model, params);
  } catch (const InvalidParams& e) {
    throw UsageError(e.what());
  }
}

inline RunResult run_verify(const RunConfig& cfg) {
  const Model m = resolve_model(cfg);
  const double tol = cfg.tol.value_or(1e-12);
  RunResult o;
  o.table.columns = {"model", "ax", "ay", "az", "bx", "by", "bz", "sigma", "tau", "p_est", "p_qm", "stderr"};
  const auto pairs = low_discrepancy_pairs(cfg.settings);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, b] = pairs[i];
    const JointEstimate e = estimate_joint(m, a, b, cfg.samples, derive_seed(cfg.seed, i), cfg.workers);
    const JointTable q = qm_joint(a, b);
    std::optional<JointTable> exact;
    if (m.is_atomic()) exact = exact_average(m, a, b);
    for (Outcome s : kOutcomes) {
      for (Outcome t : kOutcomes) {
        const Estimate& est = e.at(s, t);
        o.table.rows.push_back({m.name, a.x(), a.y(), a.z(), b.x(), b.y(), b.z(),
                                static_cast<std::int64_t>(value(s)), static_cast<std::int64_t>(value(t)),
                                est.mean, q.at(s, t), est.std_error});
        const std::string where = m.name + ": " + describe_settings(a, b) + " sigma=" +
                                  std::to_string(value(s)) + " tau=" + std::to_string(value(t));
        if (!est.agrees_with(q.at(s, t))) {
          o.ok = false;
          o.failures.push_back(where + ": p_est=" + format_double(est.mean) + " p_qm=" +
                               format_double(q.at(s, t)) + " differs by more than 4*stderr (" +
                               format_double(4.0 * est.std_error) + ")");
        }
        if (exact && std::abs(exact->at(s, t) - q.at(s, t)) > tol) {
          o.ok = false;
          o.failures.push_back(where + ": exact average " + format_double(exact->at(s, t)) + " p_qm=" +
                               format_double(q.at(s, t)) + " differs by more than " + format_double(tol));
        }
      }
    }
  }
  return o;
}

inline RunResult run_audit(const RunConfig& cfg, bool samples_given) {
  const Model m = resolve_model(cfg);
  AuditConfig ac;
  ac.seed = cfg.seed;
  if (cfg.tol) ac.tol = *cfg.tol;
  if (samples_given) {
    if (cfg.samples < 100) throw UsageError("audit needs --samples >= 100 for the KS comparison");
    ac.n_ks = cfg.samples;
  }
  if (cfg.n_lambda) ac.n_lambda = cfg.n_lambda;
  const HypothesisProfile p = audit(m, ac);
  RunResult o;
  o.table.columns = {"model", "hypothesis", "declared", "verdict", "max_deviation", "witness"};
  for (const AuditRecord& r : audit_records(p, m.declared_profile)) {
    o.table.rows.push_back({r.model, r.hypothesis, r.declared, r.verdict, r.max_deviation, r.witness});
    if (r.declared != r.verdict) {
      o.ok = false;
      o.failures.push_back(m.name + ": " + r.hypothesis + " audited " + r.verdict + " but declared " +
                           r.declared + " (max deviation " + format_double(r.max_deviation) + ")" +
                           (r.witness.empty() ? "" : "; " + r.witness));
    }
  }
  return o;
}

inline RunResult run_chsh(const RunConfig& cfg) {
  const Model m = resolve_model(cfg);
  const ChshSettings st = optimal_chsh_settings();
  const std::array<std::pair<UnitVec, UnitVec>, 4> terms = {
      {{st.a, st.b}, {st.a, st.b2}, {st.a2, st.b}, {st.a2, st.b2}}};
  const std::array<double, 4> sign = {1.0, -1.0, 1.0, 1.0};
  double s = 0.0, var = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const Estimate e =
        estimate_correlator(m, terms[i].first, terms[i].second, cfg.samples, derive_seed(cfg.seed, i), cfg.workers);
    s += sign[i] * e.mean;
    var += e.std_error * e.std_error;
  }
  const double target =
      chsh([](const UnitVec& a, const UnitVec& b) { return qm_correlator(a, b); }, st.a, st.a2, st.b, st.b2);
  RunResult o;
  o.table.columns = {"model", "S", "stderr", "S_qm", "samples"};
  o.table.rows.push_back({m.name, s, std::sqrt(var), target, static_cast<std::int64_t>(cfg.samples)});
  return o;
}

inline RunResult run_scan(const RunConfig& cfg) {
  const Model m = resolve_model(cfg);
  if (!(cfg.step_deg > 0.0)) throw UsageError("--step must be positive");
  if (!(cfg.to_deg >= cfg.from_deg)) throw UsageError("--to-deg must not be below --from-deg");
  RunResult o;
  o.table.columns = {"model", "angle_deg", "e_est", "stderr", "e_qm"};
  const UnitVec a = xz_direction(0.0);
  const auto steps = static_cast<std::uint64_t>(std::floor((cfg.to_deg - cfg.from_deg) / cfg.step_deg + 1e-9));
  for (std::uint64_t k = 0; k <= steps; ++k) {
    const double deg = cfg.from_deg + static_cast<double>(k) * cfg.step_deg;
    const UnitVec b = xz_direction(deg);
    const Estimate e = estimate_correlator(m, a, b, cfg.samples, derive_seed(cfg.seed, k), cfg.workers);
    o.table.rows.push_back({m.name, deg, e.mean, e.std_error, qm_correlator(a, b)});
  }
  return o;
}

inline RunResult run_frobenius(const RunConfig& cfg) {
  const Model m = resolve_model(cfg);
  Rng rng(derive_seed(cfg.seed, 0xa1));
  const UnitVec a = sample_unit_sphere(rng);
  const UnitVec t = any_orthogonal(a);
  RunResult o;
  o.table.columns = {"model", "index", "estimate", "stderr", "mean_fit_stderr", "mean_rms_residual",
                     "fits", "rejected", "zero_points", "points"};
  const FrobeniusEstimate f =
      estimate_frobenius_indices(model_C(m), m.sampler, a, t, log_grid(), cfg.n_lambda ? cfg.n_lambda : 200, cfg.seed);
  for (const FrobeniusRecord& r : frobenius_records(f)) {
    o.table.rows.push_back({m.name, r.side, r.estimate, r.std_error, r.mean_fit_error, r.mean_rms_residual,
                            cell(r.fits), cell(r.rejected), cell(r.zero_points), cell(r.points)});
  }
  return o;
}

inline expr::Expr parse_flag(const std::string& flag, const std::string& src) {
  try {
    return expr::parse(src);
  } catch (const expr::ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

inline RunResult run_admissible(const RunConfig& cfg) {
  if (cfg.g.empty()) throw UsageError("admissible requires --g");
  if (!(cfg.s_plus > 0.0) || !(cfg.s_minus > 0.0)) throw UsageError("--splus and --sminus must be positive");
  const CFunction g = expression_function(parse_flag("--g", cfg.g));
  LambdaWeight w;
  if (!cfg.mu.empty()) {
    try {
      w = expression_weight(parse_flag("--mu", cfg.mu));
    } catch (const InvalidArgument& e) {
      throw UsageError(std::string("--mu: ") + e.what());
    }
  }
  AdmissibilityConfig ac;
  ac.seed = cfg.seed;
  if (cfg.tol) ac.tol = *cfg.tol;
  if (cfg.n_lambda) ac.n_lambda = cfg.n_lambda;
  const AdmissibilityReport r = admissible(g, generic_sampler(), cfg.s_plus, cfg.s_minus, ac, w);
  RunResult o;
  o.ok = r.admissible;
  o.table.columns = {"rule", "passed", "value", "witness"};
  for (const AdmissibilityRecord& rec : admissibility_records(r)) {
    o.table.rows.push_back({rec.rule, rec.passed, rec.value, rec.witness});
    if (!rec.passed) o.failures.push_back("G=" + cfg.g + ": rule " + rec.rule + " failed: " + rec.witness);
  }
  if (r.degenerate) o.table.rows.push_back({std::string("degenerate"), true, 0.0, std::string("G vanishes identically")});
  return o;
}

inline void report_error(const RunConfig& cfg, std::ostream& err, const std::string& kind, const std::string& msg,
                         const std::vector<std::string>& details = {}) {
  if (cfg.format == Format::Json) {
    nlohmann::ordered_json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = msg;
    if (!cfg.command.empty()) j["error"]["command"] = cfg.command;
    if (!cfg.model.empty()) j["error"]["model"] = cfg.model;
    if (!details.empty()) j["error"]["details"] = details;
    err << j.dump() << '\n';
    return;
  }
  err << "hvs: " << kind << ": " << msg << '\n';
  for (const auto& d : details) err << "  " << d << '\n';
}

}  // namespace detail

/// Runs one command. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Hidden-variable models of the spin singlet: verification, audits and admissibility", "hvs"};
  app.require_subcommand(1);
  std::string format = "csv";

  app.add_option("--samples", cfg.samples, "Monte Carlo samples per setting pair")
      ->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 40));
  app.add_option("--seed", cfg.seed, "Master seed");
  app.add_option("--tol", cfg.tol, "Tolerance (exact averages, audits, positivity)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.out_path, "Write output to PATH instead of standard output");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1u, 4096u));
  app.add_option("--wa", cfg.wa, "dilorenzo weight of the atoms at +-a");
  app.add_option("--wb", cfg.wb, "dilorenzo weight of the atoms at +-b");

  auto model_cmd = [&](const char* name, const char* help) {
    CLI::App* c = app.add_subcommand(name, help);
    c->fallthrough();
    c->add_option("model", cfg.model, "Model name (brans, toner-bacon, cerf-full, cerf-reduced, "
                                      "groblacher, hall, dilorenzo[:wa,wb])")
        ->required();
    return c;
  };
  CLI::App* verify = model_cmd("verify", "Compare averaged statistics with the singlet prediction");
  verify->add_option("--settings", cfg.settings, "Number of setting pairs")->check(CLI::Range(1, 100000));
  CLI::App* audit_cmd = model_cmd("audit", "Audit the hypotheses and compare with the declared profile");
  audit_cmd->add_option("--n-lambda", cfg.n_lambda, "Hidden-variable draws per check");
  model_cmd("chsh", "CHSH value at the optimal quantum settings");
  CLI::App* scan = model_cmd("scan", "Correlator against angle in the x-z plane");
  scan->add_option("--from-deg", cfg.from_deg, "First angle");
  scan->add_option("--to-deg", cfg.to_deg, "Last angle");
  scan->add_option("--step", cfg.step_deg, "Angle step");
  CLI::App* frob = model_cmd("frobenius", "Estimate the Frobenius indices of the model's C");
  frob->add_option("--n-lambda", cfg.n_lambda, "Hidden-variable draws per approach");
  CLI::App* adm = app.add_subcommand("admissible", "Check a candidate G(lambda, a, b)");
  adm->fallthrough();
  adm->add_option("--g", cfg.g, "Expression for G")->required();
  adm->add_option("--splus", cfg.s_plus, "Exponent s+")->required();
  adm->add_option("--sminus", cfg.s_minus, "Exponent s-")->required();
  adm->add_option("--mu", cfg.mu, "Nonnegative weight over l1..l4 relative to the base measure");
  adm->add_option("--n-lambda", cfg.n_lambda, "Hidden-variable draws per settings point");

  std::vector<const char*> argv = {"hvs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    // --format may not have been parsed; honour it if it was given.
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--format" && args[i + 1] == "json") cfg.format = Format::Json;
      if (args[i] == "--format=json") cfg.format = Format::Json;
    }
    detail::report_error(cfg, err, "usage", e.what());
    return 2;
  }
  cfg.format = format == "json" ? Format::Json : Format::Csv;
  for (const CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();

  detail::RunResult result;
  try {
    const bool samples_given = app.count("--samples") > 0;
    if (cfg.command == "verify") {
      result = detail::run_verify(cfg);
    } else if (cfg.command == "audit") {
      result = detail::run_audit(cfg, samples_given);
    } else if (cfg.command == "chsh") {
      result = detail::run_chsh(cfg);
    } else if (cfg.command == "scan") {
      result = detail::run_scan(cfg);
    } else if (cfg.command == "frobenius") {
      result = detail::run_frobenius(cfg);
    } else {
      result = detail::run_admissible(cfg);
    }
  } catch (const detail::UsageError& e) {
    detail::report_error(cfg, err, "usage", e.what());
    return 2;
  } catch (const Error& e) {
    detail::report_error(cfg, err, "failure", e.what());
    return 1;
  }

  if (cfg.out_path.empty()) {
    detail::emit(result.table, cfg, result.ok, out);
  } else {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      detail::report_error(cfg, err, "usage", "cannot open output file " + cfg.out_path);
      return 2;
    }
    detail::emit(result.table, cfg, result.ok, f);
  }
  if (!result.ok) {
    detail::report_error(cfg, err, "failure", cfg.command + " failed for " + (cfg.model.empty() ? cfg.g : cfg.model),
                         result.failures);
    return 1;
  }
  return 0;
}

}  // namespace hvs::cli

#endif  // HVSINGLET_CLI_HPP_
