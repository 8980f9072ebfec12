#ifndef PLK_IO_HPP
#define PLK_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "plk/algorithms.hpp"
#include "plk/geometry.hpp"

namespace plk {

using json = nlohmann::json;

// Shortest round-trippable decimal form; %.17g keeps emission byte-stable
// across runs and platforms with IEEE doubles.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline json point_to_json(const Point& x) {
  json a = json::array();
  for (double c : x) a.push_back(c);
  return a;
}

inline Point point_from_json(const json& j) {
  Point x;
  for (const auto& c : j) x.push_back(c.get<double>());
  return x;
}

// ---------------------------------------------------------------------------
// Problem construction from a config fragment {"kind": ..., params...}

inline Problem make_problem(const json& spec) {
  if (!spec.contains("kind"))
    throw std::invalid_argument("problem spec: missing key 'kind'");
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "pow_abs") return make_pow_abs(spec.at("alpha").get<double>());
  if (kind == "piecewise_plus") return make_piecewise_plus();
  if (kind == "quadratic")
    return make_quadratic(spec.at("c").get<double>(), spec.value("n", 1));
  if (kind == "dc_quadratic")
    return make_dc_quadratic(spec.at("a_g").get<double>(), spec.at("a_h").get<double>(),
                             spec.value("n", 1));
  if (kind == "dc_abs")
    return make_dc_abs(spec.at("c").get<double>(), spec.at("rho").get<double>());
  throw std::invalid_argument("problem spec: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Trajectory serialization

inline std::string trajectory_csv(const Trajectory& t) {
  std::string out = "k";
  const std::size_t dim = t.records.empty() ? 0 : t.records.front().x.size();
  for (std::size_t i = 0; i < dim; ++i) out += ",x_" + std::to_string(i);
  out += ",value,gap,step_norm,subgrad_dist\n";
  for (const auto& r : t.records) {
    out += std::to_string(r.k);
    for (double c : r.x) out += "," + fmt(c);
    out += "," + fmt(r.value);
    out += "," + fmt(r.value - t.reference_value);
    out += ",";
    if (r.step_norm) out += fmt(*r.step_norm);
    out += ",";
    if (r.subgrad_dist) out += fmt(*r.subgrad_dist);
    out += "\n";
  }
  return out;
}

inline json trajectory_to_json(const Trajectory& t, const json& problem_spec = json()) {
  json j;
  j["problem_id"] = t.problem_id;
  j["algorithm_id"] = t.algorithm_id;
  j["termination"] = to_string(t.termination);
  if (!problem_spec.is_null()) j["problem"] = problem_spec;
  if (t.reference_point) j["reference_point"] = point_to_json(*t.reference_point);
  j["reference_value"] = t.reference_value;
  json recs = json::array();
  for (const auto& r : t.records) {
    json jr;
    jr["k"] = r.k;
    jr["x"] = point_to_json(r.x);
    jr["value"] = r.value;
    if (r.subgrad_witness) jr["subgrad_witness"] = point_to_json(*r.subgrad_witness);
    if (r.subgrad_dist) jr["subgrad_dist"] = *r.subgrad_dist;
    if (r.step_norm) jr["step_norm"] = *r.step_norm;
    if (!r.step_params.empty()) {
      json sp;
      for (const auto& [k, v] : r.step_params) sp[k] = v;
      jr["step_params"] = sp;
    }
    recs.push_back(jr);
  }
  j["records"] = recs;
  return j;
}

inline Termination termination_from_string(const std::string& s) {
  if (s == "converged_step_tol") return Termination::converged_step_tol;
  if (s == "value_flat") return Termination::value_flat;
  if (s == "max_iters") return Termination::max_iters;
  if (s == "exact_stationary") return Termination::exact_stationary;
  throw std::invalid_argument("unknown termination kind '" + s + "'");
}

inline Trajectory trajectory_from_json(const json& j) {
  Trajectory t;
  t.problem_id = j.at("problem_id").get<std::string>();
  t.algorithm_id = j.at("algorithm_id").get<std::string>();
  t.termination = termination_from_string(j.at("termination").get<std::string>());
  if (j.contains("reference_point")) t.reference_point = point_from_json(j.at("reference_point"));
  t.reference_value = j.value("reference_value", 0.0);
  for (const auto& jr : j.at("records")) {
    IterateRecord r;
    r.k = jr.at("k").get<std::size_t>();
    r.x = point_from_json(jr.at("x"));
    r.value = jr.at("value").get<double>();
    if (jr.contains("subgrad_witness")) r.subgrad_witness = point_from_json(jr.at("subgrad_witness"));
    if (jr.contains("subgrad_dist")) r.subgrad_dist = jr.at("subgrad_dist").get<double>();
    if (jr.contains("step_norm")) r.step_norm = jr.at("step_norm").get<double>();
    if (jr.contains("step_params"))
      for (const auto& [k, v] : jr.at("step_params").items())
        r.step_params[k] = v.get<double>();
    t.records.push_back(std::move(r));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Report serialization

inline json certificate_to_json(const DescentCertificate& c) {
  json j;
  j["a_max"] = c.a_max;
  j["h1_failed"] = c.h1_failed;
  if (c.b_min_h2) j["b_min_h2"] = *c.b_min_h2;
  if (c.b_min_h3) j["b_min_h3"] = *c.b_min_h3;
  j["h4_ok"] = c.h4_ok;
  if (c.sigma_primary) j["sigma_primary"] = *c.sigma_primary;
  j["complementary_ok"] = c.complementary_ok;
  j["violations"] = c.violations;
  j["zero_step_indices"] = c.zero_step_indices;
  json margins = json::array();
  for (const auto& m : c.per_k_margins)
    margins.push_back({{"k", m.k},
                       {"h1_margin", m.h1_margin},
                       {"h2_ratio", m.h2_ratio},
                       {"h3_ratio", m.h3_ratio}});
  j["per_k_margins"] = margins;
  return j;
}

inline json rate_report_to_json(const RateReport& r) {
  json j;
  j["classification"] = to_string(r.classification);
  if (r.finite_k0) j["finite_k0"] = *r.finite_k0;
  if (r.linear_factor) j["linear_factor"] = *r.linear_factor;
  if (r.sublinear_power) j["sublinear_power"] = *r.sublinear_power;
  j["tail_ratio_first"] = r.tail_ratio_first;
  j["tail_ratio_last"] = r.tail_ratio_last;
  j["fit_r2"] = r.fit_r2;
  json env = json::array();
  for (const auto& e : r.envelope_checks)
    env.push_back({{"check", e.check},
                   {"fitted_const", e.fitted_const},
                   {"bound", e.bound},
                   {"observed", e.observed},
                   {"max_violation", e.max_violation},
                   {"ok", e.ok}});
  j["envelope_checks"] = env;
  return j;
}

inline std::string growth_probe_csv(const GrowthProbeResult& g) {
  std::string out = "r,sigma0,sigma1,L_hat,lhs,rhs,holds\n";
  for (const auto& row : g.rows) {
    out += fmt(row.r) + "," + fmt(row.sigma0) + "," + fmt(row.sigma1) + "," + fmt(row.L_hat) +
           "," + fmt(row.lhs) + "," + fmt(row.rhs) + "," + (row.holds ? "1" : "0") + "\n";
  }
  return out;
}

inline json growth_probe_to_json(const GrowthProbeResult& g) {
  json j;
  j["slope_lhs"] = g.slope_lhs;
  j["slope_rhs"] = g.slope_rhs;
  j["slope_L"] = g.slope_L;
  if (g.first_failure_radius) j["first_failure_radius"] = *g.first_failure_radius;
  json rows = json::array();
  for (const auto& row : g.rows)
    rows.push_back({{"r", row.r},
                    {"sigma0", row.sigma0},
                    {"sigma1", row.sigma1},
                    {"L_hat", row.L_hat},
                    {"lhs", row.lhs},
                    {"rhs", row.rhs},
                    {"holds", row.holds}});
  j["rows"] = rows;
  return j;
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  json problem;    // {"kind": ..., params...}
  json algorithm;  // {"kind": ..., config fields...}
  Point x0;
  std::uint64_t rng_seed = 0;
  json tolerances;
  std::string out_dir = "out";
};

inline RunConfig parse_run_config(const json& j) {
  RunConfig c;
  if (!j.contains("problem")) throw std::invalid_argument("config: missing key 'problem'");
  if (!j.contains("algorithm")) throw std::invalid_argument("config: missing key 'algorithm'");
  if (!j.contains("x0")) throw std::invalid_argument("config: missing key 'x0'");
  c.problem = j.at("problem");
  c.algorithm = j.at("algorithm");
  c.x0 = point_from_json(j.at("x0"));
  c.rng_seed = j.value("rng_seed", 0);
  c.tolerances = j.value("tolerances", json::object());
  if (j.contains("output")) c.out_dir = j.at("output").value("dir", "out");
  for (const auto& [key, v] : c.tolerances.items())
    if (!(v.get<double>() > 0.0))
      throw std::invalid_argument("config: tolerance '" + key + "' must be positive");
  return c;
}

// Applies "a.b.c=value" into the config tree; the value is parsed as JSON
// when possible and kept as a string otherwise.
inline void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("override '" + assignment + "': expected key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw std::invalid_argument("override '" + assignment + "': empty path segment");
    if (dot == std::string::npos) {
      json val = json::parse(raw, nullptr, false);
      (*node)[key] = val.is_discarded() ? json(raw) : val;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

// Dispatch of a parsed run configuration to the matching algorithm driver.
inline Trajectory run_from_config(const RunConfig& cfg) {
  const Problem p = make_problem(cfg.problem);
  const std::string kind = cfg.algorithm.value("kind", "");
  const json& a = cfg.algorithm;
  if (kind == "proximal") {
    ProximalConfig pc;
    pc.lambda = a.value("lambda", pc.lambda);
    if (a.contains("lambda_schedule"))
      for (const auto& l : a.at("lambda_schedule")) pc.lambda_schedule.push_back(l.get<double>());
    pc.max_iters = a.value("max_iters", pc.max_iters);
    pc.step_tol = a.value("step_tol", pc.step_tol);
    pc.value_tol = a.value("value_tol", pc.value_tol);
    return run_proximal(p, cfg.x0, pc);
  }
  if (kind == "bdca" || kind == "dca") {
    BDCAConfig bc;
    bc.alpha = a.value("alpha", bc.alpha);
    bc.lambda_bar = a.value("lambda_bar", bc.lambda_bar);
    bc.beta = a.value("beta", bc.beta);
    bc.max_backtracks = a.value("max_backtracks", bc.max_backtracks);
    bc.max_iters = a.value("max_iters", bc.max_iters);
    bc.step_tol = a.value("step_tol", bc.step_tol);
    return kind == "dca" ? run_dca(p, cfg.x0, bc) : run_bdca(p, cfg.x0, bc);
  }
  if (kind == "irg") {
    IRGConfig ic;
    ic.stepsize_rule =
        a.value("stepsize_rule", std::string("constant")) == "backtracking"
            ? IRGStepRule::backtracking
            : IRGStepRule::constant;
    ic.t0 = a.value("t0", ic.t0);
    ic.beta_decrease = a.value("beta_decrease", ic.beta_decrease);
    ic.error_ratio = a.value("error_ratio", ic.error_ratio);
    ic.max_iters = a.value("max_iters", ic.max_iters);
    ic.grad_tol = a.value("grad_tol", ic.grad_tol);
    return run_irg(p, cfg.x0, ic, cfg.rng_seed);
  }
  throw std::invalid_argument("config: unknown algorithm kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// File helpers

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

inline json load_json(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw std::invalid_argument("no such file: '" + path.string() + "'");
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw std::invalid_argument("'" + path.string() + "' is not valid JSON");
  return j;
}

}  // namespace plk

#endif  // PLK_IO_HPP
