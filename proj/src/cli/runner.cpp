#include "modtop/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "modtop/cli/grammar.hpp"
#include "modtop/diagnostics.hpp"
#include "modtop/dirichlet.hpp"
#include "modtop/error.hpp"
#include "modtop/properties.hpp"

namespace modtop::cli {

namespace {

[[noreturn]] void config_error(const std::string& why) { throw Error(ErrorCode::ConfigError, why); }

bool nonnegative_integer(const Json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

const std::map<std::string, std::set<std::string>>& command_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"modular", {"seq", "fun", "exp", "lambda"}},
      {"norm", {"seq", "fun", "exp", "radius"}},
      {"delta2", {"exp", "terms"}},
      {"converge", {"seq", "fun", "exp", "family", "count", "lambdas"}},
      {"counterexample", {"name"}},
      {"dirichlet", {"n", "exp", "phi", "max_iter", "residual_tol"}},
      {"suite", {"names"}},
  };
  return keys;
}

// ---------------------------------------------------------------- params

class Params {
 public:
  explicit Params(const Json& j) : j_(j) {}

  bool has(const char* key) const { return j_.contains(key); }

  std::string text(const char* key) const {
    if (!has(key)) config_error(std::string("missing parameter '") + key + "'");
    if (!j_[key].is_string()) config_error(std::string("parameter '") + key + "' must be a string");
    return j_[key].get<std::string>();
  }
  std::string text(const char* key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  double real(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!j_[key].is_number()) config_error(std::string("parameter '") + key + "' must be a number");
    return j_[key].get<double>();
  }

  std::size_t count(const char* key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    if (!nonnegative_integer(j_[key])) {
      config_error(std::string("parameter '") + key + "' must be a nonnegative integer");
    }
    return j_[key].get<std::size_t>();
  }

  std::vector<double> reals(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    if (!j_[key].is_array()) config_error(std::string("parameter '") + key + "' must be an array");
    for (const auto& v : j_[key]) {
      if (!v.is_number()) config_error(std::string("parameter '") + key + "' must hold numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }

  const Json& raw(const char* key) const { return j_[key]; }

 private:
  const Json& j_;
};

using Element = std::variant<SequenceVec, PiecewiseFunction>;

Element element(const Params& p) {
  if (p.has("seq") == p.has("fun")) config_error("exactly one of 'seq' and 'fun' is required");
  if (p.has("seq")) return parse_sequence(p.text("seq"));
  return parse_function(p.text("fun"));
}

std::string describe(const Element& e) {
  return std::visit([](const auto& v) { return v.describe(); }, e);
}

const char* element_key(const Element& e) {
  return std::holds_alternative<SequenceVec>(e) ? "seq" : "fun";
}

// ---------------------------------------------------------------- outcome

struct Outcome {
  Json input = Json::object();
  Json result = Json::object();
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> csv;
  /// false only when an entry of an aggregate failed
  bool ok = true;
};

Check check(std::string name, bool passed, double value, double bound,
            std::optional<ModularValue> m = std::nullopt) {
  Check c;
  c.name = std::move(name);
  c.passed = passed;
  c.value = value;
  c.bound = bound;
  c.modular = std::move(m);
  return c;
}

std::string csv_modular(const ModularValue& m) {
  if (m.is_finite()) return csv_number(m.value());
  if (m.is_infinite()) return "inf";
  return "indeterminate";
}

ModularValue modular_of(const SequenceVec& x, const ExponentSpec& p, const ModularConfig& cfg) {
  return eval_seq_modular(x, p, cfg);
}
ModularValue modular_of(const PiecewiseFunction& u, const ExponentSpec& p, const ModularConfig& cfg) {
  return eval_fun_modular(u, p, cfg);
}

// A job is parsed eagerly (config errors) and executed later (scenario errors).
using Job = std::function<void(Outcome&)>;

Job modular_job(const Params& p, const ModularConfig& cfg, Json& input) {
  const Element x = element(p);
  const ExponentSpec e = parse_exponent(p.text("exp"));
  const double lambda = p.real("lambda", 1.0);
  input[element_key(x)] = describe(x);
  input["exp"] = e.describe();
  input["lambda"] = number(lambda);
  return [=](Outcome& out) {
    const ModularValue m = std::visit(
        [&](const auto& v) {
          return lambda == 1.0 ? modular_of(v, e, cfg) : scaled_modular(v, e, lambda, cfg);
        },
        x);
    out.result["modular"] = to_json(m);
  };
}

Job norm_job(const Params& p, const std::optional<double>& tol, const ModularConfig& cfg,
             Json& input) {
  const Element x = element(p);
  const ExponentSpec e = parse_exponent(p.text("exp"));
  NormOptions opts;
  opts.tol = tol.value_or(opts.tol);
  opts.modular = cfg;
  if (!(opts.tol > 0.0)) config_error("tol must be positive");
  input[element_key(x)] = describe(x);
  input["exp"] = e.describe();
  if (p.has("radius")) {
    const double r = p.real("radius", 1.0);
    input["radius"] = number(r);
    return [=](Outcome& out) {
      const auto br = std::visit([&](const auto& v) { return minkowski_bracket(v, e, r, opts); }, x);
      out.result["minkowski"] = to_json(br);
    };
  }
  return [=](Outcome& out) {
    std::visit(
        [&](const auto& v) {
          const auto nr = luxemburg_norm(v, e, opts);
          out.result["norm"] = to_json(nr);
          const auto rel = verify_norm_modular_relations(v, e, 1e-8, opts);
          out.result["relations"] = to_json(rel);
          out.checks.push_back(check("norm-modular-relations", rel.all_pass, rel.norm, 1.0));
        },
        x);
  };
}

Job delta2_job(const Params& p, const ModularConfig& cfg, Json& input) {
  const ExponentSpec e = parse_exponent(p.text("exp"));
  Delta2Options opts;
  opts.witness_terms = p.count("terms", opts.witness_terms);
  opts.modular = cfg;
  input["exp"] = e.describe();
  input["terms"] = opts.witness_terms;
  return [=](Outcome& out) {
    const auto v = check_delta2(e, opts);
    out.result["delta2"] = to_json(v);
    if (!v.witness) return;
    const auto& w = *v.witness;
    out.checks.push_back(check("witness-modular-finite",
                               w.modular.is_finite() && w.modular.value() <= w.finite_bound,
                               w.modular.lower_bound(), w.finite_bound, w.modular));
    for (const auto& s : w.scaled) {
      const bool ok = s.value.is_infinite() &&
                      std::visit(
                          [&](const auto& el) {
                            return recheck_certificate(el.scaled(s.lambda), e,
                                                       s.value.certificate(), cfg);
                          },
                          w.element);
      out.checks.push_back(check("scaled-modular-infinite@" + csv_number(s.lambda), ok,
                                 s.value.lower_bound(), std::numeric_limits<double>::infinity(),
                                 s.value));
    }
  };
}

template <class T>
std::vector<T> family_of(const T& limit, const std::string& kind, std::size_t count) {
  std::vector<T> fam;
  for (std::size_t j = 1; j <= count; ++j) {
    if (kind == "scaled") {
      fam.push_back(limit.scaled(1.0 - std::ldexp(1.0, -static_cast<int>(j))));
    } else if constexpr (std::is_same_v<T, SequenceVec>) {
      fam.push_back(limit.prefix(j));
    } else {
      if (limit.form() != PiecewiseFunction::Form::HarmonicCells) {
        throw Error(ErrorCode::InvalidArgument, "prefix families need a catalog function");
      }
      fam.push_back(PiecewiseFunction::harmonic_cells(limit.cell_scales().prefix(j)));
    }
  }
  return fam;
}

Job converge_job(const Params& p, const std::optional<double>& tol, const ModularConfig& cfg,
                 Json& input) {
  const Element limit = element(p);
  const ExponentSpec e = parse_exponent(p.text("exp"));
  const std::string kind = p.text("family", "prefixes");
  if (kind != "prefixes" && kind != "scaled") config_error("family must be 'prefixes' or 'scaled'");
  const std::size_t count = p.count("count", 40);
  if (count == 0) config_error("count must be positive");
  const auto grid = p.reals("lambdas", default_lambda_grid());
  const double t = tol.value_or(1e-6);
  input[element_key(limit)] = describe(limit);
  input["exp"] = e.describe();
  input["family"] = kind;
  input["count"] = count;
  input["lambdas"] = grid;
  return [=](Outcome& out) {
    NormOptions opts;
    opts.modular = cfg;
    std::visit(
        [&](const auto& lim) {
          const auto fam = family_of(lim, kind, count);
          const auto cr = classify_convergence(fam, lim, e, grid, t, opts);
          out.result["modular_converges"] = cr.modular_converges;
          Json per = Json::object();
          for (const auto& [l, ok] : cr.per_lambda) per[csv_number(l)] = ok;
          out.result["per_lambda"] = std::move(per);
          out.result["norm_converges"] = cr.norm_converges;
          Json rates = Json::array();
          for (const auto& [j, m] : cr.rates) rates.push_back({{"index", j}, {"modular", to_json(m)}});
          out.result["rates"] = std::move(rates);

          std::ostringstream csv;
          csv << "index";
          for (double l : grid) csv << ",rho@" << csv_number(l);
          csv << ",norm\n";
          for (std::size_t j = 0; j < fam.size(); ++j) {
            const auto diff = fam[j] - lim;
            csv << j + 1;
            for (double l : grid) csv << ',' << csv_modular(scaled_modular(diff, e, l, cfg));
            csv << ',' << csv_number(cr.norms[j]) << '\n';
          }
          out.csv.emplace_back("convergence.csv", csv.str());
        },
        limit);
  };
}

Job counterexample_job(const Params& p, std::uint64_t seed, const ModularConfig& cfg,
                       Json& input) {
  const std::string name = p.text("name");
  input["name"] = name;
  return [=](Outcome& out) {
    const auto rep = run_counterexample(name, seed, cfg);
    Json j = to_json(rep);
    j.erase("checks");
    j.erase("passed");
    out.result = std::move(j);
    out.checks = rep.checks;
  };
}

std::function<double(double)> named_phi(const std::string& name) {
  if (name == "x") return [](double x) { return x; };
  if (name == "x(1-x)") return [](double x) { return x * (1 - x); };
  if (name == "zero") return [](double) { return 0.0; };
  if (name == "sin(pi x)") return [](double x) { return std::sin(std::numbers::pi * x); };
  config_error("unknown phi '" + name + "' (known: x, x(1-x), zero, sin(pi x))");
}

Job dirichlet_job(const Params& p, const std::optional<double>& tol, Json& input) {
  const std::size_t n = p.count("n", 64);
  const ExponentSpec e = parse_exponent(p.text("exp"));
  SolveOptions opts;
  opts.tol = tol.value_or(opts.tol);
  opts.max_iter = p.count("max_iter", opts.max_iter);
  const double residual_tol = p.real("residual_tol", 1e-6);
  input["n"] = n;
  input["exp"] = e.describe();
  std::function<double(double)> phi;
  std::vector<double> nodes;
  if (!p.has("phi") || p.raw("phi").is_string()) {
    const std::string name = p.text("phi", "x");
    phi = named_phi(name);
    input["phi"] = name;
  } else {
    nodes = p.reals("phi", {});
    input["phi"] = nodes;
  }
  input["residual_tol"] = number(residual_tol);
  return [=](Outcome& out) {
    const auto prob = phi ? assemble_energy(n, e, phi) : assemble_energy(n, e, nodes);
    const auto tr = minimize_energy(prob, opts);
    const auto res = residual_check(prob, tr.final_u, residual_tol);
    double u_sup = 0.0;
    for (double v : tr.final_u) u_sup = std::max(u_sup, std::abs(v));
    const auto& last = tr.iterates.back();
    out.result["converged"] = tr.converged;
    out.result["max_iter_exceeded"] = tr.max_iter_exceeded;
    out.result["stalled"] = tr.stalled;
    out.result["iterations"] = last.iteration;
    out.result["energy"] = number(last.energy);
    out.result["grad_inf"] = number(last.grad_inf);
    out.result["residual"] = number(res.max_residual);
    out.result["u_sup"] = number(u_sup);

    double rise = 0.0;
    for (std::size_t k = 1; k < tr.iterates.size(); ++k) {
      const double prev = tr.iterates[k - 1].energy;
      rise = std::max(rise, (tr.iterates[k].energy - prev) / std::max(prev, 1e-300));
    }
    const auto& md = tr.modular_distance;
    bool decreasing = true;
    for (std::size_t i = md.size() / 2; i + 1 < md.size(); ++i) {
      decreasing = decreasing && md[i + 1].second <= md[i].second;
    }
    out.checks.push_back(check("converged", tr.converged, last.grad_inf, opts.tol));
    out.checks.push_back(check("residual", res.pass, res.max_residual, residual_tol));
    out.checks.push_back(check("energy-monotone", rise <= 1e-14, rise, 1e-14));
    out.checks.push_back(check("modular-distance-decreasing", decreasing, md.back().second, 0.0));

    std::ostringstream trace;
    trace << "iteration,energy,grad_inf,step,modular_distance\n";
    for (const auto& [k, d] : md) {
      const auto& it = tr.iterates[k];
      trace << k << ',' << csv_number(it.energy) << ',' << csv_number(it.grad_inf) << ','
            << csv_number(it.step) << ',' << csv_number(d) << '\n';
    }
    out.csv.emplace_back("dirichlet_trace.csv", trace.str());
    std::ostringstream sol;
    sol << "x,u,phi\n";
    for (std::size_t i = 0; i <= n; ++i) {
      const double u = (i == 0 || i == n) ? 0.0 : tr.final_u[i - 1];
      sol << csv_number(static_cast<double>(i) * prob.h) << ',' << csv_number(u) << ','
          << csv_number(prob.phi[i]) << '\n';
    }
    out.csv.emplace_back("dirichlet_solution.csv", sol.str());
  };
}

Job suite_job(const Params& p, std::size_t parallel, std::uint64_t seed, const ModularConfig& cfg,
              Json& input) {
  std::vector<std::string> names;
  if (p.has("names")) {
    if (!p.raw("names").is_array()) config_error("parameter 'names' must be an array");
    for (const auto& v : p.raw("names")) {
      if (!v.is_string()) config_error("parameter 'names' must hold strings");
      names.push_back(v.get<std::string>());
    }
  } else {
    names = suite_names();
  }
  input["names"] = names;
  input["parallel"] = parallel;
  return [=](Outcome& out) {
    out.result = run_suite(names, parallel, seed, cfg);
    out.ok = out.result["passed"].get<bool>();
  };
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json error_json(const std::string& code, const std::string& message) {
  return Json{{"code", code}, {"message", message}};
}

}  // namespace

ScenarioConfig parse_config(const Json& doc) {
  if (!doc.is_object() || doc.empty()) config_error("empty config");
  static const std::set<std::string> top = {"command", "params", "tol", "out", "seed", "parallel"};
  for (const auto& [k, v] : doc.items()) {
    if (!top.count(k)) config_error("unknown key '" + k + "'");
  }
  ScenarioConfig c;
  if (!doc.contains("command") || !doc["command"].is_string()) config_error("missing 'command'");
  c.command = doc["command"].get<std::string>();
  const auto keys = command_keys().find(c.command);
  if (keys == command_keys().end()) config_error("unknown command '" + c.command + "'");
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) config_error("'params' must be an object");
    for (const auto& [k, v] : doc["params"].items()) {
      if (!keys->second.count(k)) config_error("unknown parameter '" + k + "' for " + c.command);
    }
    c.params = doc["params"];
  }
  if (doc.contains("tol")) {
    if (!doc["tol"].is_number() || !(doc["tol"].get<double>() > 0.0)) {
      config_error("'tol' must be a positive number");
    }
    c.tol = doc["tol"].get<double>();
  }
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) config_error("'out' must be a string");
    c.out = doc["out"].get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!nonnegative_integer(doc["seed"])) config_error("'seed' must be a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("parallel")) {
    if (!nonnegative_integer(doc["parallel"]) || doc["parallel"].get<std::size_t>() == 0) {
      config_error("'parallel' must be a positive integer");
    }
    c.parallel = doc["parallel"].get<std::size_t>();
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) config_error("empty config");
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

std::vector<std::string> suite_names() {
  std::vector<std::string> names = scenario_names();
  for (const auto& n : property_suite_names()) names.push_back(n);
  return names;
}

Json run_suite(const std::vector<std::string>& names, std::size_t parallelism, std::uint64_t seed,
               const ModularConfig& cfg) {
  std::vector<Json> entries(names.size());
  const auto& registry = scenario_names();
  const auto& props = property_suite_names();
  auto one = [&](std::size_t i) {
    const std::string& name = names[i];
    try {
      ScenarioReport rep;
      if (std::find(registry.begin(), registry.end(), name) != registry.end()) {
        rep = run_counterexample(name, seed, cfg);
      } else if (std::find(props.begin(), props.end(), name) != props.end()) {
        rep = run_property_suite(name, seed, cfg);
      } else {
        throw Error(ErrorCode::UnknownScenario, "unknown scenario '" + name + "'");
      }
      entries[i] = to_json(rep);
    } catch (const Error& e) {
      entries[i] = Json{{"name", name}, {"passed", false},
                        {"error", error_json(std::string(to_string(e.code())), e.what())}};
    } catch (const std::exception& e) {
      entries[i] = Json{{"name", name}, {"passed", false}, {"error", error_json("Internal", e.what())}};
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(names.size(), 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < names.size();) one(i);
    });
  }
  for (std::size_t i; (i = next++) < names.size();) one(i);
  for (auto& t : pool) t.join();

  Json report;
  report["seed"] = seed;
  bool all = true;
  Json failed = Json::array();
  Json list = Json::array();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!entries[i]["passed"].get<bool>()) {
      all = false;
      failed.push_back(names[i]);
    }
    list.push_back(std::move(entries[i]));
  }
  report["passed"] = all;
  report["failed"] = std::move(failed);
  report["scenarios"] = std::move(list);
  return report;
}

RunOutput run(const ScenarioConfig& config, const ModularConfig& cfg) {
  const auto keys = command_keys().find(config.command);
  if (keys == command_keys().end()) config_error("unknown command '" + config.command + "'");
  for (const auto& [k, v] : config.params.items()) {
    if (!keys->second.count(k)) config_error("unknown parameter '" + k + "' for " + config.command);
  }

  Outcome out;
  const Params p(config.params);
  Job job;
  const std::string& cmd = config.command;
  if (cmd == "modular") job = modular_job(p, cfg, out.input);
  else if (cmd == "norm") job = norm_job(p, config.tol, cfg, out.input);
  else if (cmd == "delta2") job = delta2_job(p, cfg, out.input);
  else if (cmd == "converge") job = converge_job(p, config.tol, cfg, out.input);
  else if (cmd == "counterexample") job = counterexample_job(p, config.seed, cfg, out.input);
  else if (cmd == "dirichlet") job = dirichlet_job(p, config.tol, out.input);
  else job = suite_job(p, config.parallel, config.seed, cfg, out.input);

  RunOutput res;
  res.report["command"] = cmd;
  res.report["timestamp"] = timestamp();
  res.report["seed"] = config.seed;
  if (config.tol) res.report["tol"] = number(*config.tol);
  bool passed = false;
  try {
    job(out);
    passed = out.ok && std::all_of(out.checks.begin(), out.checks.end(),
                                   [](const Check& c) { return c.passed; });
    res.csv = std::move(out.csv);
  } catch (const Error& e) {
    res.report["error"] = error_json(std::string(to_string(e.code())), e.what());
  }
  res.report["input"] = std::move(out.input);
  res.report["result"] = std::move(out.result);
  Json checks = Json::array();
  for (const auto& c : out.checks) checks.push_back(to_json(c));
  res.report["checks"] = std::move(checks);
  res.report["passed"] = passed;
  res.exit_code = passed ? 0 : 1;
  return res;
}

void write_outputs(const RunOutput& output, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) config_error("cannot write '" + (dir / name).string() + "'");
    f << text;
  };
  write("report.json", serialize(output.report));
  for (const auto& [name, text] : output.csv) write(name, text);
}

std::string serialize(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace modtop::cli
