#include "canspec/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "canspec/errors.hpp"
#include "canspec/fourier.hpp"
#include "canspec/hadamard.hpp"
#include "canspec/numtheory.hpp"
#include "canspec/report.hpp"
#include "canspec/selfsimilar.hpp"
#include "canspec/spectrum.hpp"
#include "json.hpp"

namespace canspec::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Value coercion.  Integers come in as JSON numbers or decimal strings (the
// string form keeps values past the double-safe range exact); rationals are
// strings "a/b", "0.677", or "3".

long long parse_ll(const std::string& s, const std::string& what) {
  long long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e)
    throw config_error(what + ": '" + s + "' is not an integer");
  return v;
}

long long to_int(const json& v, const std::string& what) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<long long>::max()))
      throw config_error(what + ": value does not fit a signed 64-bit integer");
    return static_cast<long long>(u);
  }
  if (v.is_string()) return parse_ll(v.get<std::string>(), what);
  throw config_error(what + ": expected an integer (number or decimal string)");
}

std::uint64_t to_uint(const json& v, const std::string& what) {
  const long long i = to_int(v, what);
  if (i < 0) throw config_error(what + ": must be nonnegative");
  return static_cast<std::uint64_t>(i);
}

unsigned to_unsigned(const json& v, const std::string& what) {
  const std::uint64_t u = to_uint(v, what);
  if (u > std::numeric_limits<unsigned>::max())
    throw config_error(what + ": value is too large");
  return static_cast<unsigned>(u);
}

double to_double(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    try {
      std::size_t pos = 0;
      const double d = std::stod(s, &pos);
      if (pos == s.size()) return d;
    } catch (const std::exception&) {
    }
    throw config_error(what + ": '" + s + "' is not a number");
  }
  throw config_error(what + ": expected a number");
}

// Exact rational from text: "a/b", a decimal like "-0.677" (scaled by a
// power of ten), or a plain integer.
Rational rational_from_text(const std::string& s, const std::string& what) {
  if (s.empty()) throw config_error(what + ": empty rational");
  if (s.find('/') != std::string::npos) {
    try {
      return parse_rational(s);
    } catch (const std::exception&) {
      throw config_error(what + ": '" + s + "' is not a rational");
    }
  }
  const std::size_t dot = s.find('.');
  if (dot == std::string::npos) {
    try {
      return parse_rational(s);
    } catch (const std::exception&) {
      throw config_error(what + ": '" + s + "' is not a rational");
    }
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t frac = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+")
    throw config_error(what + ": '" + s + "' is not a rational");
  for (std::size_t i = 0; i < digits.size(); ++i) {
    const char c = digits[i];
    if (i == 0 && (c == '-' || c == '+')) continue;
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw config_error(what + ": '" + s + "' is not a rational");
  }
  BigInt num(digits, 10);
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
  return Rational(num, den);
}

Rational to_rational(const json& v, const std::string& what) {
  if (v.is_string()) return rational_from_text(v.get<std::string>(), what);
  if (v.is_number_integer() || v.is_number_unsigned())
    return Rational(to_int(v, what));
  throw config_error(what +
                     ": give rationals as exact strings like \"1/2\" or \"0.677\"");
}

std::vector<long long> to_int_array(const json& v, const std::string& what) {
  if (!v.is_array()) throw config_error(what + ": expected an array");
  std::vector<long long> out;
  for (const auto& e : v) out.push_back(to_int(e, what));
  return out;
}

std::vector<double> to_double_array(const json& v, const std::string& what) {
  if (!v.is_array()) throw config_error(what + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(to_double(e, what));
  return out;
}

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key))
      throw config_error("unknown key '" + key + "' in " + where);
  }
}

// ---------------------------------------------------------------------------
// Task table: which parameters each task accepts and requires, and whether
// it needs the triple.

struct TaskRule {
  bool needs_triple = false;
  std::set<std::string> required;
  std::set<std::string> optional;
};

const std::map<std::string, TaskRule>& task_rules() {
  static const std::map<std::string, TaskRule> rules = {
      {"verify", {true, {}, {}}},
      {"cycles", {true, {}, {}}},
      {"spectrum", {true, {"levels"}, {"budget"}}},
      {"eigenvalue", {true, {"q"}, {}}},
      {"scan", {true, {"x"}, {}}},
      {"power-closure", {true, {"primes", "M", "budget"}, {}}},
      {"dp-scan", {true, {"p", "M"}, {}}},
      {"fourier-q", {true, {"levels", "grid"}, {"depth", "budget"}}},
      {"order-stats", {false, {"a", "delta", "x"}, {}}},
      {"pplus-stats", {false, {"x", "delta"}, {}}},
      {"dickman", {false, {"u"}, {"steps"}}},
      {"eh-sum", {false, {"x", "theta"}, {}}},
  };
  return rules;
}

bool param_present(const RunConfig& c, const std::string& k) {
  if (k == "q") return c.q.has_value();
  if (k == "x") return c.x.has_value();
  if (k == "delta") return c.delta.has_value();
  if (k == "depth") return c.depth.has_value();
  if (k == "levels") return c.levels.has_value();
  if (k == "M") return c.big_m.has_value();
  if (k == "budget") return c.budget.has_value();
  if (k == "grid") return c.grid.has_value();
  if (k == "p") return c.p.has_value();
  if (k == "primes") return c.primes.has_value();
  if (k == "a") return c.a.has_value();
  if (k == "u") return c.u.has_value();
  if (k == "steps") return c.steps.has_value();
  if (k == "theta") return c.theta.has_value();
  return false;
}

const std::vector<std::string>& all_param_names() {
  static const std::vector<std::string> names = {
      "q", "x", "delta", "depth", "levels", "M", "budget",
      "grid", "p", "primes", "a", "u", "steps", "theta"};
  return names;
}

// Task known, required parameters present, no foreign parameters, triple
// present when needed.  Shared by the JSON and the flag front ends.
void validate(const RunConfig& cfg) {
  const auto it = task_rules().find(cfg.task);
  if (it == task_rules().end())
    throw config_error("unknown task '" + cfg.task + "'");
  const TaskRule& rule = it->second;
  if (rule.needs_triple && !cfg.triple.has_value())
    throw config_error("task '" + cfg.task + "' requires a triple (N, B, L)");
  for (const std::string& r : rule.required) {
    if (!param_present(cfg, r))
      throw config_error("task '" + cfg.task + "' requires parameter '" + r +
                         "'");
  }
  for (const std::string& name : all_param_names()) {
    if (param_present(cfg, name) && !rule.required.count(name) &&
        !rule.optional.count(name))
      throw config_error("parameter '" + name + "' is not accepted by task '" +
                         cfg.task + "'");
  }
  if (cfg.workers == 0) throw config_error("workers must be at least 1");
}

void set_param(RunConfig& cfg, const std::string& key, const json& val) {
  const std::string what = "params." + key;
  if (key == "q") cfg.q = to_int(val, what);
  else if (key == "x") cfg.x = to_int(val, what);
  else if (key == "delta") cfg.delta = to_rational(val, what);
  else if (key == "depth") cfg.depth = to_unsigned(val, what);
  else if (key == "levels") cfg.levels = to_unsigned(val, what);
  else if (key == "M") cfg.big_m = to_unsigned(val, what);
  else if (key == "budget") cfg.budget = to_uint(val, what);
  else if (key == "grid") cfg.grid = to_double_array(val, what);
  else if (key == "p") cfg.p = to_int(val, what);
  else if (key == "primes") cfg.primes = to_int_array(val, what);
  else if (key == "a") cfg.a = to_uint(val, what);
  else if (key == "u") cfg.u = to_double(val, what);
  else if (key == "steps") cfg.steps = to_unsigned(val, what);
  else if (key == "theta") cfg.theta = to_double(val, what);
  else throw config_error("unknown key '" + key + "' in params");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  const json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw config_error("config is not valid JSON");
  if (!doc.is_object()) throw config_error("config must be a JSON object");
  expect_keys(doc, {"task", "triple", "params", "output", "seed", "workers"},
              "config");

  RunConfig cfg;
  cfg.seed = numtheory::kDefaultSeed;

  if (!doc.contains("task") || !doc["task"].is_string())
    throw config_error("config needs a string 'task'");
  cfg.task = doc["task"].get<std::string>();

  if (doc.contains("triple")) {
    const json& tr = doc["triple"];
    if (!tr.is_object()) throw config_error("triple must be an object");
    expect_keys(tr, {"N", "B", "L"}, "triple");
    if (!tr.contains("N") || !tr.contains("B") || !tr.contains("L"))
      throw config_error("triple needs all of N, B, L");
    TripleSpec spec;
    spec.N = to_int(tr["N"], "triple.N");
    spec.B = to_int_array(tr["B"], "triple.B");
    spec.L = to_int_array(tr["L"], "triple.L");
    cfg.triple = std::move(spec);
  }

  if (doc.contains("params")) {
    const json& params = doc["params"];
    if (!params.is_object()) throw config_error("params must be an object");
    for (const auto& [key, value] : params.items()) set_param(cfg, key, value);
  }

  if (doc.contains("output")) {
    const json& output = doc["output"];
    if (!output.is_object()) throw config_error("output must be an object");
    expect_keys(output, {"csv", "json"}, "output");
    if (output.contains("csv")) {
      if (!output["csv"].is_string())
        throw config_error("output.csv must be a path string");
      cfg.csv_path = output["csv"].get<std::string>();
    }
    if (output.contains("json")) {
      if (!output["json"].is_string())
        throw config_error("output.json must be a path string");
      cfg.json_path = output["json"].get<std::string>();
    }
  }

  if (doc.contains("seed")) cfg.seed = to_uint(doc["seed"], "seed");
  if (doc.contains("workers"))
    cfg.workers = to_unsigned(doc["workers"], "workers");

  validate(cfg);
  return cfg;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  json params = json::object();
  const auto put_int = [&](const char* k, long long v) { params[k] = v; };
  if (cfg.task == "spectrum") {
    put_int("levels", *cfg.levels);
    params["budget"] = cfg.budget.value_or(4'000'000);
  } else if (cfg.task == "eigenvalue") {
    put_int("q", *cfg.q);
  } else if (cfg.task == "scan") {
    put_int("x", *cfg.x);
  } else if (cfg.task == "power-closure") {
    params["primes"] = *cfg.primes;
    put_int("M", *cfg.big_m);
    params["budget"] = *cfg.budget;
  } else if (cfg.task == "dp-scan") {
    put_int("p", *cfg.p);
    put_int("M", *cfg.big_m);
  } else if (cfg.task == "fourier-q") {
    put_int("levels", *cfg.levels);
    put_int("depth", cfg.depth.value_or(30));
    params["budget"] = cfg.budget.value_or(4'000'000);
    params["grid"] = *cfg.grid;
  } else if (cfg.task == "order-stats") {
    params["a"] = *cfg.a;
    params["delta"] = cfg.delta->str();
    put_int("x", *cfg.x);
  } else if (cfg.task == "pplus-stats") {
    put_int("x", *cfg.x);
    params["delta"] = cfg.delta->str();
  } else if (cfg.task == "dickman") {
    params["u"] = *cfg.u;
    put_int("steps", cfg.steps.value_or(4096));
  } else if (cfg.task == "eh-sum") {
    put_int("x", *cfg.x);
    params["theta"] = *cfg.theta;
  }

  json canon;
  canon["task"] = cfg.task;
  canon["seed"] = cfg.seed;
  canon["params"] = std::move(params);
  if (cfg.triple) {
    canon["triple"] =
        json{{"N", cfg.triple->N}, {"B", cfg.triple->B}, {"L", cfg.triple->L}};
  } else {
    canon["triple"] = nullptr;
  }
  return report::fnv1a64(canon.dump());
}

namespace {

// ---------------------------------------------------------------------------
// Dispatch.  Each task fills a JSON result and a CSV document.  Exact
// fields sit at the top level; computed floating-point quantities go under
// "diagnostics" so verdicts and numerics never mix.

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

const TripleSpec& need_triple(const RunConfig& cfg) {
  // validate() already enforced presence for the tasks that reach this.
  return *cfg.triple;
}

HadamardTriple make_triple(const TripleSpec& s) {
  return HadamardTriple(s.N, s.B, s.L);
}

json verdict_json(const spectrum::EigenvalueVerdict& v) {
  json j;
  j["q"] = v.q;
  j["is_eigenvalue"] = v.is_eigenvalue;
  j["methods_agreed"] = v.methods_agreed;
  j["witness"] = v.witness ? json(v.witness->str()) : json(nullptr);
  return j;
}

json levels_json(const std::vector<std::vector<Rational>>& levels) {
  json out = json::array();
  for (const auto& level : levels) {
    json one = json::array();
    for (const auto& pt : level) one.push_back(pt.str());
    out.push_back(std::move(one));
  }
  return out;
}

struct TaskOutput {
  json result;
  std::string csv;  // complete document including the footer
};

TaskOutput run_verify(const RunConfig& cfg, std::uint64_t hash) {
  const TripleSpec& s = need_triple(cfg);
  const TripleVerdict v = verify_triple(s.N, s.B, s.L);
  json result;
  result["is_hadamard"] = v.is_hadamard;
  result["failing_pair"] =
      v.failing_pair
          ? json::array({v.failing_pair->first, v.failing_pair->second})
          : json(nullptr);
  report::CsvWriter csv({"is_hadamard", "failing_b1", "failing_b2"});
  csv.row({fmt_bool(v.is_hadamard),
           v.failing_pair ? std::to_string(v.failing_pair->first) : "",
           v.failing_pair ? std::to_string(v.failing_pair->second) : ""});
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_cycles(const RunConfig& cfg, std::uint64_t hash) {
  const HadamardTriple t = make_triple(need_triple(cfg));
  const auto cycles = spectrum::extreme_cycles(t);
  json arr = json::array();
  report::CsvWriter csv({"cycle", "point", "label"});
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    json points = json::array();
    json labels = json::array();
    for (std::size_t j = 0; j < cycles[i].points.size(); ++j) {
      points.push_back(cycles[i].points[j].str());
      labels.push_back(cycles[i].labels[j]);
      csv.row({std::to_string(i), cycles[i].points[j].str(),
               std::to_string(cycles[i].labels[j])});
    }
    arr.push_back(json{{"points", std::move(points)}, {"labels", std::move(labels)}});
  }
  json result;
  result["cycles"] = std::move(arr);
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_spectrum(const RunConfig& cfg, std::uint64_t hash) {
  const HadamardTriple t = make_triple(need_triple(cfg));
  const auto lv = spectrum::canonical_levels(
      t, *cfg.levels, static_cast<std::size_t>(cfg.budget.value_or(4'000'000)));
  json result;
  result["levels"] = levels_json(lv.levels);
  report::CsvWriter csv({"level", "point"});
  for (std::size_t n = 0; n < lv.levels.size(); ++n)
    for (const auto& pt : lv.levels[n]) csv.row({std::to_string(n), pt.str()});
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_eigenvalue(const RunConfig& cfg, std::uint64_t hash) {
  const HadamardTriple t = make_triple(need_triple(cfg));
  const auto v = spectrum::is_spectral_eigenvalue(t, *cfg.q);
  json result = verdict_json(v);
  report::CsvWriter csv({"q", "is_eigenvalue", "methods_agreed", "witness"});
  csv.row({std::to_string(v.q), fmt_bool(v.is_eigenvalue),
           fmt_bool(v.methods_agreed), v.witness ? v.witness->str() : ""});
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_scan(const RunConfig& cfg, std::uint64_t hash) {
  const HadamardTriple t = make_triple(need_triple(cfg));
  const auto rep = spectrum::eigenvalue_scan(t, *cfg.x, cfg.workers);
  report::CsvWriter csv(
      {"p", "is_eigenvalue", "ord_N_p", "in_A_half", "in_A_0677", "witness"});
  for (const auto& row : rep.rows) {
    csv.row({std::to_string(row.p), fmt_bool(row.is_eigenvalue),
             std::to_string(row.ord), fmt_bool(row.in_a_half),
             fmt_bool(row.in_a_0677), row.witness ? row.witness->str() : ""});
  }
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(json{{"delta", c.delta.str()},
                          {"active", c.active},
                          {"violations", c.violations}});
  }
  json result;
  result["x"] = rep.x;
  result["row_count"] = rep.rows.size();
  result["eigenvalue_count"] = rep.eigenvalue_count;
  result["checks"] = std::move(checks);
  result["diagnostics"] = json{{"eigenvalue_fraction", rep.eigenvalue_fraction}};
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_power_closure(const RunConfig& cfg, std::uint64_t hash) {
  const HadamardTriple t = make_triple(need_triple(cfg));
  if (*cfg.budget > std::numeric_limits<unsigned>::max())
    throw config_error("params.budget: value is too large");
  const auto rep = spectrum::power_closure_check(
      t, *cfg.primes, *cfg.big_m, static_cast<unsigned>(*cfg.budget));
  json result;
  result["primes"] = rep.primes;
  result["product"] = rep.product;
  result["levels"] = levels_json(rep.levels.levels);
  result["stabilization_height"] =
      rep.stabilization_height ? json(*rep.stabilization_height) : json(nullptr);
  result["base"] = rep.base ? verdict_json(*rep.base) : json(nullptr);
  json products = json::array();
  for (const auto& v : rep.products) products.push_back(verdict_json(v));
  result["products"] = std::move(products);
  report::CsvWriter csv({"role", "q", "is_eigenvalue", "witness"});
  if (rep.base)
    csv.row({"base", std::to_string(rep.base->q),
             fmt_bool(rep.base->is_eigenvalue),
             rep.base->witness ? rep.base->witness->str() : ""});
  for (const auto& v : rep.products)
    csv.row({"product", std::to_string(v.q), fmt_bool(v.is_eigenvalue),
             v.witness ? v.witness->str() : ""});
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_dp_scan(const RunConfig& cfg, std::uint64_t hash) {
  const TripleSpec& s = need_triple(cfg);
  std::vector<Rational> digits;
  for (long long b : s.B) digits.emplace_back(b);
  const selfsimilar::DigitSystem sys(s.N, std::move(digits));
  const auto sets = selfsimilar::dp_intersection(sys, *cfg.p, *cfg.big_m);
  json result;
  result["levels"] = levels_json(sets.levels);
  result["stabilization_index"] =
      sets.stabilization_index ? json(*sets.stabilization_index) : json(nullptr);
  report::CsvWriter csv({"m", "point"});
  for (std::size_t m = 0; m < sets.levels.size(); ++m)
    for (const auto& pt : sets.levels[m]) csv.row({std::to_string(m), pt.str()});
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_fourier_q(const RunConfig& cfg, std::uint64_t hash) {
  const HadamardTriple t = make_triple(need_triple(cfg));
  const unsigned n = *cfg.levels;
  const unsigned depth = cfg.depth.value_or(30);
  const auto lv = spectrum::canonical_levels(
      t, n, static_cast<std::size_t>(cfg.budget.value_or(4'000'000)));
  const auto q = fourier::completeness_Q(t, lv.levels[n], *cfg.grid, depth,
                                         cfg.workers);
  json result;
  result["levels"] = n;
  result["depth"] = depth;
  result["spectrum_size"] = lv.levels[n].size();
  result["diagnostics"] = json{{"grid", *cfg.grid}, {"q", q}};
  report::CsvWriter csv({"t0", "Q"});
  for (std::size_t i = 0; i < q.size(); ++i)
    csv.row({fmt_double((*cfg.grid)[i]), fmt_double(q[i])});
  return {std::move(result), csv.finish(hash)};
}

std::uint64_t positive_x(const RunConfig& cfg) {
  if (*cfg.x < 0) throw domain_error("x must be nonnegative");
  return static_cast<std::uint64_t>(*cfg.x);
}

TaskOutput density_output(const numtheory::DensityReport& rep, json extra,
                          std::uint64_t hash,
                          const std::vector<std::string>& extra_header,
                          const std::vector<std::string>& extra_cells) {
  json result = std::move(extra);
  result["x"] = rep.x;
  result["numerator"] = rep.numerator;
  result["denominator"] = rep.denominator;
  result["diagnostics"] = json{{"ratio", rep.ratio}};
  std::vector<std::string> header = extra_header;
  header.insert(header.end(), {"x", "numerator", "denominator", "ratio"});
  std::vector<std::string> cells = extra_cells;
  cells.insert(cells.end(), {std::to_string(rep.x), std::to_string(rep.numerator),
                             std::to_string(rep.denominator),
                             fmt_double(rep.ratio)});
  report::CsvWriter csv(header);
  csv.row(cells);
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_order_stats(const RunConfig& cfg, std::uint64_t hash) {
  const auto rep =
      numtheory::order_density(*cfg.a, *cfg.delta, positive_x(cfg), cfg.seed);
  return density_output(rep, json{{"a", *cfg.a}, {"delta", cfg.delta->str()}},
                        hash, {"a", "delta"},
                        {std::to_string(*cfg.a), cfg.delta->str()});
}

TaskOutput run_pplus_stats(const RunConfig& cfg, std::uint64_t hash) {
  const auto rep = numtheory::pplus_density(positive_x(cfg), *cfg.delta, cfg.seed);
  return density_output(rep, json{{"delta", cfg.delta->str()}}, hash, {"delta"},
                        {cfg.delta->str()});
}

TaskOutput run_dickman(const RunConfig& cfg, std::uint64_t hash) {
  const unsigned steps = cfg.steps.value_or(4096);
  const double rho = numtheory::dickman(*cfg.u, steps);
  json result;
  result["u"] = *cfg.u;
  result["steps_per_unit"] = steps;
  result["diagnostics"] = json{{"rho", rho}};
  report::CsvWriter csv({"u", "steps_per_unit", "rho"});
  csv.row({fmt_double(*cfg.u), std::to_string(steps), fmt_double(rho)});
  return {std::move(result), csv.finish(hash)};
}

TaskOutput run_eh_sum(const RunConfig& cfg, std::uint64_t hash) {
  const double d =
      numtheory::eh_discrepancy(positive_x(cfg), *cfg.theta, cfg.workers);
  json result;
  result["x"] = *cfg.x;
  result["theta"] = *cfg.theta;
  result["diagnostics"] = json{{"discrepancy", d}};
  report::CsvWriter csv({"x", "theta", "discrepancy"});
  csv.row({std::to_string(*cfg.x), fmt_double(*cfg.theta), fmt_double(d)});
  return {std::move(result), csv.finish(hash)};
}

}  // namespace

void run(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  const std::uint64_t hash = config_hash(cfg);
  TaskOutput res;
  if (cfg.task == "verify") res = run_verify(cfg, hash);
  else if (cfg.task == "cycles") res = run_cycles(cfg, hash);
  else if (cfg.task == "spectrum") res = run_spectrum(cfg, hash);
  else if (cfg.task == "eigenvalue") res = run_eigenvalue(cfg, hash);
  else if (cfg.task == "scan") res = run_scan(cfg, hash);
  else if (cfg.task == "power-closure") res = run_power_closure(cfg, hash);
  else if (cfg.task == "dp-scan") res = run_dp_scan(cfg, hash);
  else if (cfg.task == "fourier-q") res = run_fourier_q(cfg, hash);
  else if (cfg.task == "order-stats") res = run_order_stats(cfg, hash);
  else if (cfg.task == "pplus-stats") res = run_pplus_stats(cfg, hash);
  else if (cfg.task == "dickman") res = run_dickman(cfg, hash);
  else if (cfg.task == "eh-sum") res = run_eh_sum(cfg, hash);
  else throw config_error("unknown task '" + cfg.task + "'");

  res.result["config_hash"] = report::hash_hex(hash);
  const std::string text = res.result.dump(2) + "\n";
  if (cfg.json_path) report::write_text_file(*cfg.json_path, text);
  if (cfg.csv_path) report::write_text_file(*cfg.csv_path, res.csv);
  out << text;
}

namespace {

std::vector<long long> parse_ll_list(const std::string& s,
                                     const std::string& what) {
  std::vector<long long> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, ',')) {
    if (cur.empty()) throw config_error(what + ": empty entry in list");
    out.push_back(parse_ll(cur, what));
  }
  if (out.empty()) throw config_error(what + ": empty list");
  return out;
}

std::vector<double> read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open grid file " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  std::replace(text.begin(), text.end(), ',', ' ');
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    try {
      std::size_t pos = 0;
      const double d = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      grid.push_back(d);
    } catch (const std::exception&) {
      throw config_error("grid file " + path + ": '" + tok +
                         "' is not a number");
    }
  }
  return grid;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "canspec: exact spectra of Hadamard triples and their integer "
      "scalings, with number-theoretic scan utilities"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags remain valid after a subcommand name

  std::string config_path, out_dir, csv_path, json_path;
  std::string b_list, l_list, delta_text, grid_file, primes_list;
  long long n_value = 0, q_value = 0, x_value = 0, p_value = 0;
  std::uint64_t seed = numtheory::kDefaultSeed, a_value = 0, budget = 0;
  unsigned workers = 1, levels = 0, depth = 30, big_m = 0, steps = 4096;
  double u_value = 0.0, theta = 0.0;

  app.add_option("--config", config_path,
                 "JSON run config (exclusive with subcommands)");
  app.add_option("--out", out_dir, "directory for <task>.csv and <task>.json");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized scans");
  auto* workers_opt =
      app.add_option("--workers", workers, "worker threads for parallel tasks");
  auto* csv_opt = app.add_option("--csv", csv_path, "CSV report path");
  auto* json_opt = app.add_option("--json", json_path, "JSON report path");
  auto* n_opt = app.add_option("--N", n_value, "triple base N");
  auto* b_opt = app.add_option("--B", b_list, "triple digits B, comma-separated");
  auto* l_opt = app.add_option("--L", l_list, "triple digits L, comma-separated");

  auto* sc_verify =
      app.add_subcommand("verify", "check unitarity of the triple data");
  auto* sc_cycles =
      app.add_subcommand("cycles", "extreme cycles of the dual dynamics");
  auto* sc_spectrum =
      app.add_subcommand("spectrum", "canonical spectrum level sets");
  sc_spectrum->add_option("--levels", levels, "number of levels")->required();
  sc_spectrum->add_option("--budget", budget, "level size budget");
  auto* sc_eigen = app.add_subcommand(
      "eigenvalue", "exact decision whether q scales the spectrum to a spectrum");
  sc_eigen->add_option("--q", q_value, "integer scaling factor")->required();
  auto* sc_scan = app.add_subcommand(
      "scan", "eigenvalue verdicts and order statistics for primes up to x");
  sc_scan->add_option("--x", x_value, "scan bound")->required();
  auto* sc_power = app.add_subcommand(
      "power-closure", "level stabilization and prime-power product verdicts");
  sc_power->add_option("--primes", primes_list, "comma-separated primes")
      ->required();
  sc_power->add_option("--M", big_m, "level scan height")->required();
  sc_power->add_option("--budget", budget, "total exponent budget")->required();
  auto* sc_dp = app.add_subcommand(
      "dp-scan", "attractor points first visible at denominator p^m w");
  sc_dp->add_option("--p", p_value, "denominator base, coprime to N")
      ->required();
  sc_dp->add_option("--M", big_m, "largest exponent scanned")->required();
  auto* sc_fourier = app.add_subcommand(
      "fourier-q", "completeness functional over a grid of base points");
  sc_fourier->add_option("--levels", levels, "canonical level used")->required();
  sc_fourier->add_option("--depth", depth, "transform truncation depth");
  sc_fourier->add_option("--grid", grid_file, "file of grid points")->required();
  sc_fourier->add_option("--budget", budget, "level size budget");
  auto* sc_order = app.add_subcommand(
      "order-stats", "density of primes with large multiplicative order");
  sc_order->add_option("--a", a_value, "base")->required();
  sc_order->add_option("--delta", delta_text, "order exponent threshold")
      ->required();
  sc_order->add_option("--x", x_value, "prime bound")->required();
  auto* sc_pplus = app.add_subcommand(
      "pplus-stats", "density of primes with p-1 having a large prime factor");
  sc_pplus->add_option("--x", x_value, "prime bound")->required();
  sc_pplus->add_option("--delta", delta_text, "threshold exponent")->required();
  auto* sc_dickman = app.add_subcommand("dickman", "Dickman rho at u");
  sc_dickman->add_option("--u", u_value, "argument")->required();
  sc_dickman->add_option("--steps", steps, "quadrature steps per unit");
  auto* sc_eh = app.add_subcommand(
      "eh-sum", "discrepancy sum over moduli up to x^theta");
  sc_eh->add_option("--x", x_value, "prime bound")->required();
  sc_eh->add_option("--theta", theta, "moduli exponent")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    cfg.seed = numtheory::kDefaultSeed;
    const auto subs = app.get_subcommands();

    if (!config_path.empty()) {
      if (!subs.empty())
        throw config_error("give either --config or a subcommand, not both");
      std::ifstream in(config_path);
      if (!in) throw config_error("cannot open config file " + config_path);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      cfg = parse_config(text);
      if (seed_opt->count()) cfg.seed = seed;
      if (workers_opt->count()) cfg.workers = workers;
    } else {
      if (subs.empty())
        throw config_error("give a subcommand or --config (see --help)");
      CLI::App* sub = subs.front();
      cfg.task = sub->get_name();
      if (n_opt->count() || b_opt->count() || l_opt->count()) {
        if (!(n_opt->count() && b_opt->count() && l_opt->count()))
          throw config_error("give all of --N, --B, --L or none");
        TripleSpec spec;
        spec.N = n_value;
        spec.B = parse_ll_list(b_list, "--B");
        spec.L = parse_ll_list(l_list, "--L");
        cfg.triple = std::move(spec);
      }
      cfg.seed = seed;
      cfg.workers = workers;

      if (sub == sc_spectrum) {
        cfg.levels = levels;
        if (sub->count("--budget")) cfg.budget = budget;
      } else if (sub == sc_eigen) {
        cfg.q = q_value;
      } else if (sub == sc_scan) {
        cfg.x = x_value;
      } else if (sub == sc_power) {
        cfg.primes = parse_ll_list(primes_list, "--primes");
        cfg.big_m = big_m;
        cfg.budget = budget;
      } else if (sub == sc_dp) {
        cfg.p = p_value;
        cfg.big_m = big_m;
      } else if (sub == sc_fourier) {
        cfg.levels = levels;
        if (sub->count("--depth")) cfg.depth = depth;
        if (sub->count("--budget")) cfg.budget = budget;
        cfg.grid = read_grid_file(grid_file);
      } else if (sub == sc_order) {
        cfg.a = a_value;
        cfg.delta = rational_from_text(delta_text, "--delta");
        cfg.x = x_value;
      } else if (sub == sc_pplus) {
        cfg.x = x_value;
        cfg.delta = rational_from_text(delta_text, "--delta");
      } else if (sub == sc_dickman) {
        cfg.u = u_value;
        if (sub->count("--steps")) cfg.steps = steps;
      } else if (sub == sc_eh) {
        cfg.x = x_value;
        cfg.theta = theta;
      } else if (sub != sc_verify && sub != sc_cycles) {
        throw config_error("unknown subcommand");
      }
    }

    if (csv_opt->count()) cfg.csv_path = csv_path;
    if (json_opt->count()) cfg.json_path = json_path;
    if (!out_dir.empty()) {
      if (!cfg.csv_path)
        cfg.csv_path = (std::filesystem::path(out_dir) / (cfg.task + ".csv")).string();
      if (!cfg.json_path)
        cfg.json_path = (std::filesystem::path(out_dir) / (cfg.task + ".json")).string();
    }

    run(cfg, std::cout);
    return 0;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace canspec::cli
