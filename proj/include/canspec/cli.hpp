#pragma once

// Command-line front end: strict JSON run configs, dispatch to the library
// modules, CSV/JSON report emission, and exit-status mapping.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "canspec/rational.hpp"

namespace canspec::cli {

// The (N, B, L) data as given; validated by the task that uses it.
struct TripleSpec {
  long long N = 0;
  std::vector<long long> B;
  std::vector<long long> L;
};

// A fully parsed run: one task, its parameters, and output routing.  Only
// the parameters the task accepts may be set; parsing is strict and
// rejects unknown keys.  Integers may be given as JSON numbers or as
// decimal strings (exactness for values past the double-safe range);
// rationals are strings like "1/2", "0.677", or "3".
struct RunConfig {
  std::string task;
  std::optional<TripleSpec> triple;

  std::optional<long long> q;           // eigenvalue
  std::optional<long long> x;           // scan / order-stats / pplus-stats / eh-sum
  std::optional<Rational> delta;        // order-stats / pplus-stats
  std::optional<unsigned> depth;        // fourier-q (default 30)
  std::optional<unsigned> levels;       // spectrum / fourier-q
  std::optional<unsigned> big_m;        // power-closure / dp-scan ("M")
  std::optional<std::uint64_t> budget;  // spectrum (size), power-closure (exponent)
  std::optional<std::vector<double>> grid;      // fourier-q
  std::optional<long long> p;                   // dp-scan
  std::optional<std::vector<long long>> primes; // power-closure
  std::optional<std::uint64_t> a;       // order-stats
  std::optional<double> u;              // dickman
  std::optional<unsigned> steps;        // dickman resolution
  std::optional<double> theta;          // eh-sum

  std::uint64_t seed;                   // defaulted in parse/construction
  unsigned workers = 1;
  std::optional<std::string> csv_path;
  std::optional<std::string> json_path;
};

// Parses and validates a JSON config document: known task, required
// parameters present, no unknown keys anywhere, triple present for the
// tasks that need one.  Throws config_error with the offending key or
// parameter named.
RunConfig parse_config(const std::string& json_text);

// Hash stamped into every report produced by this config: FNV-1a over the
// canonical serialization of the resolved computation (task, triple,
// parameters with defaults applied, seed).  Worker count and output paths
// do not participate, so execution strategy never changes report bytes.
std::uint64_t config_hash(const RunConfig& cfg);

// Runs the task, writes any requested CSV/JSON reports, and prints the
// JSON result to `out`.  Throws domain_error / config_error /
// resource_error; exit-status mapping lives in cli_main.
void run(const RunConfig& cfg, std::ostream& out);

// Full command-line entry point (subcommands or --config).  Returns the
// process exit status: 0 success, 1 domain errors, 2 config or resource
// errors.
int cli_main(int argc, const char* const* argv);

}  // namespace canspec::cli
