#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "replicax/harness.hpp"

namespace replicax {

// Config file syntax error (bad section, unknown key, malformed number).
// Distinct from std::invalid_argument, which signals a well-formed file with
// invalid semantics; the CLI maps the two to different exit codes.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

struct OutputOptions {
  std::string directory;     // empty: resolved by the caller
  std::int64_t stride = 0;   // 0: automatic (max(1, N/1000))
  bool csv = true;
  bool json = true;
};

// A fully parsed experiment description: the harness spec plus output
// options and a normalized echo of every (section, key, value) for the run
// manifest.
struct ParsedConfig {
  ExperimentSpec spec;
  OutputOptions output;
  std::string objective_kind;
  int objective_dim = 0;
  std::vector<std::array<std::string, 3>> entries;
};

// Parses the section/key=value experiment format:
//
//   [objective]
//   kind = mixture25          # mixture25 kde25 mixture kde rastrigin
//                             # griewank quadratic
//   weight_seed = 1           # or per_replication (mixture25/kde25)
//   bandwidth = 0.01          # kde kinds
//   dim = 2                   # rastrigin/griewank/quadratic
//   component = w | m0,m1 | c0,c1   # custom mixture/kde; repeatable
//   box = l0,l1 | u0,u1             # custom mixture/kde
//
//   [run]                     # RunConfig fields
//   mode = gdxld
//   step_size = 0.1
//   temperature = 1
//   swap_margin = 0.05
//   iterations = 1000
//   batch_size = 1000
//   exchange_bound = 5
//   x0 = 0, 0                 # coordinates, or "uniform"
//   y0 = 1, 1
//
//   [experiment]
//   replications = 100
//   seed = 42
//   success_tol = 1e-3        # Euclidean ball criterion (default)
//   success_f_gap = 0.01      # value-gap criterion instead of the ball
//   sweep.temperature = 0.5, 1, 2.5
//
//   [output]
//   directory = out/fig2
//   stride = 10
//   formats = csv, json
//
// Unknown sections or keys raise ParseError; semantic violations raise
// std::invalid_argument.
ParsedConfig parse_config_text(const std::string& text);

// Reads and parses a file. A missing/unreadable file raises
// std::system_error; syntax and semantics as in parse_config_text.
ParsedConfig load_config_file(const std::string& path);

}  // namespace replicax
