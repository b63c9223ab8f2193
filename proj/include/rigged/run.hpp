#pragma once

// Configuration and dispatch for the command-line runner. A run builds one
// model (from CSV inputs, an explicit weight ladder or a built-in example),
// executes the sections its command asks for and assembles a report.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rigged/report.hpp"
#include "rigged/sequence.hpp"

namespace rigged {

enum class Command {
  check_biorthogonal,
  frame_report,
  bessel,
  riesz_fischer,
  strictness,
  reconstruct,
  example,
  pseudo_hermitian,
  full_report,
};

const char* to_string(Command c) noexcept;
Command parse_command(const std::string& s);

struct ModelSpec {
  std::optional<std::size_t> dim;
  std::vector<std::size_t> ladder;
  std::optional<std::vector<double>> weights;
  std::string weight_rule = "ones"; // ones | linear | power:<a> | graph-norm
  int levels = 1;
};

struct InputSpec {
  std::string xi, zeta, t, f, psi; // CSV paths, empty when absent
};

struct OutputSpec {
  std::string path; // empty: stdout
  std::string format = "json";
};

struct RunConfig {
  Command command = Command::full_report;
  ModelSpec model;
  InputSpec inputs;
  std::string example;     // hermite | sobolev | number-op | schwartz
  std::size_t count = 10;  // M for the function-space examples
  std::optional<std::uint64_t> seed;
  Tolerances tolerances;
  OutputSpec output;
  std::size_t samples = 1000; // random draws for sampled probes
  std::string lambda_rule = "index";     // index | power:<a> | constant:<c>
  std::string t_rule = "diag-power:1";   // identity | diag-power:<a>
  std::optional<std::uint64_t> psi_seed;
  bool pseudo_hermitian = false;         // set when any pair key is given
  std::string f_rule = "geometric:0.5";  // ones | linear | geometric:<r>
  bool timing = true;
};

/// Relative input paths are resolved against `base_dir`. Unknown keys are
/// rejected.
RunConfig parse_config(const Json& j, const std::string& base_dir = {});
RunConfig load_config(const std::string& path);

/// Canonical form used for hashing: every field except output and timing.
Json canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

/// Applies `key=value` to the tolerance set; throws ValidationError on an
/// unknown key or a non-positive value.
void apply_tolerance_override(Tolerances& tol, const std::string& assignment);

std::vector<std::size_t> parse_ladder(const std::string& text);

DiagnosticsReport run(const RunConfig& cfg);

} // namespace rigged
