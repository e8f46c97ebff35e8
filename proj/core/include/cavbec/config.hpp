#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cavbec/ensemble.hpp"
#include "cavbec/integrator.hpp"
#include "cavbec/params.hpp"
#include "cavbec/sampler.hpp"

namespace cavbec {

// Schema violation; the message starts with the JSON path of the offending
// key (e.g. "$.dt: must be > 0"). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fully resolved run configuration: the flat JSON document with every
// default filled in. Key names follow the document schema (see README);
// the minimal document {"C":64,"gamma_m":0.042,"k":1.0,"n_points":1024}
// resolves against the defaults below.
struct RunConfig {
  SystemParams params;
  int n_points = 1024;
  double half_width = 16.0;  // grid spans [-half_width, half_width)
  int n_modes = 12;          // quasiparticle modes to solve for
  SamplerConfig sampler;
  IntegratorConfig integrator;
  EnsembleConfig ensemble;
  std::string output_dir = "out";
};

inline constexpr int kManifestFormatVersion = 1;

// Parses and validates a JSON document. The keys C, gamma_m, k, and
// n_points are required; unknown keys are rejected; every violation throws
// ConfigError with JSON-path context.
RunConfig parse_config(const std::string& document);
RunConfig load_config_file(const std::string& path);

// The configuration serialized back to its document form with all defaults
// explicit (keys sorted; worker_count is runtime-only and not echoed).
// parse_config(config_echo(c)) reproduces c.
std::string config_echo(const RunConfig& config);

// manifest.json body: format version, the config echo, and the named seed
// streams of the run. No timestamps, so identical runs produce identical
// manifests.
std::string manifest_json(const RunConfig& config,
                          const std::vector<std::pair<std::string, uint64_t>>& seeds);

}  // namespace cavbec
