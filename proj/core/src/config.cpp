#include "cavbec/config.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cavbec {

namespace {

using njson = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const char* type_name(const njson& v) {
  switch (v.type()) {
    case njson::value_t::null: return "null";
    case njson::value_t::boolean: return "a boolean";
    case njson::value_t::string: return "a string";
    case njson::value_t::array: return "an array";
    case njson::value_t::object: return "an object";
    case njson::value_t::number_integer:
    case njson::value_t::number_unsigned:
    case njson::value_t::number_float: return "a number";
    default: return "an unsupported value";
  }
}

// Typed key extraction with consumed-key tracking; leftovers are rejected.
class Object {
 public:
  Object(const njson& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, std::string("expected an object, got ") + type_name(j_));
  }

  std::string key_path(const char* key) const { return path_ + "." + key; }

  const njson* get(const char* key) {
    used_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double num(const char* key, double def) {
    const njson* v = get(key);
    if (!v) return def;
    if (!v->is_number()) fail(key_path(key), std::string("expected a number, got ") + type_name(*v));
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(key_path(key), "must be finite");
    return d;
  }

  std::optional<double> opt_num(const char* key) {
    const njson* v = get(key);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number()) fail(key_path(key), std::string("expected a number, got ") + type_name(*v));
    const double d = v->get<double>();
    if (!std::isfinite(d)) fail(key_path(key), "must be finite");
    return d;
  }

  int integer(const char* key, int def) {
    const njson* v = get(key);
    if (!v) return def;
    if (!v->is_number_integer())
      fail(key_path(key), std::string("expected an integer, got ") + type_name(*v));
    const int64_t d = v->get<int64_t>();
    if (d < -(1ll << 31) || d >= (1ll << 31)) fail(key_path(key), "integer out of range");
    return static_cast<int>(d);
  }

  uint64_t seed(const char* key, uint64_t def) {
    const njson* v = get(key);
    if (!v) return def;
    if (v->is_number_unsigned()) return v->get<uint64_t>();
    if (v->is_number_integer() && v->get<int64_t>() >= 0)
      return static_cast<uint64_t>(v->get<int64_t>());
    fail(key_path(key), "expected a non-negative integer");
  }

  bool boolean(const char* key, bool def) {
    const njson* v = get(key);
    if (!v) return def;
    if (!v->is_boolean())
      fail(key_path(key), std::string("expected a boolean, got ") + type_name(*v));
    return v->get<bool>();
  }

  std::string choice(const char* key, const char* def, std::initializer_list<const char*> allowed) {
    const njson* v = get(key);
    std::string s = def;
    if (v) {
      if (!v->is_string())
        fail(key_path(key), std::string("expected a string, got ") + type_name(*v));
      s = v->get<std::string>();
    }
    for (const char* a : allowed)
      if (s == a) return s;
    std::string opts;
    for (const char* a : allowed) {
      if (!opts.empty()) opts += ", ";
      opts += a;
    }
    fail(key_path(key), "must be one of: " + opts);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail(path_ + "." + it.key(), "unknown key");
  }

 private:
  const njson& j_;
  std::string path_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) fail(path, what);
}

const char* scheme_name(Scheme s) {
  return s == Scheme::milstein ? "milstein" : "exact_split";
}

}  // namespace

RunConfig parse_config(const std::string& document) {
  njson j;
  try {
    j = njson::parse(document);
  } catch (const njson::parse_error& e) {
    throw ConfigError(std::string("$: not well-formed JSON (") + e.what() + ")");
  }

  Object o(j, "$");
  RunConfig c;

  // the physics of a run is never implicit: the reference interaction,
  // measurement rate, wavenumber, and resolution must be stated
  {
    std::string missing;
    for (const char* key : {"C", "gamma_m", "k", "n_points"}) {
      if (!j.is_object() || !j.contains(key)) {
        if (!missing.empty()) missing += ", ";
        missing += key;
      }
    }
    if (!missing.empty()) throw ConfigError("$: missing required keys: " + missing);
  }

  c.params.n_atoms = o.num("N", c.params.n_atoms);
  c.params.interaction_c = o.num("C", c.params.interaction_c);
  c.params.cavity_k = o.num("k", c.params.cavity_k);
  c.params.cavity_parity =
      o.choice("cavity_parity", "sine", {"sine", "cosine"}) == "sine" ? CavityParity::sine
                                                                     : CavityParity::cosine;
  c.params.pump_geometry =
      o.choice("geometry", "transverse", {"transverse", "axial"}) == "transverse"
          ? PumpGeometry::transverse
          : PumpGeometry::axial;
  c.params.pump_profile =
      o.choice("pump_profile", "uniform", {"uniform", "gaussian"}) == "uniform"
          ? PumpProfileKind::uniform
          : PumpProfileKind::gaussian;
  c.params.pump_width = o.num("pump_width", c.params.pump_width);
  c.params.coupling_rate = o.num("gamma_m", c.params.coupling_rate);
  c.params.lightshift_s = o.num("lightshift_s", c.params.lightshift_s);
  c.params.kappa_ratio = o.num("kappa_ratio", c.params.kappa_ratio);
  c.params.temperature = o.num("temperature", c.params.temperature);

  if (const njson* rawv = o.get("raw")) {
    Object r(*rawv, "$.raw");
    RawCavityParams& raw = c.params.raw;
    raw.g0 = r.opt_num("g0");
    raw.h0 = r.opt_num("h0");
    raw.kappa = r.opt_num("kappa");
    raw.delta_pa = r.opt_num("delta_pa");
    raw.delta_pc = r.opt_num("delta_pc");
    raw.eta = r.opt_num("eta");
    raw.omega_perp = r.opt_num("omega_perp");
    raw.a_s = r.opt_num("a_s");
    r.finish();
    if (raw.kappa) require(*raw.kappa > 0.0, "$.raw.kappa", "must be > 0");
    if (raw.delta_pa) require(*raw.delta_pa != 0.0, "$.raw.delta_pa", "must be nonzero");
  }

  c.n_points = o.integer("n_points", c.n_points);
  c.half_width = o.num("half_width", c.half_width);
  c.n_modes = o.integer("n_modes", c.n_modes);

  c.sampler.temperature = c.params.temperature;
  c.sampler.mode_cutoff = o.integer("mode_cutoff", c.sampler.mode_cutoff);
  c.sampler.condensate_number = o.num("condensate_number", c.sampler.condensate_number);
  c.sampler.fluctuations_enabled = o.boolean("fluctuations", c.sampler.fluctuations_enabled);

  c.integrator.dt = o.num("dt", c.integrator.dt);
  c.integrator.scheme = o.choice("scheme", "milstein", {"milstein", "exact_split"}) == "milstein"
                            ? Scheme::milstein
                            : Scheme::exact_split;
  c.integrator.t_final = o.num("t_final", c.integrator.t_final);
  c.integrator.snapshot_stride = o.integer("snapshot_stride", c.integrator.snapshot_stride);
  c.integrator.observable_stride = o.integer("observable_stride", c.integrator.observable_stride);
  c.integrator.record_snapshots = o.boolean("record_snapshots", c.integrator.record_snapshots);
  c.integrator.probe_x = o.num("probe_x", c.integrator.probe_x);
  c.integrator.probe_xp = o.num("probe_xp", c.integrator.probe_xp);

  c.ensemble.n_trajectories = o.integer("n_trajectories", c.ensemble.n_trajectories);
  c.ensemble.base_seed = o.seed("base_seed", c.ensemble.base_seed);
  c.ensemble.worker_count = o.integer("worker_count", c.ensemble.worker_count);
  c.ensemble.record_mode_pops = o.boolean("record_mode_pops", c.ensemble.record_mode_pops);

  if (const njson* v = o.get("output_dir")) {
    if (!v->is_string()) fail("$.output_dir", std::string("expected a string, got ") + type_name(*v));
    c.output_dir = v->get<std::string>();
    require(!c.output_dir.empty(), "$.output_dir", "must not be empty");
  }

  o.finish();

  require(c.params.n_atoms > 0.0, "$.N", "must be > 0");
  require(c.params.interaction_c >= 0.0, "$.C", "must be >= 0");
  require(c.params.cavity_k > 0.0, "$.k", "must be > 0");
  require(c.params.coupling_rate >= 0.0, "$.gamma_m", "must be >= 0");
  require(c.params.kappa_ratio >= 0.0, "$.kappa_ratio", "must be >= 0");
  require(c.params.temperature >= 0.0, "$.temperature", "must be >= 0");
  if (c.params.pump_profile == PumpProfileKind::gaussian)
    require(c.params.pump_width > 0.0, "$.pump_width", "must be > 0 for a gaussian pump");
  else
    require(c.params.pump_width >= 0.0, "$.pump_width", "must be >= 0");
  if (c.params.pump_geometry == PumpGeometry::axial)
    require(c.params.raw.has_axial_set(), "$.geometry",
            "axial geometry requires raw.g0, raw.eta, raw.kappa and raw.delta_pa");

  require(c.n_points >= 8 && c.n_points % 2 == 0, "$.n_points", "must be an even integer >= 8");
  require(c.half_width > 0.0, "$.half_width", "must be > 0");
  require(c.n_modes >= 1, "$.n_modes", "must be >= 1");

  require(c.sampler.mode_cutoff >= -1, "$.mode_cutoff", "must be >= -1 (-1 means all modes)");
  require(c.sampler.condensate_number == -1.0 || c.sampler.condensate_number >= 0.0,
          "$.condensate_number", "must be >= 0 (-1 means the atom number N)");

  require(c.integrator.dt > 0.0, "$.dt", "must be > 0");
  require(c.integrator.t_final >= c.integrator.dt, "$.t_final", "must be >= dt");
  require(c.integrator.snapshot_stride >= 1, "$.snapshot_stride", "must be >= 1");
  require(c.integrator.observable_stride >= 1, "$.observable_stride", "must be >= 1");
  const double dx = 2.0 * c.half_width / c.n_points;
  auto on_grid = [&](double pos) {
    const long i = std::lround((pos + c.half_width) / dx);
    return i >= 0 && i < c.n_points;
  };
  require(on_grid(c.integrator.probe_x), "$.probe_x", "must lie inside [-half_width, half_width)");
  require(on_grid(c.integrator.probe_xp), "$.probe_xp", "must lie inside [-half_width, half_width)");

  require(c.ensemble.n_trajectories >= 1, "$.n_trajectories", "must be >= 1");
  require(c.ensemble.worker_count >= 0, "$.worker_count", "must be >= 0 (0 means automatic)");

  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("$: ") + e.what());
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("$: cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string config_echo(const RunConfig& c) {
  njson j;
  j["N"] = c.params.n_atoms;
  j["C"] = c.params.interaction_c;
  j["k"] = c.params.cavity_k;
  j["cavity_parity"] = to_string(c.params.cavity_parity);
  j["geometry"] = to_string(c.params.pump_geometry);
  j["pump_profile"] = to_string(c.params.pump_profile);
  j["pump_width"] = c.params.pump_width;
  j["gamma_m"] = c.params.coupling_rate;
  j["lightshift_s"] = c.params.lightshift_s;
  j["kappa_ratio"] = c.params.kappa_ratio;
  j["temperature"] = c.params.temperature;
  njson raw = njson::object();
  auto put = [&raw](const char* key, const std::optional<double>& v) {
    if (v) raw[key] = *v;
  };
  put("g0", c.params.raw.g0);
  put("h0", c.params.raw.h0);
  put("kappa", c.params.raw.kappa);
  put("delta_pa", c.params.raw.delta_pa);
  put("delta_pc", c.params.raw.delta_pc);
  put("eta", c.params.raw.eta);
  put("omega_perp", c.params.raw.omega_perp);
  put("a_s", c.params.raw.a_s);
  j["raw"] = raw;

  j["n_points"] = c.n_points;
  j["half_width"] = c.half_width;
  j["n_modes"] = c.n_modes;

  j["mode_cutoff"] = c.sampler.mode_cutoff;
  j["condensate_number"] = c.sampler.condensate_number;
  j["fluctuations"] = c.sampler.fluctuations_enabled;

  j["dt"] = c.integrator.dt;
  j["scheme"] = scheme_name(c.integrator.scheme);
  j["t_final"] = c.integrator.t_final;
  j["snapshot_stride"] = c.integrator.snapshot_stride;
  j["observable_stride"] = c.integrator.observable_stride;
  j["record_snapshots"] = c.integrator.record_snapshots;
  j["probe_x"] = c.integrator.probe_x;
  j["probe_xp"] = c.integrator.probe_xp;

  j["n_trajectories"] = c.ensemble.n_trajectories;
  j["base_seed"] = c.ensemble.base_seed;
  j["record_mode_pops"] = c.ensemble.record_mode_pops;

  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

std::string manifest_json(const RunConfig& config,
                          const std::vector<std::pair<std::string, uint64_t>>& seeds) {
  njson m;
  m["format_version"] = kManifestFormatVersion;
  m["config"] = njson::parse(config_echo(config));
  njson s = njson::object();
  for (const auto& [name, value] : seeds) s[name] = value;
  m["seeds"] = s;
  return m.dump(2);
}

}  // namespace cavbec
