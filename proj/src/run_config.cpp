#include "tvjko/run_config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace tvjko {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<RunMode, const char*>, 7> kModes{{
    {RunMode::step, "step"},
    {RunMode::flow, "flow"},
    {RunMode::radial_step, "radial_step"},
    {RunMode::radial_flow, "radial_flow"},
    {RunMode::validate_uniform, "validate_uniform"},
    {RunMode::validate_hat, "validate_hat"},
    {RunMode::oracle_check, "oracle_check"},
}};

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw std::invalid_argument("config: '" + (path.empty() ? "<root>" : path) + "' must be an object");
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  require_object(j, path);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw std::invalid_argument("config: unknown key '" + join(path, key) + "'");
    }
  }
}

template <typename T>
T read(const json& j, const std::string& key, const std::string& path) {
  const json& v = j.at(key);
  const std::string where = join(path, key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw std::invalid_argument("config: '" + where + "' must be a boolean");
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw std::invalid_argument("config: '" + where + "' must be a string");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw std::invalid_argument("config: '" + where + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_unsigned()) return v.get<T>();
      if (v.get<long long>() < 0) throw std::invalid_argument("config: '" + where + "' must be nonnegative");
    }
  } else {
    if (!v.is_number()) throw std::invalid_argument("config: '" + where + "' must be a number");
  }
  return v.get<T>();
}

template <typename T>
void read_if(const json& j, const char* key, const std::string& path, T& out) {
  if (j.contains(key)) out = read<T>(j, key, path);
}

template <typename T>
void read_if(const json& j, const char* key, const std::string& path, std::optional<T>& out) {
  if (j.contains(key)) out = read<T>(j, key, path);
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("config: '") + name + "' must be positive");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("config: '") + name + "' must be nonnegative");
  }
}

}  // namespace

std::string to_string(RunMode mode) {
  for (const auto& [m, name] : kModes) {
    if (m == mode) return name;
  }
  return "unknown";
}

RunMode parse_mode(const std::string& name) {
  for (const auto& [m, n] : kModes) {
    if (name == n) return m;
  }
  throw std::invalid_argument("config: unknown mode '" + name + "'");
}

RunConfig parse_run_config(const json& j) {
  check_keys(j, "", {"mode", "grid", "tau", "horizon", "entropy_h", "solver", "io", "radial", "seed", "alpha0",
                     "oracle"});
  RunConfig c;
  if (!j.contains("mode")) throw std::invalid_argument("config: missing 'mode'");
  c.mode = parse_mode(read<std::string>(j, "mode", ""));
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    check_keys(g, "grid", {"left", "right", "n_cells"});
    GridConfig gc;
    read_if(g, "left", "grid", gc.left);
    read_if(g, "right", "grid", gc.right);
    read_if(g, "n_cells", "grid", gc.n_cells);
    c.grid = gc;
  }
  read_if(j, "tau", "", c.tau);
  read_if(j, "horizon", "", c.horizon);
  read_if(j, "entropy_h", "", c.entropy_h);
  read_if(j, "seed", "", c.seed);
  read_if(j, "alpha0", "", c.alpha0);
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    check_keys(s, "solver", {"max_outer_iter", "el_tolerance", "step_rule", "sigma", "accelerate", "min_density_floor"});
    read_if(s, "max_outer_iter", "solver", c.solver.max_outer_iter);
    read_if(s, "el_tolerance", "solver", c.solver.el_tolerance);
    read_if(s, "step_rule", "solver", c.solver.step_rule);
    read_if(s, "sigma", "solver", c.solver.sigma);
    read_if(s, "accelerate", "solver", c.solver.accelerate);
    read_if(s, "min_density_floor", "solver", c.solver.min_density_floor);
  }
  if (j.contains("io")) {
    const auto& io = j.at("io");
    check_keys(io, "io", {"input_path", "output_dir"});
    read_if(io, "input_path", "io", c.io.input_path);
    read_if(io, "output_dir", "io", c.io.output_dir);
  }
  if (j.contains("radial")) {
    const auto& r = j.at("radial");
    check_keys(r, "radial", {"dimension", "radius"});
    RadialConfig rc;
    read_if(r, "dimension", "radial", rc.dimension);
    read_if(r, "radius", "radial", rc.radius);
    c.radial = rc;
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    check_keys(o, "oracle", {"w2_quadrature_relative", "w2_assignment_relative", "prox_absolute", "gradient_relative"});
    read_if(o, "w2_quadrature_relative", "oracle", c.oracle.w2_quadrature_relative);
    read_if(o, "w2_assignment_relative", "oracle", c.oracle.w2_assignment_relative);
    read_if(o, "prox_absolute", "oracle", c.oracle.prox_absolute);
    read_if(o, "gradient_relative", "oracle", c.oracle.gradient_relative);
  }
  return c;
}

void RunConfig::resolve_defaults(const std::optional<std::string>& env_output_dir) {
  if (mode == RunMode::validate_uniform) {
    if (!grid) grid = GridConfig{-4.0, 4.0, 1024};
    if (!tau) tau = 1.0 / 3.0;
  }
  if (mode == RunMode::validate_hat) {
    if (!grid) grid = GridConfig{-2.0, 2.0, 2048};
    if (!tau) tau = 1.0 / 270.0;
  }
  if (io.output_dir.empty()) io.output_dir = env_output_dir && !env_output_dir->empty() ? *env_output_dir : ".";
}

void RunConfig::validate() const {
  const bool needs_input = mode == RunMode::step || mode == RunMode::flow || mode == RunMode::radial_step ||
                           mode == RunMode::radial_flow;
  const bool needs_tau = mode != RunMode::oracle_check;
  const bool needs_horizon = mode == RunMode::flow || mode == RunMode::radial_flow;
  const bool is_radial = mode == RunMode::radial_step || mode == RunMode::radial_flow;

  if (needs_input && io.input_path.empty()) throw std::invalid_argument("config: 'io.input_path' is required for mode " + to_string(mode));
  if (needs_tau) {
    if (!tau) throw std::invalid_argument("config: 'tau' is required for mode " + to_string(mode));
    require_positive(*tau, "tau");
  }
  if (needs_horizon) {
    if (!horizon) throw std::invalid_argument("config: 'horizon' is required for mode " + to_string(mode));
    if (!(*horizon >= *tau)) throw std::invalid_argument("config: 'horizon' must be at least 'tau'");
  }
  if (is_radial) {
    if (!radial) throw std::invalid_argument("config: 'radial' is required for mode " + to_string(mode));
    if (radial->dimension < 1) throw std::invalid_argument("config: 'radial.dimension' must be at least 1");
    if (radial->radius) require_positive(*radial->radius, "radial.radius");
  }
  if (grid) {
    if (!(grid->right > grid->left)) throw std::invalid_argument("config: 'grid.right' must exceed 'grid.left'");
    if (grid->n_cells < 2) throw std::invalid_argument("config: 'grid.n_cells' must be at least 2");
  }
  require_nonnegative(entropy_h, "entropy_h");
  require_positive(alpha0, "alpha0");
  if (solver.max_outer_iter < 1) throw std::invalid_argument("config: 'solver.max_outer_iter' must be positive");
  require_positive(solver.el_tolerance, "solver.el_tolerance");
  if (solver.step_rule != "backtracking" && solver.step_rule != "fixed") {
    throw std::invalid_argument("config: 'solver.step_rule' must be 'backtracking' or 'fixed'");
  }
  require_nonnegative(solver.sigma, "solver.sigma");
  if (solver.step_rule == "fixed" && !(solver.sigma > 0.0)) {
    throw std::invalid_argument("config: 'solver.sigma' must be positive for the fixed step rule");
  }
  require_nonnegative(solver.min_density_floor, "solver.min_density_floor");
  require_nonnegative(oracle.w2_quadrature_relative, "oracle.w2_quadrature_relative");
  require_nonnegative(oracle.w2_assignment_relative, "oracle.w2_assignment_relative");
  require_nonnegative(oracle.prox_absolute, "oracle.prox_absolute");
  require_nonnegative(oracle.gradient_relative, "oracle.gradient_relative");
  jko().validate();
}

JkoConfig RunConfig::jko() const {
  JkoConfig c;
  c.tau = tau.value_or(1.0);
  c.entropy_h = entropy_h;
  c.max_outer_iter = solver.max_outer_iter;
  c.el_tolerance = solver.el_tolerance;
  c.step_rule.kind = solver.step_rule == "fixed" ? StepRuleKind::fixed : StepRuleKind::backtracking;
  c.step_rule.sigma = solver.sigma;
  c.accelerate = solver.accelerate;
  c.min_density_floor = solver.min_density_floor;
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  if (c.grid) j["grid"] = {{"left", c.grid->left}, {"right", c.grid->right}, {"n_cells", c.grid->n_cells}};
  if (c.tau) j["tau"] = *c.tau;
  if (c.horizon) j["horizon"] = *c.horizon;
  j["entropy_h"] = c.entropy_h;
  j["solver"] = {{"max_outer_iter", c.solver.max_outer_iter},
                 {"el_tolerance", c.solver.el_tolerance},
                 {"step_rule", c.solver.step_rule},
                 {"sigma", c.solver.sigma},
                 {"accelerate", c.solver.accelerate},
                 {"min_density_floor", c.solver.min_density_floor}};
  j["io"] = {{"input_path", c.io.input_path}, {"output_dir", c.io.output_dir}};
  if (c.radial) {
    j["radial"] = {{"dimension", c.radial->dimension}};
    if (c.radial->radius) j["radial"]["radius"] = *c.radial->radius;
  }
  j["seed"] = c.seed;
  j["alpha0"] = c.alpha0;
  j["oracle"] = {{"w2_quadrature_relative", c.oracle.w2_quadrature_relative},
                 {"w2_assignment_relative", c.oracle.w2_assignment_relative},
                 {"prox_absolute", c.oracle.prox_absolute},
                 {"gradient_relative", c.oracle.gradient_relative}};
  return j;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override '" + assignment + "' must look like key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw std::invalid_argument("override '" + assignment + "' has an empty key segment");
    if (!node->is_object()) throw std::invalid_argument("override '" + assignment + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    if (!node->contains(part)) (*node)[part] = json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
}

RunConfig load_run_config(const std::string& path, const std::optional<std::string>& mode,
                          const std::vector<std::string>& overrides,
                          const std::optional<std::string>& env_output_dir) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("config: " + path + " is not valid JSON");
    require_object(j, "");
  }
  if (mode) {
    if (j.contains("mode") && j["mode"] != *mode) {
      throw std::invalid_argument("config: mode '" + *mode + "' conflicts with the config file");
    }
    j["mode"] = *mode;
  }
  for (const auto& o : overrides) apply_override(j, o);
  RunConfig c = parse_run_config(j);
  c.resolve_defaults(env_output_dir);
  c.validate();
  return c;
}

}  // namespace tvjko
