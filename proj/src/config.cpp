#include "rbfmix/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "rbfmix/analysis.hpp"
#include "rbfmix/errors.hpp"
#include "rbfmix/kernels.hpp"

namespace rbfmix {

RunMode parse_mode(std::string_view name) {
  if (name == "solve") return RunMode::Solve;
  if (name == "sweep") return RunMode::Sweep;
  if (name == "interpolation_study") return RunMode::InterpolationStudy;
  if (name == "infsup_probe") return RunMode::InfsupProbe;
  throw ConfigError("unknown mode '" + std::string(name) + "'");
}

std::string_view mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::Solve: return "solve";
    case RunMode::Sweep: return "sweep";
    case RunMode::InterpolationStudy: return "interpolation_study";
    case RunMode::InfsupProbe: return "infsup_probe";
  }
  return "sweep";
}

namespace {

template <class T>
T scalar(const std::string& key, const YAML::Node& node, const char* what) {
  if (!node.IsScalar()) throw ConfigError("'" + key + "': expected " + what);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("'" + key + "': expected " + what + ", got '" + node.Scalar() + "'");
  }
}

template <class T>
std::vector<T> list(const std::string& key, const YAML::Node& node, const char* what) {
  if (!node.IsSequence()) throw ConfigError("'" + key + "': expected a [list] of " + what);
  std::vector<T> out;
  for (const auto& item : node) out.push_back(scalar<T>(key, item, what));
  return out;
}

}  // namespace

Polygon RunConfig::make_polygon() const {
  if (polygon == "custom") {
    if (vertices.size() < 6 || vertices.size() % 2 != 0)
      throw ConfigError("custom polygon needs an even list of at least 6 coordinates");
    std::vector<Point> pts;
    for (std::size_t i = 0; i < vertices.size(); i += 2) pts.emplace_back(vertices[i], vertices[i + 1]);
    return Polygon(std::move(pts));
  }
  return Polygon::from_preset(polygon);
}

void RunConfig::validate() const {
  make_polygon();
  WendlandKernel::from_name(kernel, r);
  if (!(r > 0.0)) throw ConfigError("r must be positive");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be nonnegative");
  exact_solution(exact);
  if (grids.empty()) throw ConfigError("grids must list at least one grid");
  for (int n : grids)
    if (n < 2) throw ConfigError("every grid needs at least 2 nodes per side");
  if (mode == RunMode::Sweep || mode == RunMode::InterpolationStudy || mode == RunMode::InfsupProbe) {
    for (std::size_t i = 1; i < grids.size(); ++i)
      if (grids[i] <= grids[i - 1]) throw ConfigError("grids must be strictly increasing");
  }
  if (multiplier_degree < 0 || multiplier_degree > 3) throw ConfigError("multiplier_degree must be in [0, 3]");
  if (k_rule != "hx_over_r" && k_rule != "explicit") throw ConfigError("k_rule must be hx_over_r or explicit");
  if (k_rule == "explicit" && target_k.size() != grids.size())
    throw ConfigError("k_rule = explicit needs one target_k per grid");
  if (quad_points_per_cell < 1) throw ConfigError("quad_points_per_cell must be positive");
  if (quad_cell_size && !(*quad_cell_size > 0.0)) throw ConfigError("quad_cells_rule must be auto or positive");
  if (quad_refinement < 1) throw ConfigError("quad_refinement must be at least 1");
  if (boundary_quad_points < multiplier_degree + 3)
    throw ConfigError("boundary_quad_points must be at least multiplier_degree + 3");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  RunConfig cfg;
  if (root.IsNull()) {
    cfg.validate();
    return cfg;
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of key: value pairs");

  std::set<std::string> seen;
  for (const auto& kv : root) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");

    if (key == "mode") cfg.mode = parse_mode(scalar<std::string>(key, v, "a string"));
    else if (key == "polygon") cfg.polygon = scalar<std::string>(key, v, "a string");
    else if (key == "vertices") cfg.vertices = list<double>(key, v, "numbers");
    else if (key == "kernel") cfg.kernel = scalar<std::string>(key, v, "a string");
    else if (key == "r") cfg.r = scalar<double>(key, v, "a number");
    else if (key == "kappa") cfg.kappa = scalar<double>(key, v, "a number");
    else if (key == "exact") cfg.exact = scalar<std::string>(key, v, "a string");
    else if (key == "grids") cfg.grids = list<int>(key, v, "integers");
    else if (key == "multiplier_degree") cfg.multiplier_degree = scalar<int>(key, v, "an integer");
    else if (key == "k_rule") cfg.k_rule = scalar<std::string>(key, v, "a string");
    else if (key == "target_k") cfg.target_k = list<double>(key, v, "numbers");
    else if (key == "quad_points_per_cell") cfg.quad_points_per_cell = scalar<int>(key, v, "an integer");
    else if (key == "quad_cells_rule") {
      if (scalar<std::string>(key, v, "auto or a cell size") == "auto") cfg.quad_cell_size.reset();
      else cfg.quad_cell_size = scalar<double>(key, v, "auto or a cell size");
    } else if (key == "quad_refinement") cfg.quad_refinement = scalar<int>(key, v, "an integer");
    else if (key == "boundary_quad_points") cfg.boundary_quad_points = scalar<int>(key, v, "an integer");
    else if (key == "output_dir") cfg.output_dir = scalar<std::string>(key, v, "a path");
    else if (key == "threads") cfg.threads = scalar<int>(key, v, "an integer");
    else if (key == "record_runtime") cfg.record_runtime = scalar<bool>(key, v, "true or false");
    else if (key == "dump_system") cfg.dump_system = scalar<bool>(key, v, "true or false");
    else throw ConfigError("unknown config key '" + key + "'");
  }
  if (!cfg.target_k.empty() && !seen.count("k_rule")) cfg.k_rule = "explicit";
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace rbfmix
