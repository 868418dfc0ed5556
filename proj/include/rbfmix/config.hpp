#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbfmix/geometry.hpp"
#include "rbfmix/quadrature.hpp"

namespace rbfmix {

enum class RunMode { Solve, Sweep, InterpolationStudy, InfsupProbe };

RunMode parse_mode(std::string_view name);
std::string_view mode_name(RunMode mode);

/// Experiment description read from a YAML mapping.
///
///   mode: sweep                    # solve | sweep | interpolation_study | infsup_probe
///   polygon: unit_square           # unit_square | l_shape | custom
///   vertices: [0,0, 1,0, 1,1, 0,1] # custom polygons only, CCW x,y pairs
///   kernel: wendland_c2
///   r: 0.2
///   kappa: 0
///   exact: quadratic
///   grids: [9, 17, 33]             # nodes per unit side
///   multiplier_degree: 0
///   k_rule: hx_over_r              # or explicit together with target_k: [...]
///   quad_points_per_cell: 5
///   quad_cells_rule: auto          # or an explicit cell size
///   quad_refinement: 1             # divides the cell size
///   boundary_quad_points: 16
///   output_dir: out
///   threads: 1
///   record_runtime: true
///   dump_system: false
struct RunConfig {
  RunMode mode = RunMode::Sweep;
  std::string polygon = "unit_square";
  std::vector<double> vertices;
  std::string kernel = "wendland_c2";
  double r = 0.2;
  double kappa = 0.0;
  std::string exact = "quadratic";
  std::vector<int> grids{9, 17, 33};
  int multiplier_degree = 0;
  std::string k_rule = "hx_over_r";
  std::vector<double> target_k;
  int quad_points_per_cell = kDefaultPointsPerCell;
  std::optional<double> quad_cell_size;  // empty = "auto"
  int quad_refinement = 1;
  int boundary_quad_points = kDefaultBoundaryPoints;
  std::filesystem::path output_dir = "out";
  int threads = 1;
  bool record_runtime = true;
  bool dump_system = false;

  Polygon make_polygon() const;
  /// Throws ConfigError when an invariant is violated (r > 0, κ >= 0, strictly
  /// increasing grids in sweep mode, known presets, ...).
  void validate() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace rbfmix
