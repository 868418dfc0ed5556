#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "rbfmix/config.hpp"
#include "rbfmix/errors.hpp"

namespace rbfmix {
namespace {

TEST(Config, DefaultsDescribeTheReferenceSweep) {
  const RunConfig cfg = parse_config("");
  EXPECT_EQ(cfg.mode, RunMode::Sweep);
  EXPECT_EQ(cfg.kernel, "wendland_c2");
  EXPECT_DOUBLE_EQ(cfg.r, 0.2);
  EXPECT_DOUBLE_EQ(cfg.kappa, 0.0);
  EXPECT_EQ(cfg.grids, (std::vector<int>{9, 17, 33}));
  EXPECT_EQ(cfg.multiplier_degree, 0);
  EXPECT_EQ(cfg.k_rule, "hx_over_r");
  EXPECT_EQ(cfg.quad_points_per_cell, 5);
  EXPECT_FALSE(cfg.quad_cell_size);
  EXPECT_EQ(cfg.boundary_quad_points, 16);
  EXPECT_TRUE(cfg.make_polygon().is_unit_square());
}

TEST(Config, ParsesEveryKey) {
  const RunConfig cfg = parse_config(R"(
# full example
mode: solve
polygon: custom
vertices: [0,0, 2,0, 2,1, 0,1]   # a 2x1 rectangle
kernel: "wendland_c0"
r: 0.35
kappa: 1.5
exact: trig
grids: [11]
multiplier_degree: 2
k_rule: explicit
target_k: [0.25]
quad_points_per_cell: 6
quad_cells_rule: 0.05
quad_refinement: 2
boundary_quad_points: 12
output_dir: results/run1
threads: 3
record_runtime: false
dump_system: true
)");
  EXPECT_EQ(cfg.mode, RunMode::Solve);
  EXPECT_EQ(cfg.kernel, "wendland_c0");
  EXPECT_DOUBLE_EQ(cfg.r, 0.35);
  EXPECT_DOUBLE_EQ(cfg.kappa, 1.5);
  EXPECT_EQ(cfg.exact, "trig");
  EXPECT_EQ(cfg.grids, std::vector<int>{11});
  EXPECT_EQ(cfg.multiplier_degree, 2);
  EXPECT_EQ(cfg.target_k, std::vector<double>{0.25});
  EXPECT_EQ(cfg.quad_points_per_cell, 6);
  ASSERT_TRUE(cfg.quad_cell_size);
  EXPECT_DOUBLE_EQ(*cfg.quad_cell_size, 0.05);
  EXPECT_EQ(cfg.quad_refinement, 2);
  EXPECT_EQ(cfg.boundary_quad_points, 12);
  EXPECT_EQ(cfg.output_dir, std::filesystem::path("results/run1"));
  EXPECT_EQ(cfg.threads, 3);
  EXPECT_FALSE(cfg.record_runtime);
  EXPECT_TRUE(cfg.dump_system);
  EXPECT_DOUBLE_EQ(cfg.make_polygon().area(), 2.0);
}

TEST(Config, ModeNamesRoundTrip) {
  for (RunMode m : {RunMode::Solve, RunMode::Sweep, RunMode::InterpolationStudy, RunMode::InfsupProbe})
    EXPECT_EQ(parse_mode(mode_name(m)), m);
  EXPECT_THROW(parse_mode("explode"), ConfigError);
}

TEST(Config, RejectsInvalidInput) {
  for (const char* text : {
           "r: 0",
           "r: -0.2",
           "r: abc",
           "r: [0.2]",
           "kappa: -1",
           "kernel: gaussian",
           "polygon: hexagon",
           "grids: [9, 9, 17]",
           "grids: [17, 9]",
           "grids: []",
           "grids: [1]",
           "grids: 9",
           "grids: [9, x]",
           "multiplier_degree: 4",
           "multiplier_degree: 1.5",
           "k_rule: magic",
           "k_rule: explicit",
           "quad_refinement: 0",
           "quad_cells_rule: -1",
           "quad_cells_rule: fine",
           "threads: 0",
           "record_runtime: maybe",
           "exact: cubic",
           "colour: red",
           "r: 0.2\nr: 0.3",
           "just some words",
           "[1, 2, 3]",
           "r: [unclosed",
           "polygon: custom\nvertices: [0,0, 1,0]",
           "polygon: custom\nvertices: [0,0, 0,1, 1,0]",  // clockwise
       }) {
    EXPECT_THROW(parse_config(text), ConfigError) << text;
  }
}

TEST(Config, SolveModeAcceptsAnyGridOrder) {
  EXPECT_NO_THROW(parse_config("mode: solve\ngrids: [17, 9]"));
}

TEST(Config, TargetKImpliesExplicitRule) {
  EXPECT_EQ(parse_config("grids: [5, 9]\ntarget_k: [0.5, 0.25]").k_rule, "explicit");
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "rbfmix_config_test.yaml";
  {
    std::ofstream os(path);
    os << "kernel: wendland_c0\nr: 0.1\n";
  }
  const RunConfig cfg = load_config(path);
  EXPECT_EQ(cfg.kernel, "wendland_c0");
  EXPECT_DOUBLE_EQ(cfg.r, 0.1);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path), ConfigError);
}

}  // namespace
}  // namespace rbfmix
