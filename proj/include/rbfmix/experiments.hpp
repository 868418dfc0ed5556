#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rbfmix/analysis.hpp"
#include "rbfmix/config.hpp"

namespace rbfmix {

/// Elements per unit side for the "hx_over_r" rule: round(r / h_X), at least 1.
int elements_per_unit_side(double h_X, double r);

/// Geometry, spaces and quadrature for one grid of a run.
struct CaseSetup {
  Discretization disc;
  std::shared_ptr<const DomainQuadrature> quad;
  std::shared_ptr<const BoundaryQuadrature> boundary_quad;
};

/// Builds the case for grid index `index` of the config.
CaseSetup build_case(const RunConfig& config, std::size_t index);

struct CaseResult {
  ParameterRecord params;
  std::optional<MixedSolution> solution;
  ConvergenceRow row;
};

/// Assemble, solve and measure both errors for grid `index`.
CaseResult solve_case(const RunConfig& config, std::size_t index);

struct SingleRun {
  CaseResult result;
  SaddleSystem system;
};

/// Solves the first grid of the config. When `out` is non-empty writes
/// solution.txt, single.csv and (if dump_system) system.txt there.
SingleRun run_single(const RunConfig& config, const std::filesystem::path& out = {});

/// One row per grid; failed rows are listed in record.failures. Writes
/// convergence.csv, the plot data files and rates.txt when `out` is set.
ConvergenceRecord run_sweep(const RunConfig& config, const std::filesystem::path& out = {});

/// sin(πx₁) sin(πx₂) interpolated with the configured kernel on each grid.
InterpolationStudy run_interpolation_study(const RunConfig& config, const std::filesystem::path& out = {});

struct InfsupRow {
  ParameterRecord params;
  double beta = 0.0;
};

struct InfsupProbe {
  std::vector<InfsupRow> rows;
  /// Slope of log β against log h_X (NaN with fewer than two rows).
  double slope = 0.0;
};

/// Inf-sup estimate per grid with the H¹ Gram (A at κ = 1) and the
/// k-weighted L₂(Γ) multiplier Gram.
InfsupProbe run_infsup_probe(const RunConfig& config, const std::filesystem::path& out = {});

/// Inf-sup estimate for an assembled case.
double infsup_for_case(const CaseSetup& setup, const SparseMatrix& B);

}  // namespace rbfmix
