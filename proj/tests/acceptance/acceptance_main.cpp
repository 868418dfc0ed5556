// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rbfmix/experiments.hpp"

using namespace rbfmix;

namespace {

const std::string kConfigDir = RBFMIX_CONFIG_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

RunConfig preset(const std::string& name) { return load_config(kConfigDir + "/" + name); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

struct SweepResult {
  std::string name;
  ConvergenceRecord record;
  double h1_rate = 0.0;
  double lambda_rate = 0.0;
  double seconds = 0.0;
};

SweepResult sweep(const std::string& name) {
  const RunConfig cfg = preset(name);
  const auto t0 = std::chrono::steady_clock::now();
  SweepResult res{name, run_sweep(cfg), 0.0, 0.0, 0.0};
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!res.record.failures.empty()) throw NumericalError(name + ": " + res.record.failures.front());
  res.h1_rate = fit_rate(res.record, ErrorColumn::H1, RateParameter::FillDistance);
  res.lambda_rate = fit_rate(res.record, ErrorColumn::L2Lambda, RateParameter::MeshSize);
  return res;
}

bool lambda_rate_ok(double rate) { return rate >= 0.35 && rate <= 1.1; }

// Sweeps are shared between criteria 1-3 and 8.
std::vector<SweepResult>& sweeps() {
  static std::vector<SweepResult> all = [] {
    std::vector<SweepResult> v;
    for (const char* name : {"sweep_c2_r0.2.yaml", "sweep_c0_r0.2.yaml", "sweep_c2_r0.1.yaml", "sweep_c0_r0.1.yaml"})
      v.push_back(sweep(name));
    return v;
  }();
  return all;
}

Outcome criterion1() {
  const SweepResult& s = sweeps()[0];
  std::string errs;
  for (const auto& row : s.record.rows) errs += " " + fmt(row.h1_error);
  const bool pass = s.h1_rate >= 0.8 && s.seconds <= 120.0;
  return {pass, "H1 rate " + fmt(s.h1_rate) + " (>= 0.8), errors" + errs + ", runtime " + fmt(s.seconds) + " s"};
}

Outcome criterion2() {
  const SweepResult& s = sweeps()[0];
  std::string errs;
  for (const auto& row : s.record.rows) errs += " " + fmt(row.l2_lambda_error) + "@k=" + fmt(row.k);
  return {lambda_rate_ok(s.lambda_rate), "multiplier rate vs k " + fmt(s.lambda_rate) + " (in [0.35, 1.1]), errors" + errs};
}

Outcome criterion3() {
  bool pass = true;
  std::string detail;
  for (const SweepResult& s : sweeps()) {
    const bool ok = s.h1_rate >= 0.8 && lambda_rate_ok(s.lambda_rate);
    pass = pass && ok;
    detail += s.name + ": H1 " + fmt(s.h1_rate) + ", multiplier " + fmt(s.lambda_rate) + (ok ? "; " : " [out of range]; ");
  }
  return {pass, detail};
}

Outcome criterion4() {
  auto poly = std::make_shared<const Polygon>(Polygon::unit_square());
  auto centers = std::make_shared<const CenterSet>(generate_grid_centers(*poly, 5));
  const double r = 0.3;
  const WendlandKernel kernel(Smoothness::C2, r);
  const int per_edge = elements_per_unit_side(centers->fill_distance, r);
  auto mesh = std::make_shared<const BoundaryMesh>(
      partition_boundary_counts(*poly, std::vector<int>{per_edge, per_edge, per_edge, per_edge}));
  const MultiplierSpace space(mesh, 0);
  const double base = auto_cell_size(centers->fill_distance, r, centers->grid_spacing);
  auto f = [](const Point& x) { return std::cos(x.x()) - 4.0 * x.y(); };

  // Sparse assembly at quad_refinement = 4; the dense oracle uses a rule 10x finer still.
  const double sparse_cell = base / 4;
  const DomainQuadrature q(*poly, sparse_cell), qf(*poly, sparse_cell / 10);
  const QuadRule1D g16 = QuadRule1D::gauss_legendre(16);
  const BoundaryQuadrature bq(*mesh, g16, sparse_cell), bqf(*mesh, g16, sparse_cell / 10);

  const double dA = oracle::relative_max_diff(Eigen::MatrixXd(assemble_A(*centers, kernel, 1.0, q)),
                                              oracle::dense_A(*centers, kernel, 1.0, qf));
  const double dB = oracle::relative_max_diff(Eigen::MatrixXd(assemble_B(*centers, kernel, space, bq)),
                                              oracle::dense_B(*centers, kernel, space, bqf));
  const double dF = oracle::relative_max_diff(assemble_F(*centers, kernel, f, q), oracle::dense_F(*centers, kernel, f, qf));

  // For the record: the default rule against its own 10x refinement.
  const DomainQuadrature q0(*poly, base), q0f(*poly, base / 10);
  const double d0 = oracle::relative_max_diff(Eigen::MatrixXd(assemble_A(*centers, kernel, 1.0, q0)),
                                              oracle::dense_A(*centers, kernel, 1.0, q0f));
  const bool pass = dA <= 1e-8 && dB <= 1e-8 && dF <= 1e-8;
  return {pass, "5x5, r=0.3, C2, cell=" + fmt(sparse_cell) + ": max rel diff A " + fmt(dA) + ", B " + fmt(dB) +
                    ", F " + fmt(dF) + " (<= 1e-8); default cell " + fmt(base) + " gives A " + fmt(d0)};
}

Outcome criterion5() {
  double worst_orth = 0.0, worst_con = 0.0;
  bool identical = true;
  int solves = 0;
  for (const char* name : {"sweep_c2_r0.2.yaml", "sweep_c0_r0.2.yaml", "sweep_c2_r0.1.yaml", "sweep_c0_r0.1.yaml",
                           "solve_lshape.yaml"}) {
    const RunConfig cfg = preset(name);
    const ExactSolution ex = exact_solution(cfg.exact);
    auto g = [&](const BoundaryPoint& b) { return ex.g(b); };
    for (std::size_t i = 0; i < cfg.grids.size(); ++i) {
      const CaseSetup setup = build_case(cfg, i);
      const SaddleSystem sys = assemble_system(setup.disc, cfg.kappa, ex.f, g, *setup.quad, *setup.boundary_quad);
      const MixedSolution a = solve(sys);
      const MixedSolution b = solve(sys);
      identical = identical && a.u_coeffs() == b.u_coeffs() && a.lambda_coeffs() == b.lambda_coeffs();
      const oracle::GalerkinCheck chk =
          oracle::galerkin_residuals(a, cfg.kappa, ex.f, g, *setup.quad, *setup.boundary_quad);
      worst_orth = std::max(worst_orth, chk.orthogonality);
      worst_con = std::max(worst_con, chk.constraint);
      ++solves;
    }
  }
  const bool pass = worst_orth <= 1e-8 && worst_con <= 1e-8 && identical;
  return {pass, std::to_string(solves) + " preset solves: max orthogonality " + fmt(worst_orth) + ", max constraint " +
                    fmt(worst_con) + " (<= 1e-8), repeat solves " + (identical ? "bit-identical" : "DIFFER")};
}

Outcome criterion6() {
  const InterpolationStudy st = run_interpolation_study(preset("interpolation_c0.yaml"));
  double worst = 0.0;
  std::string errs;
  for (const auto& row : st.rows) {
    worst = std::max(worst, row.max_center_residual);
    errs += " " + fmt(row.l2_error);
  }
  const bool pass = st.rate >= 2.0 && worst <= 1e-10;
  return {pass, "C0 r=0.2 L2 rate " + fmt(st.rate) + " (>= 2.0), errors" + errs + ", max center residual " + fmt(worst) +
                    " (<= 1e-10)"};
}

Outcome criterion7() {
  const InfsupProbe probe = run_infsup_probe(preset("infsup_c2.yaml"));
  std::string betas;
  for (const auto& row : probe.rows) betas += " " + fmt(row.beta);
  return {probe.slope >= -0.2, "beta" + betas + ", slope vs h_X " + fmt(probe.slope) + " (>= -0.2)"};
}

Outcome criterion8() {
  RunConfig cfg = preset("sweep_c2_r0.2.yaml");
  const std::size_t finest = cfg.grids.size() - 1;
  const double base = solve_case(cfg, finest).row.h1_error;
  cfg.quad_refinement = 2;
  const double fine = solve_case(cfg, finest).row.h1_error;
  const double rel = std::abs(fine - base) / base;
  return {rel < 1e-3, "grid " + std::to_string(cfg.grids[finest]) + ": H1 " + fmt(base) + " -> " + fmt(fine) +
                          ", relative change " + fmt(rel) + " (< 1e-3)"};
}

Outcome criterion9() {
  // Kernel gradients against central differences, then the full unit suite.
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (Smoothness s : {Smoothness::C0, Smoothness::C2}) {
    for (double r : {0.1, 0.2, 0.3}) {
      const WendlandKernel k(s, r);
      const Point c(0.5, 0.5);
      for (int t = 0; t < 200; ++t) {
        const Point x = c + 0.95 * r * Point(u(rng), u(rng));
        if ((x - c).norm() < 0.05 * r || (x - c).norm() > 0.95 * r) continue;
        const double h = 1e-5 * r;
        const Eigen::Vector2d fd((k.eval(x + Point(h, 0), c) - k.eval(x - Point(h, 0), c)) / (2 * h),
                                 (k.eval(x + Point(0, h), c) - k.eval(x - Point(0, h), c)) / (2 * h));
        const Eigen::Vector2d gr = k.grad(x, c);
        worst = std::max(worst, (gr - fd).norm() / std::max(gr.norm(), 1.0 / (r * r * r)));
      }
    }
  }
  const std::string cmd = std::string("\"") + RBFMIX_UNIT_TESTS + "\" --gtest_brief=1 > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  const bool pass = worst <= 1e-6 && rc == 0;
  return {pass, "kernel FD max rel deviation " + fmt(worst) + " (<= 1e-6); unit suite " +
                    (rc == 0 ? "passed" : "FAILED (exit " + std::to_string(rc) + ")")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"H1 rate, reference sweep", criterion1},
      {"multiplier rate, reference sweep", criterion2},
      {"both rates, four kernel/scale configurations", criterion3},
      {"sparse assembly vs dense refined oracle", criterion4},
      {"solver contracts on shipped presets", criterion5},
      {"native interpolation rate", criterion6},
      {"inf-sup trend", criterion7},
      {"quadrature overkill", criterion8},
      {"unit and property suites", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failed;
    std::cout << "criterion " << (i + 1) << ": " << (out.pass ? "PASS" : "FAIL") << " - " << criteria[i].first << " - "
              << out.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
