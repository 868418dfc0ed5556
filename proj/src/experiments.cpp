#include "rbfmix/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "rbfmix/errors.hpp"

namespace rbfmix {

namespace fs = std::filesystem;

int elements_per_unit_side(double h_X, double r) {
  return std::max(1, static_cast<int>(std::lround(r / h_X)));
}

namespace {

BoundaryMesh make_boundary_mesh(const RunConfig& config, const Polygon& polygon, double h_X, std::size_t index) {
  if (config.k_rule == "explicit") return partition_boundary(polygon, config.target_k.at(index));
  const double k = 1.0 / elements_per_unit_side(h_X, config.r);
  std::vector<int> counts;
  for (const auto& e : polygon.edges()) counts.push_back(std::max(1, static_cast<int>(std::lround(e.length / k))));
  return partition_boundary_counts(polygon, counts);
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw ConfigError("cannot write " + (dir / name).string());
  return os;
}

}  // namespace

CaseSetup build_case(const RunConfig& config, std::size_t index) {
  auto polygon = std::make_shared<const Polygon>(config.make_polygon());
  const int n = config.grids.at(index);
  auto centers = std::make_shared<const CenterSet>(
      polygon->is_unit_square() ? generate_grid_centers(*polygon, n)
                                : generate_interior_centers(*polygon, 1.0 / (n - 1)));
  const WendlandKernel kernel = WendlandKernel::from_name(config.kernel, config.r);
  auto mesh = std::make_shared<const BoundaryMesh>(make_boundary_mesh(config, *polygon, centers->fill_distance, index));
  auto space = std::make_shared<const MultiplierSpace>(mesh, config.multiplier_degree);

  const double base_cell = config.quad_cell_size
                               ? *config.quad_cell_size
                               : auto_cell_size(centers->fill_distance, config.r, centers->grid_spacing);
  const double cell = base_cell / config.quad_refinement;
  auto quad = std::make_shared<const DomainQuadrature>(*polygon, cell, config.quad_points_per_cell);
  auto bquad = std::make_shared<const BoundaryQuadrature>(
      *mesh, QuadRule1D::gauss_legendre(config.boundary_quad_points), cell);
  return CaseSetup{Discretization{polygon, centers, kernel, space}, quad, bquad};
}

namespace {

ExactSolution configured_exact(const RunConfig& config) {
  ExactSolution exact = exact_solution(config.exact);
  if (config.kappa != 0.0) {
    // Keep f consistent with -Δu + κu for the chosen κ.
    const auto base_f = exact.f;
    const auto u = exact.u;
    const double kappa = config.kappa;
    exact.f = [base_f, u, kappa](const Point& x) { return base_f(x) + kappa * u(x); };
  }
  exact.kappa = config.kappa;
  return exact;
}

SingleRun run_case(const RunConfig& config, std::size_t index) {
  const auto start = std::chrono::steady_clock::now();
  const CaseSetup setup = build_case(config, index);
  const ExactSolution exact = configured_exact(config);
  SaddleSystem system =
      assemble_system(setup.disc, config.kappa, exact.f, [&exact](const BoundaryPoint& b) { return exact.g(b); },
                      *setup.quad, *setup.boundary_quad);
  MixedSolution solution = solve(system);

  CaseResult res{system.params, std::nullopt, {}};
  ConvergenceRow& row = res.row;
  row.N = system.params.N;
  row.M = system.params.M;
  row.h_X = system.params.h_X;
  row.k = system.params.k;
  row.r = system.params.r;
  row.tau = system.params.tau;
  row.p = system.params.p;
  row.h1_error = h1_error(solution, exact, *setup.quad);
  row.l2_lambda_error = l2_boundary_error(solution, exact, *setup.boundary_quad);
  row.cond_estimate = solution.cond_estimate();
  if (config.record_runtime)
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.solution.emplace(std::move(solution));
  return SingleRun{std::move(res), std::move(system)};
}

}  // namespace

CaseResult solve_case(const RunConfig& config, std::size_t index) { return run_case(config, index).result; }

SingleRun run_single(const RunConfig& config, const fs::path& out) {
  SingleRun run = run_case(config, 0);
  if (!out.empty()) {
    auto sol = open_output(out, "solution.txt");
    write_solution(sol, *run.result.solution, run.result.params);
    ConvergenceRecord record;
    record.rows.push_back(run.result.row);
    auto csv = open_output(out, "single.csv");
    record.write_csv(csv);
    if (config.dump_system) {
      auto sys = open_output(out, "system.txt");
      write_system(sys, run.system);
    }
  }
  return run;
}

ConvergenceRecord run_sweep(const RunConfig& config, const fs::path& out) {
  config.validate();
  const std::size_t n = config.grids.size();
  std::vector<std::optional<ConvergenceRow>> rows(n);
  std::vector<std::string> errors(n);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = solve_case(config, i).row;
      } catch (const std::exception& e) {
        errors[i] = "grid " + std::to_string(config.grids[i]) + ": " + e.what();
      }
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ConvergenceRecord record;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i]) record.rows.push_back(*rows[i]);
    else record.failures.push_back(errors[i]);
  }
  record.sort_rows();

  if (!out.empty()) {
    {
      auto csv = open_output(out, "convergence.csv");
      record.write_csv(csv);
    }
    auto curve = [&](const std::string& name, auto value) {
      auto os = open_output(out, name);
      os << std::setprecision(17);
      for (const auto& row : record.rows) os << (row.N + row.M) << ' ' << value(row) << '\n';
    };
    curve("h1_error.dat", [](const ConvergenceRow& r) { return r.h1_error; });
    curve("l2_lambda_error.dat", [](const ConvergenceRow& r) { return r.l2_lambda_error; });
    curve("ref_h.dat", [](const ConvergenceRow& r) { return 10.0 * r.h_X; });
    curve("ref_k_half.dat", [](const ConvergenceRow& r) { return 10.0 * std::sqrt(r.k); });
    {
      auto all = open_output(out, "errors.dat");
      all << "# unknowns h1_error l2_lambda_error 10*h_X 10*sqrt(k)\n" << std::setprecision(17);
      for (const auto& row : record.rows)
        all << (row.N + row.M) << ' ' << row.h1_error << ' ' << row.l2_lambda_error << ' ' << 10.0 * row.h_X << ' '
            << 10.0 * std::sqrt(row.k) << '\n';
    }
    if (record.rows.size() >= 3) {
      auto rates = open_output(out, "rates.txt");
      rates << std::setprecision(17);
      rates << "h1_rate_vs_h_X " << fit_rate(record, ErrorColumn::H1, RateParameter::FillDistance) << '\n';
      rates << "l2_lambda_rate_vs_k " << fit_rate(record, ErrorColumn::L2Lambda, RateParameter::MeshSize) << '\n';
    }
    if (!record.failures.empty()) {
      auto fail = open_output(out, "failures.txt");
      for (const auto& f : record.failures) fail << f << '\n';
    }
  }
  return record;
}

InterpolationStudy run_interpolation_study(const RunConfig& config, const fs::path& out) {
  if (!config.make_polygon().is_unit_square()) throw ConfigError("interpolation studies run on the unit square");
  const WendlandKernel kernel = WendlandKernel::from_name(config.kernel, config.r);
  auto v = [](const Point& x) { return std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y()); };
  InterpolationStudy study =
      interpolation_rate_study(v, kernel.smoothness(), config.r, config.grids, config.quad_points_per_cell);
  if (!out.empty()) {
    auto csv = open_output(out, "interpolation.csv");
    csv << "n_per_side,N,h_X,r,tau,l2_error,max_center_residual\n" << std::setprecision(17);
    for (const auto& row : study.rows)
      csv << row.n_per_side << ',' << row.N << ',' << row.h_X << ',' << row.r << ',' << row.tau << ','
          << row.l2_error << ',' << row.max_center_residual << '\n';
    auto rates = open_output(out, "interpolation_rate.txt");
    rates << std::setprecision(17) << "l2_rate_vs_h_X " << study.rate << '\n';
    if (study.at_precision_floor) rates << "note errors at precision floor; rate not meaningful\n";
    if (kernel.smoothness() == Smoothness::C2)
      rates << "note C2 interpolation matrices become ill-conditioned on fine grids at fixed r; "
               "the predicted rate 2*tau = 5 is not observable in double precision\n";
  }
  return study;
}

double infsup_for_case(const CaseSetup& setup, const SparseMatrix& B) {
  const Eigen::MatrixXd h1_gram(assemble_A(*setup.disc.centers, setup.disc.kernel, 1.0, *setup.quad));
  return estimate_infsup(Eigen::MatrixXd(B), h1_gram, infsup_multiplier_weight(*setup.disc.space));
}

InfsupProbe run_infsup_probe(const RunConfig& config, const fs::path& out) {
  InfsupProbe probe;
  for (std::size_t i = 0; i < config.grids.size(); ++i) {
    const CaseSetup setup = build_case(config, i);
    const SparseMatrix B = assemble_B(*setup.disc.centers, setup.disc.kernel, *setup.disc.space, *setup.boundary_quad);
    probe.rows.push_back({setup.disc.parameters(config.kappa), infsup_for_case(setup, B)});
  }
  if (probe.rows.size() >= 2) {
    std::vector<double> hs, betas;
    for (const auto& row : probe.rows) {
      hs.push_back(row.params.h_X);
      betas.push_back(row.beta);
    }
    probe.slope = loglog_slope(hs, betas);
  } else {
    probe.slope = std::numeric_limits<double>::quiet_NaN();
  }
  if (!out.empty()) {
    auto csv = open_output(out, "infsup.csv");
    csv << "N,M,h_X,k,r,tau,p,beta\n" << std::setprecision(17);
    for (const auto& row : probe.rows)
      csv << row.params.N << ',' << row.params.M << ',' << row.params.h_X << ',' << row.params.k << ','
          << row.params.r << ',' << row.params.tau << ',' << row.params.p << ',' << row.beta << '\n';
    auto slope = open_output(out, "infsup_slope.txt");
    slope << std::setprecision(17) << "log_beta_vs_log_h_X " << probe.slope << '\n';
  }
  return probe;
}

}  // namespace rbfmix
