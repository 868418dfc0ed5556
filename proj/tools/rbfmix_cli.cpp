// Batch front-end: single solves, convergence sweeps, interpolation studies
// and inf-sup probes driven by a flat key = value config file.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rbfmix/config.hpp"
#include "rbfmix/errors.hpp"
#include "rbfmix/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitPartial = 4;

struct Options {
  std::string config;
  std::optional<std::string> out;
  std::optional<int> threads;
};

// Without an explicit mode the config file's `mode` key decides.
rbfmix::RunConfig prepare(const Options& opts, std::optional<rbfmix::RunMode> mode) {
  rbfmix::RunConfig cfg = rbfmix::load_config(opts.config);
  if (mode) cfg.mode = *mode;
  if (opts.out) cfg.output_dir = *opts.out;
  if (opts.threads) cfg.threads = *opts.threads;
  cfg.validate();
  return cfg;
}

void print_row(const rbfmix::ConvergenceRow& row) {
  std::cout << std::setprecision(6) << "N=" << row.N << " M=" << row.M << " h_X=" << row.h_X << " k=" << row.k
            << " |u-u_X|_H1=" << row.h1_error << " |lambda-lambda_k|_L2=" << row.l2_lambda_error
            << " cond=" << row.cond_estimate << '\n';
}

int cmd_solve(const rbfmix::RunConfig& cfg) {
  const auto run = rbfmix::run_single(cfg, cfg.output_dir);
  print_row(run.result.row);
  std::cout << "residual=" << run.result.solution->residual_norm() << "\nwrote " << cfg.output_dir.string() << '\n';
  return kExitOk;
}

int cmd_sweep(const rbfmix::RunConfig& cfg) {
  const auto record = rbfmix::run_sweep(cfg, cfg.output_dir);
  for (const auto& row : record.rows) print_row(row);
  for (const auto& f : record.failures) std::cerr << "failed: " << f << '\n';
  if (record.rows.size() >= 3) {
    std::cout << "H1 rate vs h_X: "
              << rbfmix::fit_rate(record, rbfmix::ErrorColumn::H1, rbfmix::RateParameter::FillDistance) << '\n'
              << "L2(Gamma) multiplier rate vs k: "
              << rbfmix::fit_rate(record, rbfmix::ErrorColumn::L2Lambda, rbfmix::RateParameter::MeshSize) << '\n';
  }
  std::cout << "wrote " << cfg.output_dir.string() << '\n';
  if (record.rows.empty()) return kExitNumerical;
  return record.failures.empty() ? kExitOk : kExitPartial;
}

int cmd_interp(const rbfmix::RunConfig& cfg) {
  const auto study = rbfmix::run_interpolation_study(cfg, cfg.output_dir);
  for (const auto& row : study.rows)
    std::cout << "n=" << row.n_per_side << " h_X=" << row.h_X << " L2 error=" << row.l2_error << '\n';
  std::cout << "L2 rate vs h_X: " << study.rate << (study.at_precision_floor ? " (precision floor)" : "") << '\n';
  return kExitOk;
}

int cmd_infsup(const rbfmix::RunConfig& cfg) {
  const auto probe = rbfmix::run_infsup_probe(cfg, cfg.output_dir);
  for (const auto& row : probe.rows) std::cout << "h_X=" << row.params.h_X << " k=" << row.params.k << " beta=" << row.beta << '\n';
  std::cout << "slope log(beta) vs log(h_X): " << probe.slope << '\n';
  return kExitOk;
}

int dispatch(const rbfmix::RunConfig& cfg) {
  switch (cfg.mode) {
    case rbfmix::RunMode::Solve: return cmd_solve(cfg);
    case rbfmix::RunMode::Sweep: return cmd_sweep(cfg);
    case rbfmix::RunMode::InterpolationStudy: return cmd_interp(cfg);
    case rbfmix::RunMode::InfsupProbe: return cmd_infsup(cfg);
  }
  return kExitConfig;
}

int cmd_eval(const std::string& path, const std::vector<double>& xy, const std::vector<double>& arc) {
  std::ifstream in(path);
  if (!in) throw rbfmix::ConfigError("cannot open solution dump " + path);
  const auto solution = rbfmix::read_solution(in);
  if (xy.size() % 2 != 0) throw rbfmix::ConfigError("--at expects x y pairs");
  std::cout << std::setprecision(17);
  for (std::size_t i = 0; i < xy.size(); i += 2) {
    const rbfmix::Point x(xy[i], xy[i + 1]);
    const auto g = solution.evaluate_grad_u(x);
    std::cout << "u(" << x.x() << ", " << x.y() << ") = " << solution.evaluate_u(x) << "  grad = (" << g.x() << ", "
              << g.y() << ")\n";
  }
  for (double s : arc) std::cout << "lambda(" << s << ") = " << solution.evaluate_lambda(s) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed RBF/Lagrange-multiplier Galerkin solver for the Dirichlet problem"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--out", opts.out, "Output directory (overrides output_dir)");
  app.add_option("--threads", opts.threads, "Concurrent sweep rows")->check(CLI::PositiveNumber);

  auto add_config_cmd = [&](const std::string& name, const std::string& help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", opts.config, "Config file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out, "Output directory (overrides output_dir)");
    cmd->add_option("--threads", opts.threads, "Concurrent sweep rows")->check(CLI::PositiveNumber);
    return cmd;
  };
  auto* run_cmd = add_config_cmd("run", "Run whatever the config's mode key selects");
  auto* solve_cmd = add_config_cmd("solve", "Single solve on the first configured grid");
  auto* sweep_cmd = add_config_cmd("sweep", "Convergence sweep over all configured grids");
  auto* interp_cmd = add_config_cmd("interp-study", "Native-space interpolation rate study");
  auto* infsup_cmd = add_config_cmd("infsup", "Discrete inf-sup estimate per grid");

  std::string solution_path;
  std::vector<double> at;
  std::vector<double> arc;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved solution dump");
  eval_cmd->add_option("--solution", solution_path, "solution.txt written by solve")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--at", at, "x y pairs at which to evaluate u");
  eval_cmd->add_option("--arc", arc, "arc-length positions at which to evaluate lambda");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return dispatch(prepare(opts, std::nullopt));
    if (*solve_cmd) return cmd_solve(prepare(opts, rbfmix::RunMode::Solve));
    if (*sweep_cmd) return cmd_sweep(prepare(opts, rbfmix::RunMode::Sweep));
    if (*interp_cmd) return cmd_interp(prepare(opts, rbfmix::RunMode::InterpolationStudy));
    if (*infsup_cmd) return cmd_infsup(prepare(opts, rbfmix::RunMode::InfsupProbe));
    if (*eval_cmd) return cmd_eval(solution_path, at, arc);
  } catch (const rbfmix::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rbfmix::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
