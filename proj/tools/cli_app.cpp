#include "cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "tgv/image_io.hpp"
#include "tgv/pipeline.hpp"

namespace tgv {

namespace {

struct SolverFlags {
  std::string solver = "cp";
  double tau = 0, sigma = 0, s = 0, t = 0, rho = 1.0;
  int pcg_iters = 2;
  bool no_precond = false;
  double gap_tol = 1e-3;
  long max_iters = 100000;
  unsigned seed = 1234;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--solver", f.solver, "cp, dr or dr-inexact")
      ->check(CLI::IsMember({"cp", "dr", "dr-inexact"}));
  cmd->add_option("--tau", f.tau, "CP primal step");
  cmd->add_option("--sigma", f.sigma, "CP dual step");
  cmd->add_option("--s", f.s, "DR dual step");
  cmd->add_option("--t", f.t, "DR primal step");
  cmd->add_option("--rho", f.rho, "DR relaxation in (0,2)");
  cmd->add_option("--pcg-iters", f.pcg_iters, "PCG iterations per inexact DR step");
  cmd->add_flag("--no-precond", f.no_precond, "disable the ichol preconditioner");
  cmd->add_option("--gap-tol", f.gap_tol, "relative duality-gap tolerance");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap");
  cmd->add_option("--seed", f.seed, "noise / power-iteration seed");
}

SolverConfig to_config(const SolverFlags& f) {
  SolverConfig cfg;
  if (f.solver == "cp") cfg.algorithm = Algorithm::ChambollePock;
  else if (f.solver == "dr") cfg.algorithm = Algorithm::DouglasRachfordExact;
  else cfg.algorithm = Algorithm::DouglasRachfordInexact;
  cfg.tau = f.tau;
  cfg.sigma = f.sigma;
  cfg.s = f.s;
  cfg.t = f.t;
  cfg.rho = f.rho;
  cfg.pcg_iters = f.pcg_iters;
  cfg.preconditioner = f.no_precond ? PrecondKind::None : PrecondKind::IcholBlock;
  cfg.gap_tol = f.gap_tol;
  cfg.max_iters = f.max_iters;
  cfg.seed = f.seed;
  return cfg;
}

struct ParamFlags {
  double alpha = 0, alpha0 = 0, alpha1 = 0, c = 0;
  double delta1 = -1, delta2 = -1;
};

void add_param_flags(CLI::App* cmd, ParamFlags& p) {
  cmd->add_option("--alpha", p.alpha, "regularization weight override");
  cmd->add_option("--alpha0", p.alpha0, "TGV weight on the symmetrized gradient");
  cmd->add_option("--alpha1", p.alpha1, "TGV weight on the gradient mismatch");
  cmd->add_option("--delta1", p.delta1, "data-fit constraint radius override");
  cmd->add_option("--delta2", p.delta2, "gradient constraint radius override");
  cmd->add_option("--c", p.c, "gradient-shrink fraction (DGTV)");
}

ParamOverrides to_overrides(const ParamFlags& p) {
  ParamOverrides o;
  o.alpha = p.alpha;
  o.alpha0 = p.alpha0;
  o.alpha1 = p.alpha1;
  o.delta1 = p.delta1;
  o.delta2 = p.delta2;
  o.c = p.c;
  return o;
}

std::vector<NamedImage> gather_images(const std::vector<std::string>& paths, int size) {
  if (paths.empty() || (paths.size() == 1 && paths[0] == "synthetic"))
    return synthetic_set(size, size);
  std::vector<NamedImage> imgs;
  for (const std::string& p : paths) {
    std::string id = p;
    const std::size_t slash = id.find_last_of('/');
    if (slash != std::string::npos) id = id.substr(slash + 1);
    const std::size_t dot = id.find_last_of('.');
    if (dot != std::string::npos) id = id.substr(0, dot);
    imgs.push_back({id, load_image(p)});
  }
  return imgs;
}

std::string format_psnr(double v) {
  if (std::isinf(v)) return "exact";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

int cmd_denoise(const std::string& method, const std::string& input,
                const std::string& output, const std::string& reference,
                const std::string& trace_path, const SolverFlags& sf,
                const ParamFlags& pf) {
  const ScalarField u0 = load_image(input);
  const MethodRun run = run_method(method, u0, to_config(sf), to_overrides(pf));
  save_image(run.u_hat, output);
  if (!trace_path.empty()) save_trace(run.trace, trace_path);
  std::string summary = "method=" + method + " iters=" + std::to_string(run.iters);
  char gap[32];
  std::snprintf(gap, sizeof gap, " gap=%.3e", run.final_gap);
  summary += gap;
  if (!reference.empty())
    summary += " psnr=" + format_psnr(psnr(run.u_hat, load_image(reference)));
  std::cout << summary << "\n";
  return run.converged ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Total-variation-family image denoising (constrained TGV models, "
               "Chambolle-Pock and preconditioned Douglas-Rachford solvers)"};
  app.require_subcommand(1);

  // denoise
  auto* den = app.add_subcommand("denoise", "denoise one PGM image");
  std::string method = "mtgv", input, output, reference, trace_path;
  den->add_option("--method", method, "rof, dgtv, dgtgv, tgv, mtgv, mtgv-w or ctgv")
      ->check(CLI::IsMember({"rof", "dgtv", "dgtgv", "tgv", "mtgv", "mtgv-w", "ctgv"}));
  den->add_option("input", input, "input PGM")->required();
  den->add_option("output", output, "output PGM")->required();
  den->add_option("--reference", reference, "clean image for PSNR reporting");
  den->add_option("--trace", trace_path, "write the gap trace CSV here");
  SolverFlags den_sf;
  ParamFlags den_pf;
  add_solver_flags(den, den_sf);
  add_param_flags(den, den_pf);

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "run the benchmark harness");
  std::vector<std::string> bench_images{"synthetic"};
  std::vector<double> bench_factors{0.05, 0.1, 0.25};
  std::vector<std::string> bench_methods{"dgtgv", "mtgv"};
  std::string bench_out = "benchmark.csv", bench_traces;
  int bench_size = 64;
  bench->add_option("--images", bench_images, "'synthetic' or PGM paths");
  bench->add_option("--size", bench_size, "synthetic image size");
  bench->add_option("--factors", bench_factors, "noise standard deviations")
      ->delimiter(',');
  bench->add_option("--methods", bench_methods, "methods to run")->delimiter(',');
  bench->add_option("--out", bench_out, "output CSV");
  bench->add_option("--traces", bench_traces, "directory for per-run gap traces");
  SolverFlags bench_sf;
  add_solver_flags(bench, bench_sf);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "parameter sweep for best PSNR");
  std::string sweep_method = "dgtgv", sweep_param = "alpha", sweep_out = "sweep.csv";
  std::vector<std::string> sweep_images{"synthetic"};
  std::vector<double> sweep_factors{0.05, 0.1, 0.25};
  std::vector<double> sweep_grid{0.5, 0.75, 1.0, 1.5, 2.0};
  int sweep_size = 64;
  sweep->add_option("--method", sweep_method, "method to sweep");
  sweep->add_option("--param", sweep_param, "alpha or c")
      ->check(CLI::IsMember({"alpha", "c"}));
  sweep->add_option("--grid", sweep_grid, "parameter grid")->delimiter(',');
  sweep->add_option("--images", sweep_images, "'synthetic' or PGM paths");
  sweep->add_option("--size", sweep_size, "synthetic image size");
  sweep->add_option("--factors", sweep_factors, "noise standard deviations")
      ->delimiter(',');
  sweep->add_option("--out", sweep_out, "output CSV");
  SolverFlags sweep_sf;
  add_solver_flags(sweep, sweep_sf);

  // traces
  auto* traces = app.add_subcommand("traces", "solve once and emit the gap trace");
  std::string tr_method = "mtgv", tr_input, tr_out = "trace.csv";
  traces->add_option("--method", tr_method, "method to run");
  traces->add_option("input", tr_input, "input PGM")->required();
  traces->add_option("--out", tr_out, "output trace CSV");
  SolverFlags tr_sf;
  ParamFlags tr_pf;
  add_solver_flags(traces, tr_sf);
  add_param_flags(traces, tr_pf);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (den->parsed())
      return cmd_denoise(method, input, output, reference, trace_path, den_sf, den_pf);
    if (bench->parsed()) {
      BenchmarkConfig bc;
      bc.solver = to_config(bench_sf);
      bc.seed = bench_sf.seed;
      bc.trace_dir = bench_traces;
      const auto rows = run_benchmark(gather_images(bench_images, bench_size),
                                      bench_factors, bench_methods, bc);
      save_csv(rows, bench_out);
      int failed = 0;
      for (const auto& r : rows)
        if (r.failed) {
          ++failed;
          std::cerr << "row " << r.image << "/" << r.factor << "/" << r.method
                    << " failed: " << r.error << "\n";
        }
      std::cout << "wrote " << rows.size() << " rows to " << bench_out << "\n";
      return failed == 0 ? 0 : 2;
    }
    if (sweep->parsed()) {
      BenchmarkConfig bc;
      bc.solver = to_config(sweep_sf);
      bc.seed = sweep_sf.seed;
      const auto entries = parameter_sweep(
          sweep_method, gather_images(sweep_images, sweep_size), sweep_factors,
          sweep_grid, sweep_param == "alpha" ? SweepParam::Alpha : SweepParam::C, bc);
      save_sweep_csv(entries, sweep_method, sweep_out);
      std::cout << "wrote sweep of " << entries.size() << " (image,factor) groups to "
                << sweep_out << "\n";
      return 0;
    }
    if (traces->parsed()) {
      const ScalarField u0 = load_image(tr_input);
      const MethodRun run = run_method(tr_method, u0, to_config(tr_sf), to_overrides(tr_pf));
      save_trace(run.trace, tr_out);
      std::cout << "method=" << tr_method << " iters=" << run.iters << " trace=" << tr_out
                << "\n";
      return run.converged ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace tgv
