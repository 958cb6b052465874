#include "tgv/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace tgv {

namespace {

bool finite_vec(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Stall window: no 0.1% improvement of the best gap within this many checks.
long stall_window_checks(long max_iters, int check_every) {
  return std::max<long>(200, max_iters / (20 * std::max(check_every, 1)));
}

struct GapMonitor {
  double gap_tol;
  long window;
  double best = std::numeric_limits<double>::infinity();
  long checks_since_best = 0;

  // returns true when iteration should stop
  bool note(double g, bool* converged, bool* stalled) {
    if (g <= gap_tol) {
      *converged = true;
      return true;
    }
    if (g < best * (1.0 - 1e-3)) {
      best = g;
      checks_since_best = 0;
    } else {
      if (++checks_since_best >= window) {
        *stalled = true;
        return true;
      }
    }
    return false;
  }
};

uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

CoreResult run_chambolle_pock_core(const FlatOps& ops, std::vector<double> x0,
                                   std::vector<double> y0, double tau, double sigma,
                                   double gap_tol, long max_iters, int check_every) {
  CoreResult res;
  std::vector<double> x = std::move(x0), y = std::move(y0);
  std::vector<double> xprev = x, xbar(ops.nx), ky(ops.ny), ktx(ops.nx);
  GapMonitor mon{gap_tol, stall_window_checks(max_iters, check_every)};
  long it = 0;
  while (it < max_iters) {
    ++it;
    for (int i = 0; i < ops.nx; ++i) xbar[i] = 2.0 * x[i] - xprev[i];
    ops.apply_K(xbar.data(), ky.data());
    for (int i = 0; i < ops.ny; ++i) y[i] += sigma * ky[i];
    ops.prox_gc(y, sigma);
    ops.apply_Kt(y.data(), ktx.data());
    xprev = x;
    for (int i = 0; i < ops.nx; ++i) x[i] -= tau * ktx[i];
    ops.prox_f(x, tau);
    if (it % check_every == 0 || it == max_iters) {
      if (!finite_vec(x) || !finite_vec(y)) {
        res.diverged = true;
        res.message = "non-finite iterate at iteration " + std::to_string(it);
        break;
      }
      const double g = ops.relative_gap(x, y);
      res.trace.emplace_back(it, g);
      if (std::isnan(g)) {
        res.diverged = true;
        res.message = "non-finite gap at iteration " + std::to_string(it);
        break;
      }
      if (mon.note(g, &res.converged, &res.stalled)) break;
    }
  }
  if (res.trace.empty()) res.trace.emplace_back(it, ops.relative_gap(x, y));
  res.iterations = it;
  res.x = std::move(x);
  res.y = std::move(y);
  return res;
}

CoreResult run_douglas_rachford_core(
    const FlatOps& ops, std::vector<double> x0, std::vector<double> y0, double s,
    double t, double rho,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        linear_solve,
    double gap_tol, long max_iters, int check_every) {
  CoreResult res;
  std::vector<double> zx = std::move(x0), zy = std::move(y0);
  std::vector<double> xb(ops.nx), yb(ops.ny), rhs(ops.nx), ktm(ops.nx), km(ops.ny);
  std::vector<double> w(ops.nx, 0.0), ya(ops.ny);
  GapMonitor mon{gap_tol, stall_window_checks(max_iters, check_every)};
  long it = 0;
  while (it < max_iters) {
    ++it;
    xb = zx;
    ops.prox_f(xb, t);
    yb = zy;
    ops.prox_gc(yb, s);
    // resolvent of the skew block via the Schur complement:
    // w = (I + st K^T K)^{-1} (rx - t K^T ry), ya = ry + s K w
    for (int i = 0; i < ops.ny; ++i) ya[i] = 2.0 * yb[i] - zy[i];  // ry
    ops.apply_Kt(ya.data(), ktm.data());
    for (int i = 0; i < ops.nx; ++i) rhs[i] = 2.0 * xb[i] - zx[i] - t * ktm[i];
    linear_solve(rhs, w);
    ops.apply_K(w.data(), km.data());
    for (int i = 0; i < ops.ny; ++i) ya[i] += s * km[i];
    // ||F(z)-z|| in the metric of the rescaled iteration (dual weighted by
    // t/s), where the operator is nonexpansive
    double fp_resid = 0.0;
    for (int i = 0; i < ops.nx; ++i) {
      const double d = w[i] - xb[i];
      fp_resid += d * d;
      zx[i] += rho * d;
    }
    const double dual_weight = t / s;
    for (int i = 0; i < ops.ny; ++i) {
      const double d = ya[i] - yb[i];
      fp_resid += dual_weight * d * d;
      zy[i] += rho * d;
    }
    if (it % check_every == 0 || it == max_iters) {
      res.fp_residuals.emplace_back(it, std::sqrt(fp_resid));
      if (!finite_vec(xb) || !finite_vec(yb) || !finite_vec(zx) || !finite_vec(zy)) {
        res.diverged = true;
        res.message = "non-finite iterate at iteration " + std::to_string(it);
        break;
      }
      const double g = ops.relative_gap(xb, yb);
      res.trace.emplace_back(it, g);
      if (std::isnan(g)) {
        res.diverged = true;
        res.message = "non-finite gap at iteration " + std::to_string(it);
        break;
      }
      if (mon.note(g, &res.converged, &res.stalled)) break;
    }
  }
  if (res.trace.empty()) res.trace.emplace_back(it, ops.relative_gap(xb, yb));
  res.iterations = it;
  res.x = std::move(xb);  // monitored (post-prox) state
  res.y = std::move(yb);
  return res;
}

LinearResolvent::LinearResolvent(Formulation f, int rows, int cols, double s,
                                 double t, PrecondKind precond, bool uw_scaled_by_st) {
  const double st = s * t;
  a_ = assemble_ktk(f, rows, cols, st);
  use_precond_ = precond == PrecondKind::IcholBlock;
  if (!use_precond_) return;
  const int n = rows * cols;
  switch (f) {
    case Formulation::U:
      blocks_.emplace_back(0, ichol_with_shift(
                                  assemble_precond_target(PrecondBlock::UV_U, rows, cols, st)));
      break;
    case Formulation::UV:
      blocks_.emplace_back(0, ichol_with_shift(
                                  assemble_precond_target(PrecondBlock::UV_U, rows, cols, st)));
      blocks_.emplace_back(n, ichol_with_shift(
                                  assemble_precond_target(PrecondBlock::UV_V, rows, cols, st)));
      break;
    case Formulation::UW:
      blocks_.emplace_back(0, ichol_with_shift(assemble_precond_target(
                                  PrecondBlock::UW_U, rows, cols, st, uw_scaled_by_st)));
      blocks_.emplace_back(n, ichol_with_shift(
                                  assemble_precond_target(PrecondBlock::UW_W, rows, cols, st)));
      break;
    case Formulation::V:
      blocks_.emplace_back(0, ichol_with_shift(
                                  assemble_precond_target(PrecondBlock::V, rows, cols, st)));
      break;
  }
}

void LinearResolvent::apply_precond(const double* r, double* z) const {
  if (!use_precond_) {
    std::copy(r, r + a_.nrows, z);
    return;
  }
  for (const auto& [offset, factor] : blocks_)
    precond_apply(factor, r + offset, z + offset);
}

int pcg_solve(const SparseOperator& a,
              const std::function<void(const double*, double*)>& precond,
              const std::vector<double>& rhs, std::vector<double>& x,
              int max_iters, double rel_tol, bool* breakdown) {
  const int n = a.nrows;
  if (static_cast<int>(rhs.size()) != n) throw std::invalid_argument("pcg: rhs size");
  if (static_cast<int>(x.size()) != n) x.assign(n, 0.0);
  if (breakdown) *breakdown = false;
  std::vector<double> r(n), z(n), p(n), ap(n);
  a.multiply(x.data(), r.data());
  for (int i = 0; i < n; ++i) r[i] = rhs[i] - r[i];
  double bnorm = 0.0;
  for (double v : rhs) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return 0;
  }
  const double target = rel_tol >= 0.0 ? rel_tol * bnorm : -1.0;
  precond(r.data(), z.data());
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];
  for (int step = 0; step < max_iters; ++step) {
    if (target >= 0.0) {
      double rnorm = 0.0;
      for (double v : r) rnorm += v * v;
      if (std::sqrt(rnorm) <= target) return step;
    }
    a.multiply(p.data(), ap.data());
    double pap = 0.0;
    for (int i = 0; i < n; ++i) pap += p[i] * ap[i];
    if (!(pap > 0.0) || !std::isfinite(pap) || rz == 0.0) {
      if (breakdown) *breakdown = true;  // keep best iterate
      return step;
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    precond(r.data(), z.data());
    double rz_new = 0.0;
    for (int i = 0; i < n; ++i) rz_new += r[i] * z[i];
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return max_iters;
}

void LinearResolvent::solve(const std::vector<double>& rhs, std::vector<double>& x,
                            ResolventMode mode, int pcg_iters) {
  if (static_cast<int>(rhs.size()) != a_.nrows)
    throw std::invalid_argument("resolvent: rhs size");
  auto precond = [this](const double* r, double* z) { apply_precond(r, z); };
  bool broke = false;
  if (mode == ResolventMode::Exact) {
    const int cap = std::max(1000, 10 * a_.nrows);
    pcg_solve(a_, precond, rhs, x, cap, 1e-10, &broke);
    if (!broke) {
      // verify the residual actually met the tolerance
      std::vector<double> r(a_.nrows);
      a_.multiply(x.data(), r.data());
      double rn = 0.0, bn = 0.0;
      for (int i = 0; i < a_.nrows; ++i) {
        const double d = rhs[i] - r[i];
        rn += d * d;
        bn += rhs[i] * rhs[i];
      }
      if (bn > 0.0 && std::sqrt(rn) > 1e-9 * std::sqrt(bn))
        throw std::runtime_error("resolvent: exact solve did not reach tolerance");
    }
  } else {
    pcg_solve(a_, precond, rhs, x, pcg_iters, -1.0, &broke);
  }
  breakdown_ = breakdown_ || broke;
}

void apply_default_steps(SolverConfig& cfg, Variant v) {
  // ||K||^2 bounds: 8 for grad/symgrad alone, 12 for the (u,v) block
  // operator (rounded bound), 72 for the (u,w) block operator.
  double knorm2 = 8.0;
  switch (formulation_of(v)) {
    case Formulation::U:
    case Formulation::V: knorm2 = 8.0; break;
    case Formulation::UV: knorm2 = 12.0; break;
    case Formulation::UW: knorm2 = 72.0; break;
  }
  if (cfg.tau <= 0.0) {
    if (v == Variant::Tgv) cfg.tau = 0.008;
    else if (v == Variant::Mtgv) cfg.tau = 0.004;
    else cfg.tau = 1.0 / std::sqrt(knorm2);
  }
  if (cfg.sigma <= 0.0) cfg.sigma = 1.0 / (cfg.tau * knorm2);
  if (cfg.s <= 0.0) cfg.s = 60.0;
  if (cfg.t <= 0.0) {
    switch (v) {
      case Variant::Tgv: cfg.t = 0.28; break;
      case Variant::MtgvW: cfg.t = 0.04; break;
      default: cfg.t = 0.1; break;
    }
  }
}

namespace {

FlatOps make_flat_ops(const Model& model) {
  FlatOps ops;
  ops.nx = model.primal_size();
  ops.ny = model.dual_size();
  ops.apply_K = [&model](const double* x, double* y) {
    const DualState d = model.apply_K(model.unpack_primal(x));
    model.pack_dual(d, y);
  };
  ops.apply_Kt = [&model](const double* y, double* x) {
    const PrimalState p = model.apply_K_adjoint(model.unpack_dual(y));
    model.pack_primal(p, x);
  };
  ops.prox_f = [&model](std::vector<double>& x, double tau) {
    const PrimalState p = model.prox_F(model.unpack_primal(x.data()), tau);
    model.pack_primal(p, x.data());
  };
  ops.prox_gc = [&model](std::vector<double>& y, double sigma) {
    const DualState d = model.prox_G_conj(model.unpack_dual(y.data()), sigma);
    model.pack_dual(d, y.data());
  };
  ops.relative_gap = [&model](const std::vector<double>& x,
                              const std::vector<double>& y) {
    return model.relative_gap(model.unpack_primal(x.data()),
                              model.unpack_dual(y.data()));
  };
  return ops;
}

SolveReport finish_report(const Model& model, CoreResult&& core, double seconds) {
  SolveReport rep;
  rep.iterations = core.iterations;
  rep.wall_time = seconds;
  rep.gap_trace = std::move(core.trace);
  rep.primal = model.unpack_primal(core.x.data());
  rep.dual = model.unpack_dual(core.y.data());
  rep.converged = core.converged;
  rep.diverged = core.diverged;
  rep.stalled = core.stalled;
  rep.message = std::move(core.message);
  return rep;
}

void validate_common(const SolverConfig& cfg) {
  if (!(cfg.gap_tol > 0.0)) throw std::invalid_argument("gap_tol must be > 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (cfg.gap_check_every < 1) throw std::invalid_argument("gap_check_every must be >= 1");
  if (cfg.pcg_iters < 1) throw std::invalid_argument("pcg_iters must be >= 1");
}

}  // namespace

SolveReport chambolle_pock(const ProblemSpec& spec, SolverConfig cfg) {
  const Model model(spec);
  apply_default_steps(cfg, spec.variant);
  validate_common(cfg);
  if (cfg.check_step_sizes) {
    const double est = power_iteration_norm(spec, 60, cfg.seed);
    if (cfg.tau * cfg.sigma * est > 1.0 + 1e-6)
      throw std::invalid_argument("chambolle_pock: tau*sigma*||K||^2 > 1 (estimate " +
                                  std::to_string(est) + ")");
  }
  const FlatOps ops = make_flat_ops(model);
  std::vector<double> x0(ops.nx), y0(ops.ny, 0.0);
  model.pack_primal(model.initial_primal(), x0.data());
  const auto t0 = std::chrono::steady_clock::now();
  CoreResult core =
      run_chambolle_pock_core(ops, std::move(x0), std::move(y0), cfg.tau, cfg.sigma,
                              cfg.gap_tol, cfg.max_iters, cfg.gap_check_every);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finish_report(model, std::move(core), secs);
}

SolveReport douglas_rachford(const ProblemSpec& spec, SolverConfig cfg) {
  const Model model(spec);
  apply_default_steps(cfg, spec.variant);
  validate_common(cfg);
  if (!(cfg.rho > 0.0 && cfg.rho < 2.0))
    throw std::invalid_argument("douglas_rachford: rho must lie in (0,2)");
  const bool inexact = cfg.algorithm == Algorithm::DouglasRachfordInexact;
  LinearResolvent resolvent(formulation_of(spec.variant), spec.rows(), spec.cols(),
                            cfg.s, cfg.t,
                            inexact ? cfg.preconditioner : PrecondKind::IcholBlock,
                            cfg.uw_precond_scaled_by_st);
  const FlatOps ops = make_flat_ops(model);
  std::vector<double> warm(ops.nx, 0.0);
  auto linear_solve = [&](const std::vector<double>& rhs, std::vector<double>& w) {
    w = warm;  // warm start from the previous solve
    resolvent.solve(rhs, w, inexact ? ResolventMode::Pcg : ResolventMode::Exact,
                    cfg.pcg_iters);
    warm = w;
  };
  std::vector<double> x0(ops.nx), y0(ops.ny, 0.0);
  model.pack_primal(model.initial_primal(), x0.data());
  const auto t0 = std::chrono::steady_clock::now();
  CoreResult core = run_douglas_rachford_core(ops, std::move(x0), std::move(y0), cfg.s,
                                              cfg.t, cfg.rho, linear_solve, cfg.gap_tol,
                                              cfg.max_iters, cfg.gap_check_every);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  SolveReport rep = finish_report(model, std::move(core), secs);
  rep.pcg_warning = resolvent.breakdown_seen();
  return rep;
}

SolveReport solve(const ProblemSpec& spec, SolverConfig cfg) {
  switch (cfg.algorithm) {
    case Algorithm::ChambollePock: return chambolle_pock(spec, cfg);
    case Algorithm::DouglasRachfordExact:
    case Algorithm::DouglasRachfordInexact: return douglas_rachford(spec, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

double power_iteration_core(const std::function<void(const double*, double*)>& op,
                            int n, int iters, unsigned seed) {
  std::vector<double> x(n), next(n);
  uint64_t state =
      0x243F6A8885A308D3ull ^ (static_cast<uint64_t>(seed) * 0x9E3779B97F4A7C15ull);
  for (int i = 0; i < n; ++i) {
    const uint64_t bits = splitmix64(state);
    x[i] = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;  // (-1,1)
  }
  double lambda = 0.0;
  for (int k = 0; k < iters; ++k) {
    double nrm = 0.0;
    for (double v : x) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    for (double& v : x) v /= nrm;
    op(x.data(), next.data());
    lambda = 0.0;
    for (int i = 0; i < n; ++i) lambda += x[i] * next[i];
    x.swap(next);
  }
  return lambda;
}

double power_iteration_norm(const ProblemSpec& spec, int iters, unsigned seed) {
  const Model model(spec);
  const int ny = model.dual_size();
  std::vector<double> y(ny);
  auto ktk = [&](const double* in, double* out) {
    const DualState d = model.apply_K(model.unpack_primal(in));
    model.pack_dual(d, y.data());
    const PrimalState p = model.apply_K_adjoint(model.unpack_dual(y.data()));
    model.pack_primal(p, out);
  };
  return power_iteration_core(ktk, model.primal_size(), iters, seed);
}

}  // namespace tgv
