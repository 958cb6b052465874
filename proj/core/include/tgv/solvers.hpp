#ifndef TGV_SOLVERS_HPP
#define TGV_SOLVERS_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tgv/assembly.hpp"
#include "tgv/ichol.hpp"
#include "tgv/problems.hpp"

namespace tgv {

enum class Algorithm { ChambollePock, DouglasRachfordExact, DouglasRachfordInexact };
enum class PrecondKind { None, IcholBlock };

struct SolverConfig {
  Algorithm algorithm = Algorithm::ChambollePock;
  // Chambolle-Pock step sizes; 0 selects the per-variant defaults.
  double tau = 0.0, sigma = 0.0;
  // Douglas-Rachford step sizes; 0 selects the per-variant defaults.
  double s = 0.0, t = 0.0;
  double rho = 1.0;  // relaxation, must lie in (0,2)
  int pcg_iters = 2;
  PrecondKind preconditioner = PrecondKind::IcholBlock;
  bool uw_precond_scaled_by_st = false;  // I + st*H^T H instead of I + H^T H
  double gap_tol = 1e-3;                 // relative modified gap
  long max_iters = 100000;
  int gap_check_every = 10;
  unsigned seed = 0;
  bool check_step_sizes = true;  // CP: verify tau*sigma*||K||^2 <= 1
};

struct SolveReport {
  long iterations = 0;
  double wall_time = 0.0;
  std::vector<std::pair<long, double>> gap_trace;  // (iter, relative gap)
  PrimalState primal;
  DualState dual;
  bool converged = false;
  bool diverged = false;
  bool stalled = false;
  bool pcg_warning = false;
  std::string message;
};

// Fills in the per-variant default step sizes for fields left at 0.
void apply_default_steps(SolverConfig& cfg, Variant v);

SolveReport chambolle_pock(const ProblemSpec& spec, SolverConfig cfg);
SolveReport douglas_rachford(const ProblemSpec& spec, SolverConfig cfg);
SolveReport solve(const ProblemSpec& spec, SolverConfig cfg);

// ||K||^2 estimate via power iteration on K^T K; deterministic given seed.
double power_iteration_norm(const ProblemSpec& spec, int iters = 200,
                            unsigned seed = 0);
// Power iteration on an arbitrary symmetric PSD operator apply: x -> Op x.
double power_iteration_core(const std::function<void(const double*, double*)>& op,
                            int n, int iters, unsigned seed);

// Textbook preconditioned conjugate gradients on an SPD matrix. Runs until
// ||r|| <= rel_tol*||b|| or max_iters steps (rel_tol < 0 disables the
// residual test). Starts from x (warm start). Returns the number of
// iterations taken; a nonpositive-curvature breakdown keeps the best iterate
// and sets *breakdown.
int pcg_solve(const SparseOperator& a,
              const std::function<void(const double*, double*)>& precond,
              const std::vector<double>& rhs, std::vector<double>& x,
              int max_iters, double rel_tol, bool* breakdown = nullptr);

// One SPD solve with A = I + st*K^T K (the Schur-complement resolvent step).
enum class ResolventMode { Exact, Pcg };
class LinearResolvent {
 public:
  LinearResolvent(Formulation f, int rows, int cols, double s, double t,
                  PrecondKind precond, bool uw_scaled_by_st = false);

  // Exact mode: PCG to relative residual <= 1e-10. Pcg mode: exactly
  // pcg_iters standard PCG iterations. x holds the warm start on entry and
  // the solution on exit. On a zero-curvature breakdown the best iterate is
  // kept and the breakdown flag raised.
  void solve(const std::vector<double>& rhs, std::vector<double>& x,
             ResolventMode mode, int pcg_iters = 1);

  bool breakdown_seen() const { return breakdown_; }
  int size() const { return a_.nrows; }
  const SparseOperator& matrix() const { return a_; }
  void apply_precond(const double* r, double* z) const;

 private:
  SparseOperator a_;
  std::vector<std::pair<int, CholFactor>> blocks_;  // (offset, factor)
  bool use_precond_ = false;
  bool breakdown_ = false;
};

// Generic cores over flat states; the public solvers bind them to a Model.
// Exposed so degenerate operators (e.g. K = 0) can be exercised directly.
struct FlatOps {
  int nx = 0, ny = 0;
  std::function<void(const double*, double*)> apply_K;       // y = K x
  std::function<void(const double*, double*)> apply_Kt;      // x = K^T y
  std::function<void(std::vector<double>&, double)> prox_f;  // in place, step
  std::function<void(std::vector<double>&, double)> prox_gc;
  std::function<double(const std::vector<double>&, const std::vector<double>&)>
      relative_gap;
};

struct CoreResult {
  long iterations = 0;
  std::vector<std::pair<long, double>> trace;
  // Douglas-Rachford only: ||F(z)-z|| recorded at the same cadence as trace.
  std::vector<std::pair<long, double>> fp_residuals;
  std::vector<double> x, y;
  bool converged = false, diverged = false, stalled = false;
  std::string message;
};

CoreResult run_chambolle_pock_core(const FlatOps& ops, std::vector<double> x0,
                                   std::vector<double> y0, double tau, double sigma,
                                   double gap_tol, long max_iters, int check_every);

CoreResult run_douglas_rachford_core(
    const FlatOps& ops, std::vector<double> x0, std::vector<double> y0, double s,
    double t, double rho,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>&
        linear_solve,
    double gap_tol, long max_iters, int check_every);

}  // namespace tgv

#endif
