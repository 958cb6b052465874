#ifndef TGV_PIPELINE_HPP
#define TGV_PIPELINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tgv/problems.hpp"
#include "tgv/solvers.hpp"

namespace tgv {

struct NoiseEstimate {
  double sigma_hat = 0.0;   // per-pixel standard deviation
  double delta1_hat = 0.0;  // sigma_hat * sqrt(pixel count)
};

// MAD of the half-scaled diagonal high-pass residual
// (u_{i+1,j+1}-u_{i+1,j}-u_{i,j+1}+u_{i,j})/2, divided by 0.6745.
NoiseEstimate estimate_noise_mad(const ScalarField& u0);

// Parameter-free defaults: delta1 = sigma*sqrt(k), c = 0.99,
// delta2 = c*|||grad u0|||_1 (DGTV), alpha = 1 (DGTGV), alpha = 2 (MTGV),
// (alpha0, alpha1) = (2, 1) (TGV).
ProblemSpec default_params(Variant v, const ScalarField& u0, const NoiseEstimate& est);

enum class TwoStageKind { Dgtv, Dgtgv };

struct TwoStageResult {
  ScalarField u_hat;
  VectorField v_hat;
  SolveReport stage1;  // gradient denoising
  SolveReport stage2;  // image denoising
};

TwoStageResult run_two_stage(TwoStageKind kind, const ScalarField& u0,
                             const SolverConfig& cfg);

// 10*log10(peak^2 * M*N / ||u - ref||^2), peak = 1. Returns +infinity for
// identical images (callers format it as "exact").
double psnr(const ScalarField& u, const ScalarField& ref);

// Counter-based deterministic Gaussian noise, keyed by (image id, factor,
// seed); pixel k depends only on (key, k).
uint64_t noise_key(const std::string& image_id, double factor, unsigned seed);
double gaussian_sample(uint64_t key, uint64_t counter);
ScalarField add_gaussian_noise(const ScalarField& clean, double sigma, uint64_t key);

struct NamedImage {
  std::string id;
  ScalarField image;
};

// Regenerated synthetic test set: affine ramp, disk ("eye"-like), and
// piecewise-constant blocks.
ScalarField synthetic_image(const std::string& name, int rows, int cols);
std::vector<NamedImage> synthetic_set(int rows, int cols);

struct BenchmarkRow {
  std::string image;
  double factor = 0.0;
  std::string method;
  double alpha = 0.0;
  double psnr_db = 0.0;
  double time_s = 0.0;
  long iters = 0;
  bool failed = false;
  std::string error;
};

struct BenchmarkConfig {
  SolverConfig solver;
  unsigned seed = 1234;
  std::string trace_dir;  // when nonempty, per-run gap traces are written here
};

// methods: any of "dgtv", "dgtgv", "mtgv", "tgv", "rof". Rows are ordered by
// (image, factor, method); each row's noise depends only on (image id,
// factor, seed). Per-row failures are recorded and the run continues.
std::vector<BenchmarkRow> run_benchmark(const std::vector<NamedImage>& images,
                                        const std::vector<double>& factors,
                                        const std::vector<std::string>& methods,
                                        const BenchmarkConfig& cfg);

// Optional overrides applied on top of the parameter-free defaults.
struct ParamOverrides {
  double alpha = 0.0;   // 0 keeps the default
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double delta1 = -1.0;  // negative keeps the default
  double delta2 = -1.0;
  double c = 0.0;
};

// Solve one method on an already-noisy image with parameter-free defaults.
struct MethodRun {
  ScalarField u_hat;
  double alpha_used = 0.0;
  long iters = 0;
  double time_s = 0.0;
  double final_gap = 0.0;
  bool converged = false;
  std::vector<std::pair<long, double>> trace;
};
MethodRun run_method(const std::string& method, const ScalarField& u0,
                     const SolverConfig& cfg, const ParamOverrides& over = {});

struct SweepPoint {
  double param = 0.0;
  double psnr_db = 0.0;
};
struct SweepEntry {
  std::string image;
  double factor = 0.0;
  double best_param = 0.0;
  double best_psnr = 0.0;
  std::vector<SweepPoint> grid;
};

enum class SweepParam { Alpha, C };

// Best alpha (or c, for DGTV) per (image, factor) by PSNR against the clean
// image.
std::vector<SweepEntry> parameter_sweep(const std::string& method,
                                        const std::vector<NamedImage>& images,
                                        const std::vector<double>& factors,
                                        const std::vector<double>& grid,
                                        SweepParam param, const BenchmarkConfig& cfg);

}  // namespace tgv

#endif
