#include "tgv/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "tgv/grid_ops.hpp"

namespace tgv {

namespace {

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

int worker_threads(std::size_t tasks) {
  const char* env = std::getenv("TGVD_THREADS");
  long n = 1;
  if (env) {
    n = std::strtol(env, nullptr, 10);
    if (n < 1) n = 1;
  }
  return static_cast<int>(std::min<long>(n, static_cast<long>(tasks)));
}

}  // namespace

NoiseEstimate estimate_noise_mad(const ScalarField& u0) {
  if (u0.rows < 4 || u0.cols < 4)
    throw std::invalid_argument("estimate_noise_mad: image must be at least 4x4");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(u0.rows - 1) * (u0.cols - 1));
  for (int i = 0; i + 1 < u0.rows; ++i)
    for (int j = 0; j + 1 < u0.cols; ++j)
      d.push_back(0.5 * std::fabs(u0.at(i + 1, j + 1) - u0.at(i + 1, j) -
                                  u0.at(i, j + 1) + u0.at(i, j)));
  const std::size_t n = d.size();
  const std::size_t mid = n / 2;
  std::nth_element(d.begin(), d.begin() + mid, d.end());
  double med = d[mid];
  if (n % 2 == 0) {
    const double hi = med;
    std::nth_element(d.begin(), d.begin() + (mid - 1), d.begin() + mid);
    med = 0.5 * (d[mid - 1] + hi);
  }
  NoiseEstimate est;
  est.sigma_hat = med / 0.6745;
  est.delta1_hat = est.sigma_hat * std::sqrt(static_cast<double>(u0.pixels()));
  return est;
}

ProblemSpec default_params(Variant v, const ScalarField& u0, const NoiseEstimate& est) {
  ProblemSpec spec;
  spec.variant = v;
  spec.u0 = u0;
  spec.c = 0.99;
  switch (v) {
    case Variant::Dgtv1:
      spec.delta2 = spec.c * mixed_norm_l1(grad(u0));
      break;
    case Variant::Dgtgv1:
      spec.alpha = 1.0;
      break;
    case Variant::Dgtv2:
    case Variant::RofConstrained:
      spec.delta1 = est.delta1_hat;
      break;
    case Variant::Tgv:
      spec.alpha0 = 2.0;
      spec.alpha1 = 1.0;
      break;
    case Variant::Mtgv:
    case Variant::MtgvW:
      spec.delta1 = est.delta1_hat;
      spec.alpha = 2.0;
      break;
    case Variant::Ctgv:
      spec.delta1 = est.delta1_hat;
      spec.delta2 = spec.c * mixed_norm_l1(grad(u0));
      break;
  }
  return spec;
}

TwoStageResult run_two_stage(TwoStageKind kind, const ScalarField& u0,
                             const SolverConfig& cfg) {
  const NoiseEstimate est = estimate_noise_mad(u0);
  TwoStageResult out;
  SolverConfig stage_cfg = cfg;
  if (kind == TwoStageKind::Dgtv) {
    const ProblemSpec s1 = default_params(Variant::Dgtv1, u0, est);
    out.stage1 = solve(s1, stage_cfg);
    out.v_hat = out.stage1.primal.vec;
  } else {
    const ProblemSpec s1 = default_params(Variant::Dgtgv1, u0, est);
    out.stage1 = solve(s1, stage_cfg);
    out.v_hat = sub(grad(u0), out.stage1.primal.vec);  // v = grad u0 - w
  }
  ProblemSpec s2 = default_params(Variant::Dgtv2, u0, est);
  s2.vhat = out.v_hat;
  out.stage2 = solve(s2, stage_cfg);
  out.u_hat = out.stage2.primal.u;
  return out;
}

double psnr(const ScalarField& u, const ScalarField& ref) {
  require_same_shape(u, ref);
  double err2 = 0.0;
  for (std::size_t k = 0; k < u.data.size(); ++k) {
    const double d = u.data[k] - ref.data[k];
    err2 += d * d;
  }
  if (err2 == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(u.pixels()) / err2);
}

uint64_t noise_key(const std::string& image_id, double factor, unsigned seed) {
  uint64_t bits;
  static_assert(sizeof(double) == sizeof(uint64_t));
  std::memcpy(&bits, &factor, sizeof bits);
  return mix64(fnv1a(image_id) ^ mix64(bits) ^ mix64(0x5851F42D4C957F2Dull + seed));
}

double gaussian_sample(uint64_t key, uint64_t counter) {
  const uint64_t h1 = mix64(key ^ mix64(2 * counter + 1));
  const uint64_t h2 = mix64(key ^ mix64(2 * counter + 2));
  const double u1 = (static_cast<double>(h1 >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;          // [0,1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

ScalarField add_gaussian_noise(const ScalarField& clean, double sigma, uint64_t key) {
  ScalarField noisy = clean;
  for (std::size_t k = 0; k < noisy.data.size(); ++k)
    noisy.data[k] += sigma * gaussian_sample(key, k);
  return noisy;
}

ScalarField synthetic_image(const std::string& name, int rows, int cols) {
  ScalarField u(rows, cols);
  if (name == "affine") {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        u.at(i, j) = 0.15 + 0.7 * (0.6 * i / (rows - 1) + 0.4 * j / (cols - 1));
  } else if (name == "eye") {
    const double ci = 0.5 * (rows - 1), cj = 0.5 * (cols - 1);
    const double R = 0.48 * std::min(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        const double r = std::sqrt((i - ci) * (i - ci) + (j - cj) * (j - cj)) / R;
        double v = 0.25 + 0.55 * std::exp(-3.0 * r * r);
        if (r > 0.55 && r < 0.8) v += 0.15;
        u.at(i, j) = v;
      }
  } else if (name == "blocks") {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        double v = i < rows / 2 ? (j < cols / 2 ? 0.25 : 0.55)
                                : (j < cols / 2 ? 0.7 : 0.4);
        if (i >= rows * 3 / 10 && i < rows * 11 / 20 && j >= cols * 3 / 10 &&
            j < cols * 11 / 20)
          v = 0.85;
        u.at(i, j) = v;
      }
  } else {
    throw std::invalid_argument("synthetic_image: unknown image '" + name + "'");
  }
  return u;
}

std::vector<NamedImage> synthetic_set(int rows, int cols) {
  return {{"affine", synthetic_image("affine", rows, cols)},
          {"eye", synthetic_image("eye", rows, cols)},
          {"blocks", synthetic_image("blocks", rows, cols)}};
}

MethodRun run_method(const std::string& method, const ScalarField& u0,
                     const SolverConfig& cfg, const ParamOverrides& over) {
  const NoiseEstimate est = estimate_noise_mad(u0);
  MethodRun out;
  auto apply_over = [&](ProblemSpec& s) {
    if (over.alpha > 0.0) s.alpha = over.alpha;
    if (over.alpha0 > 0.0) s.alpha0 = over.alpha0;
    if (over.alpha1 > 0.0) s.alpha1 = over.alpha1;
    if (over.delta1 >= 0.0) s.delta1 = over.delta1;
    if (over.delta2 >= 0.0) s.delta2 = over.delta2;
    if (over.c > 0.0) {  // c sweeps may exceed (0,1); fold into delta2 directly
      const double d2 = over.c * mixed_norm_l1(grad(u0));
      if (over.c < 1.0) s.c = over.c;
      if (s.variant == Variant::Dgtv1 || s.variant == Variant::Ctgv) s.delta2 = d2;
    }
  };
  auto record = [&](const SolveReport& rep) {
    out.iters += rep.iterations;
    out.time_s += rep.wall_time;
    out.final_gap = rep.gap_trace.back().second;
    out.trace = rep.gap_trace;
    out.converged = rep.converged;
  };
  if (method == "dgtv" || method == "dgtgv") {
    const TwoStageKind kind = method == "dgtv" ? TwoStageKind::Dgtv : TwoStageKind::Dgtgv;
    // inline two-stage so stage-1 overrides apply
    ProblemSpec s1 = default_params(
        kind == TwoStageKind::Dgtv ? Variant::Dgtv1 : Variant::Dgtgv1, u0, est);
    apply_over(s1);
    const SolveReport r1 = solve(s1, cfg);
    VectorField vhat = kind == TwoStageKind::Dgtv
                           ? r1.primal.vec
                           : sub(grad(u0), r1.primal.vec);
    ProblemSpec s2 = default_params(Variant::Dgtv2, u0, est);
    if (over.delta1 >= 0.0) s2.delta1 = over.delta1;
    s2.vhat = std::move(vhat);
    const SolveReport r2 = solve(s2, cfg);
    record(r1);
    record(r2);
    out.converged = r1.converged && r2.converged;
    out.u_hat = r2.primal.u;
    out.alpha_used = kind == TwoStageKind::Dgtv ? s1.c : s1.alpha;
    return out;
  }
  Variant v;
  if (method == "mtgv") v = Variant::Mtgv;
  else if (method == "mtgv-w") v = Variant::MtgvW;
  else if (method == "tgv") v = Variant::Tgv;
  else if (method == "ctgv") v = Variant::Ctgv;
  else if (method == "rof") v = Variant::RofConstrained;
  else throw std::invalid_argument("unknown method '" + method + "'");
  ProblemSpec spec = default_params(v, u0, est);
  apply_over(spec);
  const SolveReport rep = solve(spec, cfg);
  record(rep);
  out.u_hat = rep.primal.u;
  out.alpha_used = v == Variant::Tgv ? spec.alpha0 : spec.alpha;
  return out;
}

namespace {

void write_trace_file(const std::string& path,
                      const std::vector<std::pair<long, double>>& trace) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "iter,relative_gap\n";
  char buf[64];
  for (const auto& [it, g] : trace) {
    std::snprintf(buf, sizeof buf, "%ld,%.12e\n", it, g);
    os << buf;
  }
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const std::vector<NamedImage>& images,
                                        const std::vector<double>& factors,
                                        const std::vector<std::string>& methods,
                                        const BenchmarkConfig& cfg) {
  struct Task {
    const NamedImage* img;
    double factor;
    std::string method;
  };
  std::vector<Task> tasks;
  for (const NamedImage& img : images)
    for (double f : factors)
      for (const std::string& m : methods) tasks.push_back({&img, f, m});
  std::vector<BenchmarkRow> rows(tasks.size());

  auto run_task = [&](std::size_t idx) {
    const Task& t = tasks[idx];
    BenchmarkRow& row = rows[idx];
    row.image = t.img->id;
    row.factor = t.factor;
    row.method = t.method;
    try {
      const ScalarField u0 =
          add_gaussian_noise(t.img->image, t.factor, noise_key(t.img->id, t.factor, cfg.seed));
      const MethodRun run = run_method(t.method, u0, cfg.solver);
      row.alpha = run.alpha_used;
      row.psnr_db = psnr(run.u_hat, t.img->image);
      row.time_s = run.time_s;
      row.iters = run.iters;
      if (!cfg.trace_dir.empty()) {
        char fbuf[32];
        std::snprintf(fbuf, sizeof fbuf, "%g", t.factor);
        write_trace_file(cfg.trace_dir + "/" + t.img->id + "_" + fbuf + "_" + t.method +
                             ".csv",
                         run.trace);
      }
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
      row.psnr_db = std::numeric_limits<double>::quiet_NaN();
    }
  };

  const int nthreads = worker_threads(tasks.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nthreads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
          run_task(i);
      });
    for (std::thread& th : pool) th.join();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
    if (a.image != b.image) return a.image < b.image;
    if (a.factor != b.factor) return a.factor < b.factor;
    return a.method < b.method;
  });
  return rows;
}

std::vector<SweepEntry> parameter_sweep(const std::string& method,
                                        const std::vector<NamedImage>& images,
                                        const std::vector<double>& factors,
                                        const std::vector<double>& grid,
                                        SweepParam param, const BenchmarkConfig& cfg) {
  std::vector<SweepEntry> entries;
  for (const NamedImage& img : images) {
    for (double f : factors) {
      SweepEntry e;
      e.image = img.id;
      e.factor = f;
      const ScalarField u0 =
          add_gaussian_noise(img.image, f, noise_key(img.id, f, cfg.seed));
      for (double g : grid) {
        ParamOverrides over;
        if (param == SweepParam::Alpha) {
          over.alpha = g;
          over.alpha0 = g;  // TGV sweeps alpha0 with alpha1 fixed at its default
        } else {
          over.c = g;
        }
        const MethodRun run = run_method(method, u0, cfg.solver, over);
        e.grid.push_back({g, psnr(run.u_hat, img.image)});
      }
      const auto best = std::max_element(
          e.grid.begin(), e.grid.end(),
          [](const SweepPoint& a, const SweepPoint& b) { return a.psnr_db < b.psnr_db; });
      e.best_param = best->param;
      e.best_psnr = best->psnr_db;
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

}  // namespace tgv
