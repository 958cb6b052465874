#ifndef TGV_TEST_UTIL_HPP
#define TGV_TEST_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "tgv/fields.hpp"

namespace tgv_test {

// Small deterministic generator for test data (splitmix64).
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed * 0x9E3779B97F4A7C15ull + 1) {}
  uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }
};

inline tgv::ScalarField random_scalar(Rng& rng, int rows, int cols) {
  tgv::ScalarField f(rows, cols);
  for (double& v : f.data) v = rng.uniform(-1.0, 1.0);
  return f;
}

inline tgv::VectorField random_vector(Rng& rng, int rows, int cols) {
  tgv::VectorField f(rows, cols);
  for (double& v : f.data) v = rng.uniform(-1.0, 1.0);
  return f;
}

inline tgv::TensorField random_tensor(Rng& rng, int rows, int cols) {
  tgv::TensorField f(rows, cols);
  for (double& v : f.data) v = rng.uniform(-1.0, 1.0);
  return f;
}

template <class Field>
double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k)
    m = std::max(m, std::fabs(a.data[k] - b.data[k]));
  return m;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / (1.0 + std::fabs(want));
}

template <class Field>
std::vector<double> flat(const Field& f) {
  return f.data;
}

}  // namespace tgv_test

#endif
