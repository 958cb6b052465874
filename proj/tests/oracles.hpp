#ifndef TGV_TEST_ORACLES_HPP
#define TGV_TEST_ORACLES_HPP

// Independent reference implementations used by the unit and acceptance
// suites. These share no code with the library paths they check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tgv/fields.hpp"

namespace tgv_test {

// Projected-gradient ascent on the scalar dual of the mixed-ball projection:
// lam <- max(0, lam + step*(sum_i max(m_i - lam, 0) - delta)).
inline double dual_ascent_multiplier(const std::vector<double>& m, double delta) {
  double lam = 0.0;
  const double step = 1.0 / static_cast<double>(m.size());
  for (int it = 0; it < 400000; ++it) {
    double phi = -delta;
    for (double v : m) phi += std::max(v - lam, 0.0);
    lam = std::max(0.0, lam + step * phi);
  }
  return lam;
}

inline tgv::VectorField pg_oracle_l1_projection(const tgv::VectorField& x,
                                                double delta) {
  const std::size_t n = x.pixels();
  std::vector<double> m(n, 0.0);
  double total = 0.0;
  for (std::size_t px = 0; px < n; ++px) {
    m[px] = std::hypot(x.data[px], x.data[n + px]);
    total += m[px];
  }
  if (total <= delta) return x;
  const double lam = dual_ascent_multiplier(m, delta);
  tgv::VectorField out = x;
  for (std::size_t px = 0; px < n; ++px) {
    const double f = m[px] > 0.0 ? std::max(m[px] - lam, 0.0) / m[px] : 0.0;
    out.data[px] *= f;
    out.data[n + px] *= f;
  }
  return out;
}

// Exact projection of magnitudes onto {t >= 0, sum t <= delta} by exhaustive
// active-set enumeration (n <= 12).
inline std::vector<double> enumerate_l1_projection(const std::vector<double>& m,
                                                   double delta) {
  double total = 0.0;
  for (double v : m) total += v;
  if (total <= delta) return m;
  const std::size_t n = m.size();
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<double> best(m.size(), 0.0);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        sum += m[i];
        ++count;
      }
    const double lam = (sum - delta) / count;
    if (lam <= 0.0) continue;
    bool valid = true;
    std::vector<double> t(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const bool active = mask & (1u << i);
      if (active) {
        t[i] = m[i] - lam;
        if (t[i] < -1e-14) valid = false;
      } else if (m[i] > lam + 1e-14) {
        valid = false;
      }
    }
    if (!valid) continue;
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) obj += (t[i] - m[i]) * (t[i] - m[i]);
    if (obj < best_obj) {
      best_obj = obj;
      best = t;
    }
  }
  return best;
}

}  // namespace tgv_test

#endif
