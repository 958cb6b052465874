#include "tgv/prox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tgv {

namespace {

template <class Field>
Field proj_linf_impl(const Field& x, double delta) {
  if (delta < 0.0) throw std::invalid_argument("projection radius must be >= 0");
  Field out = x;
  const std::size_t n = x.pixels();
  if (delta == 0.0) {
    std::fill(out.data.begin(), out.data.end(), 0.0);
    return out;
  }
  for (std::size_t px = 0; px < n; ++px) {
    double m = 0.0;
    for (int c = 0; c < Field::kChannels; ++c) {
      const double v = x.data[c * n + px];
      m += v * v;
    }
    m = std::sqrt(m);
    if (m > delta) {
      const double f = delta / m;
      for (int c = 0; c < Field::kChannels; ++c) out.data[c * n + px] *= f;
    }
  }
  return out;
}

// Multiplier for sum_i max(m_i - lam, 0) = delta, m infeasible. Sort-based
// exact search; bisection fallback guards against pathological round-off.
double l1_multiplier(std::vector<double> m, double delta) {
  std::sort(m.begin(), m.end(), std::greater<double>());
  double prefix = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    prefix += m[k];
    const double lam = (prefix - delta) / static_cast<double>(k + 1);
    const bool below_next = (k + 1 == m.size()) || (lam >= m[k + 1]);
    if (lam > 0.0 && lam <= m[k] && below_next) return lam;
  }
  // fallback: phi(lam) = sum max(m-lam,0) - delta is decreasing on [0, m_max]
  double lo = 0.0, hi = m.empty() ? 0.0 : m.front();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    double s = 0.0;
    for (double v : m) s += std::max(v - mid, 0.0);
    (s > delta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

template <class Field>
Field proj_l1_impl(const Field& x, const Field* center, double delta) {
  if (delta < 0.0) throw std::invalid_argument("projection radius must be >= 0");
  if (center) require_same_shape(x, *center);
  const std::size_t n = x.pixels();
  Field d = x;
  if (center)
    for (std::size_t k = 0; k < d.data.size(); ++k) d.data[k] -= center->data[k];
  std::vector<double> mag(n, 0.0);
  double total = 0.0;
  for (std::size_t px = 0; px < n; ++px) {
    double m = 0.0;
    for (int c = 0; c < Field::kChannels; ++c) {
      const double v = d.data[c * n + px];
      m += v * v;
    }
    mag[px] = std::sqrt(m);
    total += mag[px];
  }
  if (total <= delta) return x;
  Field out = x;
  if (delta == 0.0) {
    if (center)
      out.data = center->data;
    else
      std::fill(out.data.begin(), out.data.end(), 0.0);
    return out;
  }
  const double lam = l1_multiplier(mag, delta);
  for (std::size_t px = 0; px < n; ++px) {
    // groups at the center stay there (0/0 convention -> 0)
    const double f = mag[px] > 0.0 ? std::max(mag[px] - lam, 0.0) / mag[px] : 0.0;
    for (int c = 0; c < Field::kChannels; ++c) {
      const double cv = center ? center->data[c * n + px] : 0.0;
      out.data[c * n + px] = cv + f * d.data[c * n + px];
    }
  }
  return out;
}

template <class Field>
Field soft_threshold_impl(const Field& x, double tau) {
  return prox_via_moreau([](const Field& z) { return project_linf_l2_ball(z, 1.0); },
                         tau, x);
}

template <class Field>
Field shifted_linf_impl(const Field& q, double sigma, const Field& shift,
                        double delta) {
  require_same_shape(q, shift);
  Field t = q;
  for (std::size_t k = 0; k < t.data.size(); ++k) t.data[k] -= sigma * shift.data[k];
  return project_linf_l2_ball(t, delta);
}

}  // namespace

ScalarField project_l2_ball(const ScalarField& u, const ScalarField& center,
                            double delta) {
  if (delta < 0.0) throw std::invalid_argument("projection radius must be >= 0");
  require_same_shape(u, center);
  if (delta == 0.0) return center;
  double nd = 0.0;
  for (std::size_t k = 0; k < u.data.size(); ++k) {
    const double d = u.data[k] - center.data[k];
    nd += d * d;
  }
  nd = std::sqrt(nd);
  if (nd <= delta) return u;
  const double f = delta / nd;
  ScalarField out = center;
  for (std::size_t k = 0; k < out.data.size(); ++k)
    out.data[k] += f * (u.data[k] - center.data[k]);
  return out;
}

VectorField project_linf_l2_ball(const VectorField& x, double delta) {
  return proj_linf_impl(x, delta);
}
TensorField project_linf_l2_ball(const TensorField& x, double delta) {
  return proj_linf_impl(x, delta);
}

VectorField project_l1_l2_ball(const VectorField& x, const VectorField* center,
                               double delta) {
  return proj_l1_impl(x, center, delta);
}
TensorField project_l1_l2_ball(const TensorField& x, const TensorField* center,
                               double delta) {
  return proj_l1_impl(x, center, delta);
}

VectorField group_soft_threshold(const VectorField& x, double tau) {
  return soft_threshold_impl(x, tau);
}
TensorField group_soft_threshold(const TensorField& x, double tau) {
  return soft_threshold_impl(x, tau);
}

ScalarField prox_tgv_data(const ScalarField& u, const ScalarField& u0, double t) {
  require_same_shape(u, u0);
  ScalarField out = u;
  const double inv = 1.0 / (1.0 + t);
  for (std::size_t k = 0; k < out.data.size(); ++k)
    out.data[k] = (u.data[k] + t * u0.data[k]) * inv;
  return out;
}

TensorField prox_shifted_linf(const TensorField& q, double sigma,
                              const TensorField& shift, double delta) {
  return shifted_linf_impl(q, sigma, shift, delta);
}
VectorField prox_shifted_linf(const VectorField& p, double sigma,
                              const VectorField& shift, double delta) {
  return shifted_linf_impl(p, sigma, shift, delta);
}

}  // namespace tgv
