#ifndef TGV_FIELDS_HPP
#define TGV_FIELDS_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tgv {

// Pixel grids with channel-major stacking: data holds kChannels blocks of
// rows*cols values, each block row-major. vec(field) is exactly data, with
// the u-block (or channel 0) first. All grid sizes require rows,cols >= 2.

namespace detail {
inline void check_dims(int rows, int cols) {
  if (rows < 2 || cols < 2)
    throw std::invalid_argument("field dimensions must be at least 2x2");
}
}  // namespace detail

struct ScalarField {
  static constexpr int kChannels = 1;
  int rows = 0, cols = 0;
  std::vector<double> data;

  ScalarField() = default;
  ScalarField(int r, int c, double fill = 0.0) : rows(r), cols(c) {
    detail::check_dims(r, c);
    data.assign(static_cast<std::size_t>(r) * c, fill);
  }
  bool empty() const { return rows == 0; }
  std::size_t pixels() const { return static_cast<std::size_t>(rows) * cols; }
  std::size_t size() const { return data.size(); }
  double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

struct VectorField {
  static constexpr int kChannels = 2;
  int rows = 0, cols = 0;
  std::vector<double> data;

  VectorField() = default;
  VectorField(int r, int c, double fill = 0.0) : rows(r), cols(c) {
    detail::check_dims(r, c);
    data.assign(static_cast<std::size_t>(r) * c * kChannels, fill);
  }
  bool empty() const { return rows == 0; }
  std::size_t pixels() const { return static_cast<std::size_t>(rows) * cols; }
  std::size_t size() const { return data.size(); }
  double& at(int i, int j, int ch) {
    return data[ch * pixels() + static_cast<std::size_t>(i) * cols + j];
  }
  double at(int i, int j, int ch) const {
    return data[ch * pixels() + static_cast<std::size_t>(i) * cols + j];
  }
};

// Symmetrized-gradient values; channel order (d1v1, m, m, d2v2) with the
// off-diagonal m stored twice so that inner products and mixed norms need
// no weight factors.
struct TensorField {
  static constexpr int kChannels = 4;
  int rows = 0, cols = 0;
  std::vector<double> data;

  TensorField() = default;
  TensorField(int r, int c, double fill = 0.0) : rows(r), cols(c) {
    detail::check_dims(r, c);
    data.assign(static_cast<std::size_t>(r) * c * kChannels, fill);
  }
  bool empty() const { return rows == 0; }
  std::size_t pixels() const { return static_cast<std::size_t>(rows) * cols; }
  std::size_t size() const { return data.size(); }
  double& at(int i, int j, int ch) {
    return data[ch * pixels() + static_cast<std::size_t>(i) * cols + j];
  }
  double at(int i, int j, int ch) const {
    return data[ch * pixels() + static_cast<std::size_t>(i) * cols + j];
  }
};

template <class Field>
inline bool same_shape(const Field& a, const Field& b) {
  return a.rows == b.rows && a.cols == b.cols;
}

template <class Field>
inline void require_same_shape(const Field& a, const Field& b) {
  if (!same_shape(a, b)) throw std::invalid_argument("field shape mismatch");
}

template <class Field>
inline bool all_finite(const Field& f) {
  for (double v : f.data)
    if (!std::isfinite(v)) return false;
  return true;
}

// Flat Euclidean inner product; plain sequential sum (deterministic).
template <class Field>
inline double inner(const Field& a, const Field& b) {
  require_same_shape(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) s += a.data[k] * b.data[k];
  return s;
}

template <class Field>
inline double norm_l2(const Field& f) {
  double s = 0.0;
  for (double v : f.data) s += v * v;
  return std::sqrt(s);
}

// ||f||_1 of pointwise Euclidean magnitudes (the mixed norm |||.|||_1).
template <class Field>
inline double mixed_norm_l1(const Field& f) {
  const std::size_t n = f.pixels();
  double s = 0.0;
  for (std::size_t px = 0; px < n; ++px) {
    double m = 0.0;
    for (int c = 0; c < Field::kChannels; ++c) {
      const double v = f.data[c * n + px];
      m += v * v;
    }
    s += std::sqrt(m);
  }
  return s;
}

template <class Field>
inline ScalarField pointwise_magnitude(const Field& f) {
  ScalarField out(f.rows, f.cols);
  const std::size_t n = f.pixels();
  for (std::size_t px = 0; px < n; ++px) {
    double m = 0.0;
    for (int c = 0; c < Field::kChannels; ++c) {
      const double v = f.data[c * n + px];
      m += v * v;
    }
    out.data[px] = std::sqrt(m);
  }
  return out;
}

// Largest pointwise magnitude, the |||.|||_inf dual norm.
template <class Field>
inline double mixed_norm_linf(const Field& f) {
  const std::size_t n = f.pixels();
  double best = 0.0;
  for (std::size_t px = 0; px < n; ++px) {
    double m = 0.0;
    for (int c = 0; c < Field::kChannels; ++c) {
      const double v = f.data[c * n + px];
      m += v * v;
    }
    if (m > best) best = m;
  }
  return std::sqrt(best);
}

// out = a + s*b
template <class Field>
inline Field lin_comb(const Field& a, double s, const Field& b) {
  require_same_shape(a, b);
  Field out = a;
  for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += s * b.data[k];
  return out;
}

template <class Field>
inline Field sub(const Field& a, const Field& b) {
  return lin_comb(a, -1.0, b);
}

template <class Field>
inline Field scaled(Field f, double s) {
  for (double& v : f.data) v *= s;
  return f;
}

}  // namespace tgv

#endif
