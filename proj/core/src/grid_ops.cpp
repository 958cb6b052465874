#include "tgv/grid_ops.hpp"

namespace tgv {

namespace {

// out(i,j) = in(i+1,j) - in(i,j), last row 0.
void d1_block(const double* in, double* out, int rows, int cols) {
  for (int i = 0; i < rows - 1; ++i) {
    const double* a = in + static_cast<std::size_t>(i) * cols;
    const double* b = a + cols;
    double* o = out + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) o[j] = b[j] - a[j];
  }
  double* last = out + static_cast<std::size_t>(rows - 1) * cols;
  for (int j = 0; j < cols; ++j) last[j] = 0.0;
}

void d2_block(const double* in, double* out, int rows, int cols) {
  for (int i = 0; i < rows; ++i) {
    const double* a = in + static_cast<std::size_t>(i) * cols;
    double* o = out + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols - 1; ++j) o[j] = a[j + 1] - a[j];
    o[cols - 1] = 0.0;
  }
}

// Transposed stencil of d1_block. The constant-extension boundary makes this
// differ from a shifted forward difference: row 0 gets -y0, row M-1 gets
// y_{M-2}, interior rows y_{i-1} - y_i.
void d1t_block(const double* y, double* out, int rows, int cols, double scale,
               bool accumulate) {
  for (int i = 0; i < rows; ++i) {
    double* o = out + static_cast<std::size_t>(i) * cols;
    const double* yi = y + static_cast<std::size_t>(i) * cols;
    const double* ym = y + static_cast<std::size_t>(i - 1) * cols;
    for (int j = 0; j < cols; ++j) {
      double v = 0.0;
      if (i < rows - 1) v -= yi[j];
      if (i > 0) v += ym[j];
      if (accumulate)
        o[j] += scale * v;
      else
        o[j] = scale * v;
    }
  }
}

void d2t_block(const double* y, double* out, int rows, int cols, double scale,
               bool accumulate) {
  for (int i = 0; i < rows; ++i) {
    double* o = out + static_cast<std::size_t>(i) * cols;
    const double* yi = y + static_cast<std::size_t>(i) * cols;
    for (int j = 0; j < cols; ++j) {
      double v = 0.0;
      if (j < cols - 1) v -= yi[j];
      if (j > 0) v += yi[j - 1];
      if (accumulate)
        o[j] += scale * v;
      else
        o[j] = scale * v;
    }
  }
}

}  // namespace

ScalarField d1_forward(const ScalarField& u) {
  ScalarField out(u.rows, u.cols);
  d1_block(u.data.data(), out.data.data(), u.rows, u.cols);
  return out;
}

ScalarField d2_forward(const ScalarField& u) {
  ScalarField out(u.rows, u.cols);
  d2_block(u.data.data(), out.data.data(), u.rows, u.cols);
  return out;
}

ScalarField d1_adjoint(const ScalarField& y) {
  ScalarField out(y.rows, y.cols);
  d1t_block(y.data.data(), out.data.data(), y.rows, y.cols, 1.0, false);
  return out;
}

ScalarField d2_adjoint(const ScalarField& y) {
  ScalarField out(y.rows, y.cols);
  d2t_block(y.data.data(), out.data.data(), y.rows, y.cols, 1.0, false);
  return out;
}

VectorField grad(const ScalarField& u) {
  VectorField out(u.rows, u.cols);
  const std::size_t n = u.pixels();
  d1_block(u.data.data(), out.data.data(), u.rows, u.cols);
  d2_block(u.data.data(), out.data.data() + n, u.rows, u.cols);
  return out;
}

ScalarField divergence(const VectorField& v) {
  ScalarField out(v.rows, v.cols);
  const std::size_t n = v.pixels();
  d1t_block(v.data.data(), out.data.data(), v.rows, v.cols, -1.0, false);
  d2t_block(v.data.data() + n, out.data.data(), v.rows, v.cols, -1.0, true);
  return out;
}

TensorField symgrad(const VectorField& v) {
  TensorField out(v.rows, v.cols);
  const std::size_t n = v.pixels();
  const double* v1 = v.data.data();
  const double* v2 = v.data.data() + n;
  double* c0 = out.data.data();
  double* c1 = out.data.data() + n;
  double* c2 = out.data.data() + 2 * n;
  double* c3 = out.data.data() + 3 * n;
  d1_block(v1, c0, v.rows, v.cols);
  d2_block(v2, c3, v.rows, v.cols);
  // off-diagonal: (d1 v2 + d2 v1)/2, stored twice
  std::vector<double> t(n);
  d1_block(v2, c1, v.rows, v.cols);
  d2_block(v1, t.data(), v.rows, v.cols);
  for (std::size_t k = 0; k < n; ++k) {
    c1[k] = 0.5 * (c1[k] + t[k]);
    c2[k] = c1[k];
  }
  return out;
}

VectorField symgrad_adjoint(const TensorField& q) {
  VectorField out(q.rows, q.cols);
  const std::size_t n = q.pixels();
  const double* c0 = q.data.data();
  const double* c1 = q.data.data() + n;
  const double* c2 = q.data.data() + 2 * n;
  const double* c3 = q.data.data() + 3 * n;
  double* o1 = out.data.data();
  double* o2 = out.data.data() + n;
  std::vector<double> m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = c1[k] + c2[k];
  // out1 = D1^T c0 + 1/2 D2^T (c1+c2), out2 = 1/2 D1^T (c1+c2) + D2^T c3
  d1t_block(c0, o1, q.rows, q.cols, 1.0, false);
  d2t_block(m.data(), o1, q.rows, q.cols, 0.5, true);
  d1t_block(m.data(), o2, q.rows, q.cols, 0.5, false);
  d2t_block(c3, o2, q.rows, q.cols, 1.0, true);
  return out;
}

TensorField jacobian(const VectorField& v) {
  TensorField out(v.rows, v.cols);
  const std::size_t n = v.pixels();
  const double* v1 = v.data.data();
  const double* v2 = v.data.data() + n;
  d1_block(v1, out.data.data(), v.rows, v.cols);
  d2_block(v1, out.data.data() + n, v.rows, v.cols);
  d1_block(v2, out.data.data() + 2 * n, v.rows, v.cols);
  d2_block(v2, out.data.data() + 3 * n, v.rows, v.cols);
  return out;
}

VectorField jacobian_adjoint(const TensorField& q) {
  VectorField out(q.rows, q.cols);
  const std::size_t n = q.pixels();
  d1t_block(q.data.data(), out.data.data(), q.rows, q.cols, 1.0, false);
  d2t_block(q.data.data() + n, out.data.data(), q.rows, q.cols, 1.0, true);
  d1t_block(q.data.data() + 2 * n, out.data.data() + n, q.rows, q.cols, 1.0, false);
  d2t_block(q.data.data() + 3 * n, out.data.data() + n, q.rows, q.cols, 1.0, true);
  return out;
}

TensorField hessian(const ScalarField& u) { return symgrad(grad(u)); }

ScalarField hessian_adjoint(const TensorField& q) {
  // H^T = grad^T E^T = -div(E^T q)
  ScalarField d = divergence(symgrad_adjoint(q));
  for (double& v : d.data) v = -v;
  return d;
}

}  // namespace tgv
