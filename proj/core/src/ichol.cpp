#include "tgv/ichol.hpp"

#include <algorithm>
#include <cmath>

namespace tgv {

namespace {

// Up-looking IC(0) on the lower-triangle pattern of a. diag_shift is added to
// the diagonal before factorizing.
CholFactor factorize(const SparseOperator& a, double diag_shift) {
  const int n = a.nrows;
  SparseOperator L;
  L.nrows = L.ncols = n;
  L.row_ptr.assign(n + 1, 0);
  // pattern = lower triangle of a, diagonal included
  for (int i = 0; i < n; ++i) {
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col_idx[k] <= i) ++L.row_ptr[i + 1];
  }
  for (int i = 0; i < n; ++i) L.row_ptr[i + 1] += L.row_ptr[i];
  L.col_idx.resize(L.row_ptr[n]);
  L.values.resize(L.row_ptr[n]);
  {
    std::vector<int> pos(L.row_ptr.begin(), L.row_ptr.end() - 1);
    for (int i = 0; i < n; ++i)
      for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        if (a.col_idx[k] <= i) {
          L.col_idx[pos[i]] = a.col_idx[k];
          L.values[pos[i]] = a.values[k] + (a.col_idx[k] == i ? diag_shift : 0.0);
          ++pos[i];
        }
  }
  std::vector<double> diag(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int beg = L.row_ptr[i], end = L.row_ptr[i + 1];
    if (end == beg || L.col_idx[end - 1] != i) throw IcholBreakdown(i);
    for (int k = beg; k < end; ++k) {
      const int j = L.col_idx[k];
      // dot of rows i and j over columns < j
      double s = L.values[k];
      int ki = beg, kj = L.row_ptr[j];
      const int ej = L.row_ptr[j + 1] - 1;  // exclude diagonal of row j
      while (ki < k && kj < ej) {
        if (L.col_idx[ki] == L.col_idx[kj])
          s -= L.values[ki++] * L.values[kj++];
        else if (L.col_idx[ki] < L.col_idx[kj])
          ++ki;
        else
          ++kj;
      }
      if (j < i) {
        L.values[k] = s / diag[j];
      } else {
        if (s <= 0.0 || !std::isfinite(s)) throw IcholBreakdown(i);
        diag[i] = std::sqrt(s);
        L.values[k] = diag[i];
      }
    }
  }
  return {L, diag_shift};
}

}  // namespace

CholFactor ichol_zero_fill(const SparseOperator& a) {
  if (a.nrows != a.ncols) throw std::invalid_argument("ichol: matrix not square");
  return factorize(a, 0.0);
}

CholFactor ichol_with_shift(const SparseOperator& a) {
  if (a.nrows != a.ncols) throw std::invalid_argument("ichol: matrix not square");
  try {
    return factorize(a, 0.0);
  } catch (const IcholBreakdown&) {
  }
  double maxdiag = 0.0;
  for (int i = 0; i < a.nrows; ++i) maxdiag = std::max(maxdiag, a.entry(i, i));
  double shift = 1e-3 * maxdiag;
  for (int attempt = 0; attempt < 60; ++attempt, shift *= 2.0) {
    try {
      return factorize(a, shift);
    } catch (const IcholBreakdown&) {
    }
  }
  throw std::runtime_error("ichol: shift fallback failed to converge");
}

void precond_apply(const CholFactor& f, const double* r, double* out) {
  const SparseOperator& L = f.lower;
  const int n = L.nrows;
  // forward: L y = r
  for (int i = 0; i < n; ++i) {
    double s = r[i];
    const int end = L.row_ptr[i + 1] - 1;  // last entry is the diagonal
    for (int k = L.row_ptr[i]; k < end; ++k) s -= L.values[k] * out[L.col_idx[k]];
    out[i] = s / L.values[end];
  }
  // backward: L^T x = y, column sweep on L
  for (int i = n - 1; i >= 0; --i) {
    const int end = L.row_ptr[i + 1] - 1;
    out[i] /= L.values[end];
    const double xi = out[i];
    for (int k = L.row_ptr[i]; k < end; ++k) out[L.col_idx[k]] -= L.values[k] * xi;
  }
}

std::vector<double> precond_apply(const CholFactor& f, const std::vector<double>& r) {
  if (static_cast<int>(r.size()) != f.lower.nrows)
    throw std::invalid_argument("precond_apply: size mismatch");
  std::vector<double> out(r.size());
  precond_apply(f, r.data(), out.data());
  return out;
}

}  // namespace tgv
