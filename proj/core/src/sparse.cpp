#include "tgv/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace tgv {

void SparseOperator::multiply(const double* x, double* y) const {
  for (int i = 0; i < nrows; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] = s;
  }
}

void SparseOperator::multiply_add(const double* x, double* y) const {
  for (int i = 0; i < nrows; ++i) {
    double s = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += values[k] * x[col_idx[k]];
    y[i] += s;
  }
}

std::vector<double> SparseOperator::multiply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != ncols)
    throw std::invalid_argument("sparse multiply: size mismatch");
  std::vector<double> y(nrows);
  multiply(x.data(), y.data());
  return y;
}

double SparseOperator::entry(int i, int j) const {
  for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
    if (col_idx[k] == j) return values[k];
  return 0.0;
}

SparseOperator SparseOperator::identity(int n) {
  SparseOperator a;
  a.nrows = a.ncols = n;
  a.row_ptr.resize(n + 1);
  a.col_idx.resize(n);
  a.values.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) a.row_ptr[i] = i;
  for (int i = 0; i < n; ++i) a.col_idx[i] = i;
  return a;
}

SparseOperator from_coo(int nrows, int ncols, std::vector<CooEntry> entries) {
  for (const CooEntry& e : entries) {
    if (e.row < 0 || e.row >= nrows || e.col < 0 || e.col >= ncols)
      throw std::invalid_argument("from_coo: index out of range");
    if (!std::isfinite(e.value)) throw std::invalid_argument("from_coo: non-finite value");
  }
  std::sort(entries.begin(), entries.end(), [](const CooEntry& a, const CooEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t k = 1; k < entries.size(); ++k)
    if (entries[k].row == entries[k - 1].row && entries[k].col == entries[k - 1].col)
      throw std::invalid_argument("from_coo: duplicate entry");
  SparseOperator a;
  a.nrows = nrows;
  a.ncols = ncols;
  a.row_ptr.assign(nrows + 1, 0);
  a.col_idx.resize(entries.size());
  a.values.resize(entries.size());
  for (const CooEntry& e : entries) ++a.row_ptr[e.row + 1];
  for (int i = 0; i < nrows; ++i) a.row_ptr[i + 1] += a.row_ptr[i];
  for (std::size_t k = 0; k < entries.size(); ++k) {
    a.col_idx[k] = entries[k].col;
    a.values[k] = entries[k].value;
  }
  return a;
}

SparseOperator transposed(const SparseOperator& a) {
  SparseOperator t;
  t.nrows = a.ncols;
  t.ncols = a.nrows;
  t.row_ptr.assign(t.nrows + 1, 0);
  t.col_idx.resize(a.nnz());
  t.values.resize(a.nnz());
  for (int j : a.col_idx) ++t.row_ptr[j + 1];
  for (int i = 0; i < t.nrows; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  std::vector<int> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int i = 0; i < a.nrows; ++i) {
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int pos = next[a.col_idx[k]]++;
      t.col_idx[pos] = i;
      t.values[pos] = a.values[k];
    }
  }
  return t;  // column order within rows follows source row order, already sorted
}

SparseOperator matmul(const SparseOperator& a, const SparseOperator& b) {
  if (a.ncols != b.nrows) throw std::invalid_argument("matmul: size mismatch");
  SparseOperator c;
  c.nrows = a.nrows;
  c.ncols = b.ncols;
  c.row_ptr.assign(a.nrows + 1, 0);
  std::vector<double> acc(b.ncols, 0.0);
  std::vector<int> marker(b.ncols, -1);
  std::vector<int> cols_in_row;
  for (int i = 0; i < a.nrows; ++i) {
    cols_in_row.clear();
    for (int ka = a.row_ptr[i]; ka < a.row_ptr[i + 1]; ++ka) {
      const int kcol = a.col_idx[ka];
      const double av = a.values[ka];
      for (int kb = b.row_ptr[kcol]; kb < b.row_ptr[kcol + 1]; ++kb) {
        const int j = b.col_idx[kb];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          cols_in_row.push_back(j);
        }
        acc[j] += av * b.values[kb];
      }
    }
    std::sort(cols_in_row.begin(), cols_in_row.end());
    for (int j : cols_in_row) {
      c.col_idx.push_back(j);
      c.values.push_back(acc[j]);
    }
    c.row_ptr[i + 1] = static_cast<int>(c.col_idx.size());
  }
  return c;
}

SparseOperator add(double alpha, const SparseOperator& a, double beta,
                   const SparseOperator& b) {
  if (a.nrows != b.nrows || a.ncols != b.ncols)
    throw std::invalid_argument("add: size mismatch");
  SparseOperator c;
  c.nrows = a.nrows;
  c.ncols = a.ncols;
  c.row_ptr.assign(a.nrows + 1, 0);
  for (int i = 0; i < a.nrows; ++i) {
    int ka = a.row_ptr[i], kb = b.row_ptr[i];
    const int ea = a.row_ptr[i + 1], eb = b.row_ptr[i + 1];
    while (ka < ea || kb < eb) {
      int j;
      double v;
      if (kb >= eb || (ka < ea && a.col_idx[ka] < b.col_idx[kb])) {
        j = a.col_idx[ka];
        v = alpha * a.values[ka++];
      } else if (ka >= ea || b.col_idx[kb] < a.col_idx[ka]) {
        j = b.col_idx[kb];
        v = beta * b.values[kb++];
      } else {
        j = a.col_idx[ka];
        v = alpha * a.values[ka++] + beta * b.values[kb++];
      }
      c.col_idx.push_back(j);
      c.values.push_back(v);
    }
    c.row_ptr[i + 1] = static_cast<int>(c.col_idx.size());
  }
  return c;
}

void append_block(std::vector<CooEntry>& coo, const SparseOperator& op,
                  int row_offset, int col_offset, double scale) {
  for (int i = 0; i < op.nrows; ++i)
    for (int k = op.row_ptr[i]; k < op.row_ptr[i + 1]; ++k)
      coo.push_back({row_offset + i, col_offset + op.col_idx[k], scale * op.values[k]});
}

void write_matrix_market(const SparseOperator& a, std::ostream& os) {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.nrows << ' ' << a.ncols << ' ' << a.nnz() << '\n';
  os.precision(17);
  for (int i = 0; i < a.nrows; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      os << i + 1 << ' ' << a.col_idx[k] + 1 << ' ' << a.values[k] << '\n';
}

void write_matrix_market(const SparseOperator& a, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_matrix_market(a, os);
}

}  // namespace tgv
