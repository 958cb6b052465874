#ifndef TGV_SPARSE_HPP
#define TGV_SPARSE_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace tgv {

// General sparse matrix in compressed row form. Entries within a row are
// sorted by column and unique.
struct SparseOperator {
  int nrows = 0, ncols = 0;
  std::vector<int> row_ptr;  // size nrows+1
  std::vector<int> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  void multiply(const double* x, double* y) const;            // y = A x
  void multiply_add(const double* x, double* y) const;        // y += A x
  std::vector<double> multiply(const std::vector<double>& x) const;

  double entry(int i, int j) const;  // 0 if outside pattern

  static SparseOperator identity(int n);
};

struct CooEntry {
  int row, col;
  double value;
};

// Sorts and validates; throws on duplicate (row,col), bad index or non-finite
// value. Entries with value exactly 0 are kept (pattern-significant).
SparseOperator from_coo(int nrows, int ncols, std::vector<CooEntry> entries);

SparseOperator transposed(const SparseOperator& a);
SparseOperator matmul(const SparseOperator& a, const SparseOperator& b);
// alpha*A + beta*B
SparseOperator add(double alpha, const SparseOperator& a, double beta,
                   const SparseOperator& b);

// Appends a*op placed at (row_offset, col_offset) into a COO buffer; used to
// compose block operators.
void append_block(std::vector<CooEntry>& coo, const SparseOperator& op,
                  int row_offset, int col_offset, double scale);

// Matrix Market coordinate text format (debug dump).
void write_matrix_market(const SparseOperator& a, std::ostream& os);
void write_matrix_market(const SparseOperator& a, const std::string& path);

}  // namespace tgv

#endif
