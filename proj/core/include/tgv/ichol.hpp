#ifndef TGV_ICHOL_HPP
#define TGV_ICHOL_HPP

#include <stdexcept>
#include <vector>

#include "tgv/sparse.hpp"

namespace tgv {

// Lower-triangular incomplete Cholesky factor with positive diagonal;
// sparsity pattern contained in the lower triangle of the input (zero fill).
struct CholFactor {
  SparseOperator lower;
  double shift = 0.0;  // diagonal shift that was applied before factorizing
};

struct IcholBreakdown : std::runtime_error {
  int row;
  explicit IcholBreakdown(int r)
      : std::runtime_error("ichol breakdown: nonpositive pivot at row " +
                           std::to_string(r)),
        row(r) {}
};

// IC(0): zero fill, no threshold, no shift. Throws IcholBreakdown if a pivot
// becomes <= 0. Input must be symmetric with positive diagonal (only the
// lower triangle is read).
CholFactor ichol_zero_fill(const SparseOperator& a);

// IC(0) with automatic diagonal-shift fallback: on breakdown retries with
// shift = 1e-3 * max diag, doubling until success.
CholFactor ichol_with_shift(const SparseOperator& a);

// out = (L L^T)^{-1} r via forward/back substitution.
void precond_apply(const CholFactor& f, const double* r, double* out);
std::vector<double> precond_apply(const CholFactor& f, const std::vector<double>& r);

}  // namespace tgv

#endif
