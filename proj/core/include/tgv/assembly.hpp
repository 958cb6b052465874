#ifndef TGV_ASSEMBLY_HPP
#define TGV_ASSEMBLY_HPP

#include "tgv/sparse.hpp"

namespace tgv {

// Sparse matrices realizing the grid operators on vectorized fields.
// Vectorization order: scalar index = i*cols + j (row-major); stacked
// variables put the u block first, then vector/tensor channels in order.

// Which primal variables the saddle-point operator K acts on:
//   U  : u alone, K = grad                       (scalar data problems)
//   UV : (u, v),  K = [grad, -I; 0, symgrad]     (TGV / MTGV)
//   UW : (u, w),  K = symgrad*[grad, -I]         (MTGV_W / CTGV)
//   V  : v alone, K = symgrad                    (gradient-stage problems)
enum class Formulation { U, UV, UW, V };

// Blocks of the block-diagonal preconditioners.
enum class PrecondBlock {
  UV_U,  // I - st*Laplacian
  UV_V,  // I + st*(I + J^T J)
  UW_U,  // I + H^T H        (paper's literal; st variant behind a flag)
  UW_W,  // I + st*J^T J
  V      // I + st*J^T J
};

SparseOperator assemble_d(int direction, int rows, int cols);
SparseOperator assemble_grad(int rows, int cols);
SparseOperator assemble_symgrad(int rows, int cols);
SparseOperator assemble_jacobian(int rows, int cols);
SparseOperator assemble_hessian(int rows, int cols);
SparseOperator assemble_k(Formulation f, int rows, int cols);

// I + st*K^T K, symmetric positive definite.
SparseOperator assemble_ktk(Formulation f, int rows, int cols, double st);

// The block to be factorized for the given preconditioner block. When
// uw_u_scaled_by_st is true, UW_U uses I + st*H^T H instead of the paper's
// literal I + H^T H.
SparseOperator assemble_precond_target(PrecondBlock block, int rows, int cols,
                                       double st, bool uw_u_scaled_by_st = false);

}  // namespace tgv

#endif
