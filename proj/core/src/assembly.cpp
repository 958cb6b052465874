#include "tgv/assembly.hpp"

#include <stdexcept>

namespace tgv {

namespace {
void check_dims(int rows, int cols) {
  if (rows < 2 || cols < 2)
    throw std::invalid_argument("assembly: grid dimensions must be at least 2x2");
}
}  // namespace

SparseOperator assemble_d(int direction, int rows, int cols) {
  check_dims(rows, cols);
  const int n = rows * cols;
  std::vector<CooEntry> coo;
  coo.reserve(2 * static_cast<std::size_t>(n));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int p = i * cols + j;
      if (direction == 1) {
        if (i < rows - 1) {
          coo.push_back({p, p, -1.0});
          coo.push_back({p, p + cols, 1.0});
        }
      } else if (direction == 2) {
        if (j < cols - 1) {
          coo.push_back({p, p, -1.0});
          coo.push_back({p, p + 1, 1.0});
        }
      } else {
        throw std::invalid_argument("assemble_d: direction must be 1 or 2");
      }
    }
  }
  return from_coo(n, n, std::move(coo));
}

SparseOperator assemble_grad(int rows, int cols) {
  const SparseOperator d1 = assemble_d(1, rows, cols);
  const SparseOperator d2 = assemble_d(2, rows, cols);
  const int n = rows * cols;
  std::vector<CooEntry> coo;
  append_block(coo, d1, 0, 0, 1.0);
  append_block(coo, d2, n, 0, 1.0);
  return from_coo(2 * n, n, std::move(coo));
}

SparseOperator assemble_symgrad(int rows, int cols) {
  const SparseOperator d1 = assemble_d(1, rows, cols);
  const SparseOperator d2 = assemble_d(2, rows, cols);
  const int n = rows * cols;
  std::vector<CooEntry> coo;
  append_block(coo, d1, 0, 0, 1.0);
  append_block(coo, d2, n, 0, 0.5);
  append_block(coo, d1, n, n, 0.5);
  append_block(coo, d2, 2 * n, 0, 0.5);
  append_block(coo, d1, 2 * n, n, 0.5);
  append_block(coo, d2, 3 * n, n, 1.0);
  return from_coo(4 * n, 2 * n, std::move(coo));
}

SparseOperator assemble_jacobian(int rows, int cols) {
  const SparseOperator d1 = assemble_d(1, rows, cols);
  const SparseOperator d2 = assemble_d(2, rows, cols);
  const int n = rows * cols;
  std::vector<CooEntry> coo;
  append_block(coo, d1, 0, 0, 1.0);
  append_block(coo, d2, n, 0, 1.0);
  append_block(coo, d1, 2 * n, n, 1.0);
  append_block(coo, d2, 3 * n, n, 1.0);
  return from_coo(4 * n, 2 * n, std::move(coo));
}

SparseOperator assemble_hessian(int rows, int cols) {
  return matmul(assemble_symgrad(rows, cols), assemble_grad(rows, cols));
}

SparseOperator assemble_k(Formulation f, int rows, int cols) {
  check_dims(rows, cols);
  const int n = rows * cols;
  switch (f) {
    case Formulation::U:
      return assemble_grad(rows, cols);
    case Formulation::V:
      return assemble_symgrad(rows, cols);
    case Formulation::UV: {
      // [grad, -I; 0, symgrad] : (u,v) -> (grad u - v, symgrad v)
      const SparseOperator g = assemble_grad(rows, cols);
      const SparseOperator e = assemble_symgrad(rows, cols);
      const SparseOperator id2 = SparseOperator::identity(2 * n);
      std::vector<CooEntry> coo;
      append_block(coo, g, 0, 0, 1.0);
      append_block(coo, id2, 0, n, -1.0);
      append_block(coo, e, 2 * n, n, 1.0);
      return from_coo(6 * n, 3 * n, std::move(coo));
    }
    case Formulation::UW: {
      // symgrad*[grad, -I] = [H, -symgrad] : (u,w) -> H u - symgrad w
      const SparseOperator h = assemble_hessian(rows, cols);
      const SparseOperator e = assemble_symgrad(rows, cols);
      std::vector<CooEntry> coo;
      append_block(coo, h, 0, 0, 1.0);
      append_block(coo, e, 0, n, -1.0);
      return from_coo(4 * n, 3 * n, std::move(coo));
    }
  }
  throw std::invalid_argument("assemble_k: unknown formulation");
}

SparseOperator assemble_ktk(Formulation f, int rows, int cols, double st) {
  if (!(st > 0.0)) throw std::invalid_argument("assemble_ktk: st must be > 0");
  const SparseOperator k = assemble_k(f, rows, cols);
  const SparseOperator ktk = matmul(transposed(k), k);
  return add(1.0, SparseOperator::identity(ktk.nrows), st, ktk);
}

SparseOperator assemble_precond_target(PrecondBlock block, int rows, int cols,
                                       double st, bool uw_u_scaled_by_st) {
  check_dims(rows, cols);
  if (!(st > 0.0)) throw std::invalid_argument("assemble_precond_target: st must be > 0");
  const int n = rows * cols;
  auto jtj = [&] {  // block-diagonal vector Laplacian
    const SparseOperator j = assemble_jacobian(rows, cols);
    return matmul(transposed(j), j);
  };
  switch (block) {
    case PrecondBlock::UV_U: {
      const SparseOperator g = assemble_grad(rows, cols);
      const SparseOperator lap = matmul(transposed(g), g);  // -Delta
      return add(1.0, SparseOperator::identity(n), st, lap);
    }
    case PrecondBlock::UV_V:
      return add(1.0 + st, SparseOperator::identity(2 * n), st, jtj());
    case PrecondBlock::UW_U: {
      const SparseOperator h = assemble_hessian(rows, cols);
      const SparseOperator hth = matmul(transposed(h), h);
      return add(1.0, SparseOperator::identity(n), uw_u_scaled_by_st ? st : 1.0, hth);
    }
    case PrecondBlock::UW_W:
    case PrecondBlock::V:
      return add(1.0, SparseOperator::identity(2 * n), st, jtj());
  }
  throw std::invalid_argument("assemble_precond_target: unknown block");
}

}  // namespace tgv
