#ifndef TGV_GRID_OPS_HPP
#define TGV_GRID_OPS_HPP

#include "tgv/fields.hpp"

namespace tgv {

// Matrix-free forward differences with constant boundary extension
// (u_{M+1,j} = u_{M,j}), their explicit transposed-stencil adjoints, and the
// derived first/second-order operators. Grid spacing h = 1 throughout.

ScalarField d1_forward(const ScalarField& u);
ScalarField d2_forward(const ScalarField& u);
ScalarField d1_adjoint(const ScalarField& y);
ScalarField d2_adjoint(const ScalarField& y);

VectorField grad(const ScalarField& u);
// Negative adjoint of grad: <grad u, v> = -<u, div v> for all u, v.
ScalarField divergence(const VectorField& v);

TensorField symgrad(const VectorField& v);
VectorField symgrad_adjoint(const TensorField& q);

// Channels (d1 v1, d2 v1, d1 v2, d2 v2).
TensorField jacobian(const VectorField& v);
VectorField jacobian_adjoint(const TensorField& q);

// symgrad(grad(u)), same arithmetic path.
TensorField hessian(const ScalarField& u);
// H^T q = -div(symgrad_adjoint(q)).
ScalarField hessian_adjoint(const TensorField& q);

}  // namespace tgv

#endif
