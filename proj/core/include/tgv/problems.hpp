#ifndef TGV_PROBLEMS_HPP
#define TGV_PROBLEMS_HPP

#include <string>

#include "tgv/assembly.hpp"
#include "tgv/fields.hpp"

namespace tgv {

// Saddle-point formulations min_x F(x) + G(Kx) of the denoising models.
//
//   RofConstrained: min ||| grad u |||_1            s.t. ||u-u0||_2 <= delta1
//   Dgtv1:          min ||| symgrad v |||_1         s.t. |||grad u0 - v|||_1 <= delta2
//   Dgtv2:          min ||| grad u - vhat |||_1     s.t. ||u-u0||_2 <= delta1
//   Dgtgv1 (in w = grad u0 - v):
//                   min |||w|||_1 + alpha*||| H u0 - symgrad w |||_1
//   Tgv:            min a1*|||grad u - v|||_1 + a0*|||symgrad v|||_1 + 1/2||u-u0||^2
//   Mtgv:           min |||grad u - v|||_1 + alpha*|||symgrad v|||_1   s.t. ball
//   MtgvW (w = grad u - v):
//                   min |||w|||_1 + alpha*|||symgrad(grad u - w)|||_1  s.t. ball
//   Ctgv:           min |||symgrad(grad u - w)|||_1
//                       s.t. ||u-u0|| <= delta1, |||w|||_1 <= delta2

enum class Variant {
  RofConstrained,
  Dgtv1,
  Dgtv2,
  Dgtgv1,
  Tgv,
  Mtgv,
  MtgvW,
  Ctgv
};

std::string variant_name(Variant v);

struct ProblemSpec {
  Variant variant = Variant::Mtgv;
  ScalarField u0;
  VectorField vhat;  // stage-2 gradient estimate; required for Dgtv2
  double delta1 = 0.0;
  double delta2 = 0.0;
  double alpha = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double c = 0.99;

  int rows() const { return u0.rows; }
  int cols() const { return u0.cols; }
  void validate() const;  // throws if variant-required parameters are missing
};

struct PrimalState {
  ScalarField u;    // empty for gradient-stage problems
  VectorField vec;  // v or w; empty for scalar problems
};

struct DualState {
  VectorField p;  // empty unless the variant has a vector-shaped dual
  TensorField q;  // empty unless the variant has a tensor-shaped dual
};

// Constraint satisfaction slack: ||.|| <= delta counts as satisfied up to
// delta*(1+1e-6) + 1e-12.
inline double indicator_tolerance(double delta) { return delta * (1.0 + 1e-6) + 1e-12; }

Formulation formulation_of(Variant v);

// Bound spec with precomputed operator data (grad u0, H u0). All evaluations
// are const and thread-safe.
class Model {
 public:
  explicit Model(ProblemSpec spec);

  const ProblemSpec& spec() const { return spec_; }
  const VectorField& grad_u0() const { return grad_u0_; }
  const TensorField& h_u0() const { return h_u0_; }

  bool has_u() const { return has_u_; }
  bool has_vec() const { return has_vec_; }
  bool has_p() const { return has_p_; }
  bool has_q() const { return has_q_; }

  DualState apply_K(const PrimalState& x) const;
  PrimalState apply_K_adjoint(const DualState& y) const;

  PrimalState prox_F(PrimalState x, double tau) const;
  DualState prox_G_conj(DualState y, double sigma) const;

  // Literal objective / gap with indicators (+inf outside tolerance).
  double primal_objective(const PrimalState& x) const;
  double objective_smooth_part(const PrimalState& x) const;  // without indicators
  double gap(const PrimalState& x, const DualState& y) const;

  // Finite stopping gap: dual variables rescaled onto the conjugate-feasible
  // set (q -> q~ with |||q~|||_inf and |||symgrad* q~|||_inf both in bounds).
  // Throws if the algorithm-maintained dual constraint is violated by more
  // than 1e-9 relative.
  double gap_modified(const PrimalState& x, const DualState& y) const;
  double relative_gap(const PrimalState& x, const DualState& y) const;

  PrimalState initial_primal() const;
  DualState initial_dual() const;

  PrimalState to_w_variables(const PrimalState& x) const;    // (u,v) -> (u, grad u - v)
  PrimalState from_w_variables(const PrimalState& x) const;  // inverse

  // Flat packing in the documented stacking order (u block, then channels).
  int primal_size() const;
  int dual_size() const;
  void pack_primal(const PrimalState& x, double* out) const;
  PrimalState unpack_primal(const double* in) const;
  void pack_dual(const DualState& y, double* out) const;
  DualState unpack_dual(const double* in) const;

 private:
  ProblemSpec spec_;
  VectorField grad_u0_;
  TensorField h_u0_;
  bool has_u_ = false, has_vec_ = false, has_p_ = false, has_q_ = false;
};

// Stateless convenience wrappers matching the operation names.
DualState apply_K(const ProblemSpec& s, const PrimalState& x);
PrimalState apply_K_adjoint(const ProblemSpec& s, const DualState& y);
PrimalState prox_F(const ProblemSpec& s, PrimalState x, double tau);
DualState prox_G_conj(const ProblemSpec& s, DualState y, double sigma);
double primal_objective(const ProblemSpec& s, const PrimalState& x);
double gap(const ProblemSpec& s, const PrimalState& x, const DualState& y);
double gap_modified(const ProblemSpec& s, const PrimalState& x, const DualState& y);
PrimalState to_w_variables(const ProblemSpec& s, const PrimalState& x);
PrimalState from_w_variables(const ProblemSpec& s, const PrimalState& x);

}  // namespace tgv

#endif
