#ifndef TGV_PROX_HPP
#define TGV_PROX_HPP

#include <optional>

#include "tgv/fields.hpp"

namespace tgv {

// Proximal operators and ball projections. All are exact Euclidean
// projections / prox maps; see project_l2_ball for the min-form convention.

struct BallSpec {
  enum class Kind { L2_AROUND_CENTER, LINF_OF_L2, L1_OF_L2 };
  Kind kind;
  double radius = 0.0;
};

// Projection onto {x : ||x - center||_2 <= delta}. Implemented with
// min(delta/||u-u0||, 1) scaling; interior points are left unchanged.
ScalarField project_l2_ball(const ScalarField& u, const ScalarField& center,
                            double delta);

// Pointwise shrink of each pixel group onto the Euclidean ball of radius
// delta: v / max(1, |v|/delta).
VectorField project_linf_l2_ball(const VectorField& x, double delta);
TensorField project_linf_l2_ball(const TensorField& x, double delta);

// Projection onto {y : |||y - center|||_1 <= delta} (center defaults to 0):
// group soft-thresholding at the exact multiplier found by sort-based search
// over the piecewise-linear breakpoints, with bisection fallback.
VectorField project_l1_l2_ball(const VectorField& x,
                               const VectorField* center, double delta);
TensorField project_l1_l2_ball(const TensorField& x,
                               const TensorField* center, double delta);

// prox_{tau*F}(x) = x - tau * prox_conj(x / tau), Moreau's identity with an
// indicator conjugate (prox_conj is then a plain projection).
template <class Field, class Projector>
Field prox_via_moreau(Projector&& prox_conj, double tau, const Field& x) {
  Field inner = x;
  for (double& v : inner.data) v /= tau;
  Field proj = prox_conj(inner);
  Field out = x;
  for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] -= tau * proj.data[k];
  return out;
}

// prox of tau*|||.|||_1 (group soft threshold by tau).
VectorField group_soft_threshold(const VectorField& x, double tau);
TensorField group_soft_threshold(const TensorField& x, double tau);

// prox of the quadratic data term: (u + t*u0)/(1 + t).
ScalarField prox_tgv_data(const ScalarField& u, const ScalarField& u0, double t);

// proj_{|||.|||_inf <= delta}(q - sigma*shift).
TensorField prox_shifted_linf(const TensorField& q, double sigma,
                              const TensorField& shift, double delta);
VectorField prox_shifted_linf(const VectorField& p, double sigma,
                              const VectorField& shift, double delta);

}  // namespace tgv

#endif
