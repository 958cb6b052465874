#include "tgv/problems.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "tgv/grid_ops.hpp"
#include "tgv/prox.hpp"

namespace tgv {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double ball_indicator(double norm_value, double delta) {
  return norm_value <= indicator_tolerance(delta) ? 0.0 : kInf;
}
}  // namespace

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::RofConstrained: return "rof";
    case Variant::Dgtv1: return "dgtv1";
    case Variant::Dgtv2: return "dgtv2";
    case Variant::Dgtgv1: return "dgtgv1";
    case Variant::Tgv: return "tgv";
    case Variant::Mtgv: return "mtgv";
    case Variant::MtgvW: return "mtgv-w";
    case Variant::Ctgv: return "ctgv";
  }
  return "?";
}

Formulation formulation_of(Variant v) {
  switch (v) {
    case Variant::RofConstrained:
    case Variant::Dgtv2: return Formulation::U;
    case Variant::Dgtv1:
    case Variant::Dgtgv1: return Formulation::V;
    case Variant::Tgv:
    case Variant::Mtgv: return Formulation::UV;
    case Variant::MtgvW:
    case Variant::Ctgv: return Formulation::UW;
  }
  throw std::invalid_argument("unknown variant");
}

void ProblemSpec::validate() const {
  if (u0.empty() || u0.rows < 2 || u0.cols < 2)
    throw std::invalid_argument("ProblemSpec: u0 must be at least 2x2");
  if (!all_finite(u0)) throw std::invalid_argument("ProblemSpec: u0 has non-finite entries");
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("ProblemSpec: c must be in (0,1)");
  auto need_nonneg = [](double v, const char* what) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string("ProblemSpec: missing/negative ") + what);
  };
  auto need_pos = [](double v, const char* what) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string("ProblemSpec: missing/nonpositive ") + what);
  };
  switch (variant) {
    case Variant::RofConstrained: need_nonneg(delta1, "delta1"); break;
    case Variant::Dgtv1: need_nonneg(delta2, "delta2"); break;
    case Variant::Dgtv2:
      need_nonneg(delta1, "delta1");
      if (vhat.empty()) throw std::invalid_argument("ProblemSpec: Dgtv2 requires vhat");
      if (vhat.rows != u0.rows || vhat.cols != u0.cols)
        throw std::invalid_argument("ProblemSpec: vhat shape mismatch");
      break;
    case Variant::Dgtgv1: need_pos(alpha, "alpha"); break;
    case Variant::Tgv:
      need_pos(alpha0, "alpha0");
      need_pos(alpha1, "alpha1");
      break;
    case Variant::Mtgv:
    case Variant::MtgvW:
      need_nonneg(delta1, "delta1");
      need_pos(alpha, "alpha");
      break;
    case Variant::Ctgv:
      need_nonneg(delta1, "delta1");
      need_nonneg(delta2, "delta2");
      break;
  }
}

Model::Model(ProblemSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  grad_u0_ = grad(spec_.u0);
  h_u0_ = symgrad(grad_u0_);
  switch (spec_.variant) {
    case Variant::RofConstrained:
    case Variant::Dgtv2:
      has_u_ = true;
      has_p_ = true;
      break;
    case Variant::Dgtv1:
    case Variant::Dgtgv1:
      has_vec_ = true;
      has_q_ = true;
      break;
    case Variant::Tgv:
    case Variant::Mtgv:
      has_u_ = has_vec_ = has_p_ = has_q_ = true;
      break;
    case Variant::MtgvW:
    case Variant::Ctgv:
      has_u_ = has_vec_ = true;
      has_q_ = true;
      break;
  }
}

DualState Model::apply_K(const PrimalState& x) const {
  DualState y;
  switch (spec_.variant) {
    case Variant::RofConstrained:
    case Variant::Dgtv2:
      y.p = grad(x.u);
      break;
    case Variant::Dgtv1:
    case Variant::Dgtgv1:
      y.q = symgrad(x.vec);
      break;
    case Variant::Tgv:
    case Variant::Mtgv:
      y.p = sub(grad(x.u), x.vec);
      y.q = symgrad(x.vec);
      break;
    case Variant::MtgvW:
    case Variant::Ctgv:
      y.q = symgrad(sub(grad(x.u), x.vec));
      break;
  }
  return y;
}

PrimalState Model::apply_K_adjoint(const DualState& y) const {
  PrimalState x;
  switch (spec_.variant) {
    case Variant::RofConstrained:
    case Variant::Dgtv2: {
      x.u = divergence(y.p);
      for (double& v : x.u.data) v = -v;  // grad^T = -div
      break;
    }
    case Variant::Dgtv1:
    case Variant::Dgtgv1:
      x.vec = symgrad_adjoint(y.q);
      break;
    case Variant::Tgv:
    case Variant::Mtgv: {
      x.u = divergence(y.p);
      for (double& v : x.u.data) v = -v;
      x.vec = lin_comb(symgrad_adjoint(y.q), -1.0, y.p);
      break;
    }
    case Variant::MtgvW:
    case Variant::Ctgv: {
      const VectorField g = symgrad_adjoint(y.q);
      x.u = divergence(g);
      for (double& v : x.u.data) v = -v;
      x.vec = scaled(g, -1.0);
      break;
    }
  }
  return x;
}

PrimalState Model::prox_F(PrimalState x, double tau) const {
  switch (spec_.variant) {
    case Variant::RofConstrained:
    case Variant::Dgtv2:
      x.u = project_l2_ball(x.u, spec_.u0, spec_.delta1);
      break;
    case Variant::Dgtv1:
      x.vec = project_l1_l2_ball(x.vec, &grad_u0_, spec_.delta2);
      break;
    case Variant::Dgtgv1:
      x.vec = group_soft_threshold(x.vec, tau);
      break;
    case Variant::Tgv:
      x.u = prox_tgv_data(x.u, spec_.u0, tau);
      break;
    case Variant::Mtgv:
      x.u = project_l2_ball(x.u, spec_.u0, spec_.delta1);
      break;
    case Variant::MtgvW:
      x.u = project_l2_ball(x.u, spec_.u0, spec_.delta1);
      x.vec = group_soft_threshold(x.vec, tau);
      break;
    case Variant::Ctgv:
      x.u = project_l2_ball(x.u, spec_.u0, spec_.delta1);
      x.vec = project_l1_l2_ball(x.vec, nullptr, spec_.delta2);
      break;
  }
  return x;
}

DualState Model::prox_G_conj(DualState y, double sigma) const {
  switch (spec_.variant) {
    case Variant::RofConstrained:
      y.p = project_linf_l2_ball(y.p, 1.0);
      break;
    case Variant::Dgtv2:
      y.p = prox_shifted_linf(y.p, sigma, spec_.vhat, 1.0);
      break;
    case Variant::Dgtv1:
      y.q = project_linf_l2_ball(y.q, 1.0);
      break;
    case Variant::Dgtgv1:
      y.q = prox_shifted_linf(y.q, sigma, h_u0_, spec_.alpha);
      break;
    case Variant::Tgv:
      y.p = project_linf_l2_ball(y.p, spec_.alpha1);
      y.q = project_linf_l2_ball(y.q, spec_.alpha0);
      break;
    case Variant::Mtgv:
      y.p = project_linf_l2_ball(y.p, 1.0);
      y.q = project_linf_l2_ball(y.q, spec_.alpha);
      break;
    case Variant::MtgvW:
      y.q = project_linf_l2_ball(y.q, spec_.alpha);
      break;
    case Variant::Ctgv:
      y.q = project_linf_l2_ball(y.q, 1.0);
      break;
  }
  return y;
}

double Model::objective_smooth_part(const PrimalState& x) const {
  switch (spec_.variant) {
    case Variant::RofConstrained:
      return mixed_norm_l1(grad(x.u));
    case Variant::Dgtv2:
      return mixed_norm_l1(sub(grad(x.u), spec_.vhat));
    case Variant::Dgtv1:
      return mixed_norm_l1(symgrad(x.vec));
    case Variant::Dgtgv1:
      return mixed_norm_l1(x.vec) +
             spec_.alpha * mixed_norm_l1(sub(h_u0_, symgrad(x.vec)));
    case Variant::Tgv: {
      const ScalarField diff = sub(x.u, spec_.u0);
      return spec_.alpha1 * mixed_norm_l1(sub(grad(x.u), x.vec)) +
             spec_.alpha0 * mixed_norm_l1(symgrad(x.vec)) +
             0.5 * inner(diff, diff);
    }
    case Variant::Mtgv:
      return mixed_norm_l1(sub(grad(x.u), x.vec)) +
             spec_.alpha * mixed_norm_l1(symgrad(x.vec));
    case Variant::MtgvW:
      return mixed_norm_l1(x.vec) +
             spec_.alpha * mixed_norm_l1(symgrad(sub(grad(x.u), x.vec)));
    case Variant::Ctgv:
      return mixed_norm_l1(symgrad(sub(grad(x.u), x.vec)));
  }
  throw std::logic_error("unknown variant");
}

double Model::primal_objective(const PrimalState& x) const {
  double ind = 0.0;
  switch (spec_.variant) {
    case Variant::RofConstrained:
    case Variant::Dgtv2:
    case Variant::Mtgv:
    case Variant::MtgvW:
      ind = ball_indicator(norm_l2(sub(x.u, spec_.u0)), spec_.delta1);
      break;
    case Variant::Dgtv1:
      ind = ball_indicator(mixed_norm_l1(sub(grad_u0_, x.vec)), spec_.delta2);
      break;
    case Variant::Ctgv:
      ind = ball_indicator(norm_l2(sub(x.u, spec_.u0)), spec_.delta1) +
            ball_indicator(mixed_norm_l1(x.vec), spec_.delta2);
      break;
    case Variant::Dgtgv1:
    case Variant::Tgv:
      break;
  }
  if (std::isinf(ind)) return kInf;
  return objective_smooth_part(x) + ind;
}

namespace {

// delta1*||grad^T p||_2 + <grad^T p, -u0> written via div: grad^T = -div.
double fstar_l2_terms(const VectorField& p, const ScalarField& u0, double delta1,
                      bool squared) {
  ScalarField d = divergence(p);
  const double nrm = norm_l2(d);
  const double ip = inner(d, u0);
  return squared ? 0.5 * nrm * nrm + ip : delta1 * nrm + ip;
}

}  // namespace

double Model::gap(const PrimalState& x, const DualState& y) const {
  const double primal = primal_objective(x);
  if (std::isinf(primal)) return kInf;
  const ProblemSpec& s = spec_;
  switch (s.variant) {
    case Variant::RofConstrained:
    case Variant::Dgtv2: {
      if (mixed_norm_linf(y.p) > indicator_tolerance(1.0)) return kInf;
      double g = primal + fstar_l2_terms(y.p, s.u0, s.delta1, false);
      if (s.variant == Variant::Dgtv2) g += inner(s.vhat, y.p);
      return g;
    }
    case Variant::Dgtv1: {
      if (mixed_norm_linf(y.q) > indicator_tolerance(1.0)) return kInf;
      const VectorField eq = symgrad_adjoint(y.q);
      return primal + s.delta2 * mixed_norm_linf(eq) - inner(eq, grad_u0_);
    }
    case Variant::Dgtgv1: {
      if (mixed_norm_linf(y.q) > indicator_tolerance(s.alpha)) return kInf;
      if (mixed_norm_linf(symgrad_adjoint(y.q)) > indicator_tolerance(1.0)) return kInf;
      return primal + inner(h_u0_, y.q);
    }
    case Variant::Tgv:
    case Variant::Mtgv: {
      const double bp = s.variant == Variant::Tgv ? s.alpha1 : 1.0;
      const double bq = s.variant == Variant::Tgv ? s.alpha0 : s.alpha;
      if (mixed_norm_linf(y.p) > indicator_tolerance(bp)) return kInf;
      if (mixed_norm_linf(y.q) > indicator_tolerance(bq)) return kInf;
      // coupling constraint p = symgrad^* q
      const VectorField r = sub(y.p, symgrad_adjoint(y.q));
      if (norm_l2(r) > indicator_tolerance(0.0) * (1.0 + norm_l2(y.p))) return kInf;
      return primal + fstar_l2_terms(y.p, s.u0, s.delta1, s.variant == Variant::Tgv);
    }
    case Variant::MtgvW: {
      if (mixed_norm_linf(y.q) > indicator_tolerance(s.alpha)) return kInf;
      const VectorField eq = symgrad_adjoint(y.q);
      if (mixed_norm_linf(eq) > indicator_tolerance(1.0)) return kInf;
      return primal + fstar_l2_terms(eq, s.u0, s.delta1, false);
    }
    case Variant::Ctgv: {
      if (mixed_norm_linf(y.q) > indicator_tolerance(1.0)) return kInf;
      const VectorField eq = symgrad_adjoint(y.q);
      return primal + fstar_l2_terms(eq, s.u0, s.delta1, false) +
             s.delta2 * mixed_norm_linf(eq);
    }
  }
  throw std::logic_error("unknown variant");
}

double Model::gap_modified(const PrimalState& x, const DualState& y) const {
  const ProblemSpec& s = spec_;
  // The dual iterate must satisfy its prox-maintained ball constraint; the
  // remaining constraint (on symgrad^* q) is enforced by rescaling.
  auto check = [](double norm_value, double bound) {
    if (norm_value > bound * (1.0 + 1e-9) + 1e-12)
      throw std::domain_error("gap_modified: infeasible dual variable");
  };
  const double primal = primal_objective(x);
  if (std::isinf(primal)) return kInf;
  switch (s.variant) {
    case Variant::RofConstrained:
    case Variant::Dgtv2: {
      check(mixed_norm_linf(y.p), 1.0);
      const double scale = std::max(1.0, mixed_norm_linf(y.p));
      const VectorField pt = scaled(y.p, 1.0 / scale);
      double g = primal + fstar_l2_terms(pt, s.u0, s.delta1, false);
      if (s.variant == Variant::Dgtv2) g += inner(s.vhat, pt);
      return g;
    }
    case Variant::Dgtv1: {
      check(mixed_norm_linf(y.q), 1.0);
      const double scale = std::max(1.0, mixed_norm_linf(y.q));
      const VectorField eq = scaled(symgrad_adjoint(y.q), 1.0 / scale);
      return primal + s.delta2 * mixed_norm_linf(eq) - inner(eq, grad_u0_);
    }
    case Variant::Dgtgv1: {
      check(mixed_norm_linf(y.q), s.alpha);
      const VectorField eq = symgrad_adjoint(y.q);
      const double scale = std::max({1.0, mixed_norm_linf(y.q) / s.alpha,
                                     mixed_norm_linf(eq)});
      return primal + inner(h_u0_, y.q) / scale;
    }
    case Variant::Tgv:
    case Variant::Mtgv:
    case Variant::MtgvW: {
      const double bq = s.variant == Variant::Tgv ? s.alpha0 : s.alpha;
      const double bp = s.variant == Variant::Tgv ? s.alpha1 : 1.0;
      check(mixed_norm_linf(y.q), bq);
      VectorField eq = symgrad_adjoint(y.q);
      const double scale = std::max({1.0, mixed_norm_linf(y.q) / bq,
                                     mixed_norm_linf(eq) / bp});
      eq = scaled(eq, 1.0 / scale);
      return primal + fstar_l2_terms(eq, s.u0, s.delta1, s.variant == Variant::Tgv);
    }
    case Variant::Ctgv: {
      check(mixed_norm_linf(y.q), 1.0);
      const double scale = std::max(1.0, mixed_norm_linf(y.q));
      const VectorField eq = scaled(symgrad_adjoint(y.q), 1.0 / scale);
      return primal + fstar_l2_terms(eq, s.u0, s.delta1, false) +
             s.delta2 * mixed_norm_linf(eq);
    }
  }
  throw std::logic_error("unknown variant");
}

double Model::relative_gap(const PrimalState& x, const DualState& y) const {
  return gap_modified(x, y) / (1.0 + std::fabs(objective_smooth_part(x)));
}

PrimalState Model::initial_primal() const {
  PrimalState x;
  if (has_u_) x.u = spec_.u0;
  if (has_vec_) x.vec = VectorField(spec_.rows(), spec_.cols(), 0.0);
  return x;
}

DualState Model::initial_dual() const {
  DualState y;
  if (has_p_) y.p = VectorField(spec_.rows(), spec_.cols(), 0.0);
  if (has_q_) y.q = TensorField(spec_.rows(), spec_.cols(), 0.0);
  return y;
}

PrimalState Model::to_w_variables(const PrimalState& x) const {
  PrimalState out;
  out.u = x.u;
  out.vec = sub(grad(x.u), x.vec);
  return out;
}

PrimalState Model::from_w_variables(const PrimalState& x) const {
  PrimalState out;
  out.u = x.u;
  out.vec = sub(grad(x.u), x.vec);  // involution: v = grad u - w
  return out;
}

int Model::primal_size() const {
  const int n = spec_.rows() * spec_.cols();
  return (has_u_ ? n : 0) + (has_vec_ ? 2 * n : 0);
}

int Model::dual_size() const {
  const int n = spec_.rows() * spec_.cols();
  return (has_p_ ? 2 * n : 0) + (has_q_ ? 4 * n : 0);
}

void Model::pack_primal(const PrimalState& x, double* out) const {
  std::size_t off = 0;
  if (has_u_) {
    std::memcpy(out, x.u.data.data(), x.u.size() * sizeof(double));
    off += x.u.size();
  }
  if (has_vec_) std::memcpy(out + off, x.vec.data.data(), x.vec.size() * sizeof(double));
}

PrimalState Model::unpack_primal(const double* in) const {
  PrimalState x;
  const int r = spec_.rows(), c = spec_.cols();
  std::size_t off = 0;
  if (has_u_) {
    x.u = ScalarField(r, c);
    std::memcpy(x.u.data.data(), in, x.u.size() * sizeof(double));
    off += x.u.size();
  }
  if (has_vec_) {
    x.vec = VectorField(r, c);
    std::memcpy(x.vec.data.data(), in + off, x.vec.size() * sizeof(double));
  }
  return x;
}

void Model::pack_dual(const DualState& y, double* out) const {
  std::size_t off = 0;
  if (has_p_) {
    std::memcpy(out, y.p.data.data(), y.p.size() * sizeof(double));
    off += y.p.size();
  }
  if (has_q_) std::memcpy(out + off, y.q.data.data(), y.q.size() * sizeof(double));
}

DualState Model::unpack_dual(const double* in) const {
  DualState y;
  const int r = spec_.rows(), c = spec_.cols();
  std::size_t off = 0;
  if (has_p_) {
    y.p = VectorField(r, c);
    std::memcpy(y.p.data.data(), in, y.p.size() * sizeof(double));
    off += y.p.size();
  }
  if (has_q_) {
    y.q = TensorField(r, c);
    std::memcpy(y.q.data.data(), in + off, y.q.size() * sizeof(double));
  }
  return y;
}

DualState apply_K(const ProblemSpec& s, const PrimalState& x) {
  return Model(s).apply_K(x);
}
PrimalState apply_K_adjoint(const ProblemSpec& s, const DualState& y) {
  return Model(s).apply_K_adjoint(y);
}
PrimalState prox_F(const ProblemSpec& s, PrimalState x, double tau) {
  return Model(s).prox_F(std::move(x), tau);
}
DualState prox_G_conj(const ProblemSpec& s, DualState y, double sigma) {
  return Model(s).prox_G_conj(std::move(y), sigma);
}
double primal_objective(const ProblemSpec& s, const PrimalState& x) {
  return Model(s).primal_objective(x);
}
double gap(const ProblemSpec& s, const PrimalState& x, const DualState& y) {
  return Model(s).gap(x, y);
}
double gap_modified(const ProblemSpec& s, const PrimalState& x, const DualState& y) {
  return Model(s).gap_modified(x, y);
}
PrimalState to_w_variables(const ProblemSpec& s, const PrimalState& x) {
  return Model(s).to_w_variables(x);
}
PrimalState from_w_variables(const ProblemSpec& s, const PrimalState& x) {
  return Model(s).from_w_variables(x);
}

}  // namespace tgv
