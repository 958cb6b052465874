#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tgv/prox.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace tgv;
using tgv_test::Rng;
using tgv_test::enumerate_l1_projection;
using tgv_test::pg_oracle_l1_projection;

namespace {

double mixed_l1(const VectorField& v) { return mixed_norm_l1(v); }

}  // namespace

TEST_CASE("l2 ball projection: basic cases and minimality oracle") {
  Rng rng(101);
  const ScalarField u0 = tgv_test::random_scalar(rng, 3, 3);
  const double delta = 0.7;

  // feasible point unchanged
  ScalarField inside = u0;
  inside.data[0] += 0.5 * delta;
  CHECK(tgv_test::max_abs_diff(project_l2_ball(inside, u0, delta), inside) == 0.0);

  // radial scaling: u0 + 2*delta*e -> u0 + delta*e
  ScalarField far = u0;
  far.data[4] += 2.0 * delta;
  const ScalarField proj = project_l2_ball(far, u0, delta);
  CHECK(proj.data[4] == doctest::Approx(u0.data[4] + delta));

  // delta = 0 returns the center
  CHECK(tgv_test::max_abs_diff(project_l2_ball(far, u0, 0.0), u0) == 0.0);

  // minimality against random feasible candidates (brute-force oracle)
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField x = tgv_test::random_scalar(rng, 3, 3);
    for (double& v : x.data) v *= 3.0;
    const ScalarField p = project_l2_ball(x, u0, delta);
    CHECK(norm_l2(sub(p, u0)) <= delta * (1.0 + 1e-12));
    const double dist = norm_l2(sub(p, x));
    for (int cand = 0; cand < 2000; ++cand) {
      ScalarField y = tgv_test::random_scalar(rng, 3, 3);
      const double ny = norm_l2(y);
      const double r = delta * rng.uniform();
      for (std::size_t k = 0; k < y.data.size(); ++k)
        y.data[k] = u0.data[k] + (ny > 0 ? r * y.data[k] / ny : 0.0);
      CHECK(norm_l2(sub(y, x)) >= dist - 1e-9);
    }
  }
}

TEST_CASE("pointwise linf-of-l2 projection") {
  VectorField v(2, 2, 0.0);
  v.data[0] = 3.0;
  v.data[4] = 4.0;  // group (3,4) at pixel 0
  const VectorField p = project_linf_l2_ball(v, 1.0);
  CHECK(p.data[0] == doctest::Approx(0.6));
  CHECK(p.data[4] == doctest::Approx(0.8));

  Rng rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField x = tgv_test::random_vector(rng, 4, 4);
    const double delta = rng.uniform(0.1, 2.0);
    const VectorField p1 = project_linf_l2_ball(x, delta);
    // feasibility and idempotence
    CHECK(mixed_norm_linf(p1) <= delta * (1.0 + 1e-12));
    CHECK(tgv_test::max_abs_diff(project_linf_l2_ball(p1, delta), p1) <= 1e-12);
    // groups already inside stay fixed
    const std::size_t n = x.pixels();
    for (std::size_t px = 0; px < n; ++px) {
      const double m = std::hypot(x.data[px], x.data[n + px]);
      if (m <= delta) {
        CHECK(p1.data[px] == x.data[px]);
        CHECK(p1.data[n + px] == x.data[n + px]);
      }
    }
  }
}

TEST_CASE("l1-of-l2 projection: hand-solved two-group case") {
  // groups with magnitudes (3, 1), delta = 2 -> lambda* = 1, magnitudes (2, 0)
  VectorField x(2, 2, 0.0);
  const std::size_t n = x.pixels();
  x.data[0] = 3.0;      // pixel 0 magnitude 3 along channel 1
  x.data[n + 1] = 1.0;  // pixel 1 magnitude 1 along channel 2
  const VectorField p = project_l1_l2_ball(x, nullptr, 2.0);
  CHECK(p.data[0] == doctest::Approx(2.0));
  CHECK(p.data[n + 1] == doctest::Approx(0.0));
  CHECK(mixed_l1(p) == doctest::Approx(2.0));
}

TEST_CASE("l1-of-l2 projection properties and boundary attainment") {
  Rng rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + static_cast<int>(rng.next_u64() % 4);
    const VectorField x = tgv_test::random_vector(rng, m, m);
    VectorField center = tgv_test::random_vector(rng, m, m);
    const bool with_center = trial % 2 == 0;
    const VectorField* cptr = with_center ? &center : nullptr;
    const double delta = rng.uniform(0.05, 0.5 * mixed_l1(x) + 0.1);
    const VectorField p = project_l1_l2_ball(x, cptr, delta);
    const VectorField diff = with_center ? sub(p, center) : p;
    const VectorField xdiff = with_center ? sub(x, center) : x;
    CHECK(mixed_l1(diff) <= delta * (1.0 + 1e-9) + 1e-12);
    // boundary attainment for infeasible inputs
    if (mixed_l1(xdiff) > delta)
      CHECK(std::fabs(mixed_l1(diff) - delta) <= 1e-9 * delta + 1e-12);
    // idempotence
    CHECK(tgv_test::max_abs_diff(project_l1_l2_ball(p, cptr, delta), p) <= 1e-12);
    // firm nonexpansiveness against a second point
    const VectorField x2 = tgv_test::random_vector(rng, m, m);
    const VectorField p2 = project_l1_l2_ball(x2, cptr, delta);
    const VectorField dp = sub(p, p2);
    CHECK(inner(dp, dp) <= inner(dp, sub(x, x2)) + 1e-12);
  }
  // delta = 0 returns the center
  Rng rng2(1);
  const VectorField x0 = tgv_test::random_vector(rng2, 3, 3);
  const VectorField c0 = tgv_test::random_vector(rng2, 3, 3);
  CHECK(tgv_test::max_abs_diff(project_l1_l2_ball(x0, &c0, 0.0), c0) == 0.0);
}

TEST_CASE("l1-of-l2 projection vs active-set enumeration oracle") {
  Rng rng(109);
  for (int trial = 0; trial < 60; ++trial) {
    const VectorField x = tgv_test::random_vector(rng, 3, 3);
    const double delta = rng.uniform(0.05, 4.0);
    const VectorField p = project_l1_l2_ball(x, nullptr, delta);
    const std::size_t n = x.pixels();
    std::vector<double> mags(n);
    for (std::size_t px = 0; px < n; ++px)
      mags[px] = std::hypot(x.data[px], x.data[n + px]);
    const std::vector<double> want = enumerate_l1_projection(mags, delta);
    for (std::size_t px = 0; px < n; ++px) {
      const double got = std::hypot(p.data[px], p.data[n + px]);
      CHECK(got == doctest::Approx(want[px]).epsilon(1e-10));
    }
  }
}

TEST_CASE("l1-of-l2 projection vs dual projected-gradient oracle on 2x2 fields") {
  Rng rng(113);
  for (int trial = 0; trial < 12; ++trial) {
    const VectorField x = tgv_test::random_vector(rng, 2, 2);
    const double delta = rng.uniform(0.1, 2.0);
    const VectorField got = project_l1_l2_ball(x, nullptr, delta);
    const VectorField want = pg_oracle_l1_projection(x, delta);
    CHECK(tgv_test::max_abs_diff(got, want) <= 1e-8);
  }
}

TEST_CASE("group soft threshold via Moreau") {
  VectorField w(2, 2, 0.0);
  const std::size_t n = w.pixels();
  w.data[0] = 0.0;
  w.data[n] = 5.0;  // group (0,5)
  w.data[1] = 0.3;  // group (0.3, 0) below tau
  const VectorField s = group_soft_threshold(w, 2.0);
  CHECK(s.data[0] == doctest::Approx(0.0));
  CHECK(s.data[n] == doctest::Approx(3.0));
  CHECK(s.data[1] == doctest::Approx(0.0));

  // agreement with the direct group-shrink formula on random fields
  Rng rng(127);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField x = tgv_test::random_vector(rng, 4, 5);
    const double tau = rng.uniform(0.05, 1.5);
    const VectorField got = group_soft_threshold(x, tau);
    VectorField want = x;
    const std::size_t np = x.pixels();
    for (std::size_t px = 0; px < np; ++px) {
      const double m = std::hypot(x.data[px], x.data[np + px]);
      const double f = m > tau ? (m - tau) / m : 0.0;
      want.data[px] *= f;
      want.data[np + px] *= f;
    }
    CHECK(tgv_test::max_abs_diff(got, want) <= 1e-12);
  }
}

TEST_CASE("Moreau consistency: prox_tF(x) + t*proj(x/t) = x") {
  Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    const TensorField x = tgv_test::random_tensor(rng, 3, 4);
    const double tau = rng.uniform(0.1, 2.0);
    const TensorField soft = group_soft_threshold(x, tau);
    TensorField scaled_x = x;
    for (double& v : scaled_x.data) v /= tau;
    const TensorField proj = project_linf_l2_ball(scaled_x, 1.0);
    double err = 0.0;
    for (std::size_t k = 0; k < x.data.size(); ++k)
      err = std::max(err, std::fabs(soft.data[k] + tau * proj.data[k] - x.data[k]));
    CHECK(err <= 1e-12);
  }
}

TEST_CASE("prox of the quadratic data term") {
  Rng rng(137);
  const ScalarField u0 = tgv_test::random_scalar(rng, 4, 4);
  const ScalarField u = tgv_test::random_scalar(rng, 4, 4);
  CHECK(tgv_test::max_abs_diff(prox_tgv_data(u, u0, 0.0), u) == 0.0);
  CHECK(tgv_test::max_abs_diff(prox_tgv_data(u0, u0, 0.7), u0) <= 1e-15);
  const ScalarField limit = prox_tgv_data(u, u0, 1e8);
  CHECK(tgv_test::max_abs_diff(limit, u0) <= 1e-7);
}

TEST_CASE("shifted linf prox reduces to the plain projection at shift 0") {
  Rng rng(139);
  const TensorField q = tgv_test::random_tensor(rng, 3, 3);
  const TensorField zero(3, 3, 0.0);
  CHECK(tgv_test::max_abs_diff(prox_shifted_linf(q, 0.7, zero, 0.5),
                               project_linf_l2_ball(q, 0.5)) == 0.0);
  // zero input, nonzero shift: projection of -sigma*shift
  const TensorField shift = tgv_test::random_tensor(rng, 3, 3);
  const double sigma = 1.3;
  TensorField neg = shift;
  for (double& v : neg.data) v *= -sigma;
  CHECK(tgv_test::max_abs_diff(prox_shifted_linf(TensorField(3, 3, 0.0), sigma, shift, 0.4),
                               project_linf_l2_ball(neg, 0.4)) == 0.0);
  // random case vs composing by hand
  const TensorField x = tgv_test::random_tensor(rng, 3, 3);
  TensorField byhand = x;
  for (std::size_t k = 0; k < byhand.data.size(); ++k)
    byhand.data[k] -= sigma * shift.data[k];
  CHECK(tgv_test::max_abs_diff(prox_shifted_linf(x, sigma, shift, 0.8),
                               project_linf_l2_ball(byhand, 0.8)) == 0.0);
}

TEST_CASE("firm nonexpansiveness of all projections") {
  Rng rng(149);
  for (int trial = 0; trial < 25; ++trial) {
    const ScalarField u0 = tgv_test::random_scalar(rng, 3, 3);
    const ScalarField a = tgv_test::random_scalar(rng, 3, 3);
    const ScalarField b = tgv_test::random_scalar(rng, 3, 3);
    const double delta = rng.uniform(0.1, 1.0);
    const ScalarField pa = project_l2_ball(a, u0, delta);
    const ScalarField pb = project_l2_ball(b, u0, delta);
    const ScalarField d = sub(pa, pb);
    CHECK(inner(d, d) <= inner(d, sub(a, b)) + 1e-12);

    const TensorField ta = tgv_test::random_tensor(rng, 3, 3);
    const TensorField tb = tgv_test::random_tensor(rng, 3, 3);
    const TensorField pta = project_linf_l2_ball(ta, delta);
    const TensorField ptb = project_linf_l2_ball(tb, delta);
    const TensorField td = sub(pta, ptb);
    CHECK(inner(td, td) <= inner(td, sub(ta, tb)) + 1e-12);
  }
}

TEST_CASE("projection radius must be nonnegative") {
  Rng rng(151);
  const VectorField x = tgv_test::random_vector(rng, 2, 2);
  CHECK_THROWS_AS(project_linf_l2_ball(x, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(project_l1_l2_ball(x, nullptr, -0.5), std::invalid_argument);
}
