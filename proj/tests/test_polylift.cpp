#include <doctest.h>

#include <cmath>

#include "cjsr/polylift.hpp"
#include "support.hpp"

using namespace cjsr;
using testsupport::Rng;

TEST_CASE("basis sizes and scales") {
  const MonomialBasis& b = MonomialBasis::get(2, 2);
  CHECK(b.size() == 3);  // x1^2, x1 x2, x2^2 in graded-lex order
  CHECK(b.exponent(0) == std::vector<int>{2, 0});
  CHECK(b.exponent(1) == std::vector<int>{1, 1});
  CHECK(b.exponent(2) == std::vector<int>{0, 2});
  CHECK(b.scale(0) == doctest::Approx(1.0));
  CHECK(b.scale(1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(MonomialBasis::get(3, 4).size() == binomial(3 + 4 - 1, 4));
}

TEST_CASE("lift_vector") {
  // d = 1: the vector itself
  const auto v1 = lift_vector({2.0, -3.0}, 1);
  CHECK(v1 == std::vector<double>{2.0, -3.0});

  // n = 1: the d-th power
  const auto v3 = lift_vector({1.7}, 3);
  CHECK(v3[0] == doctest::Approx(1.7 * 1.7 * 1.7).epsilon(1e-14));

  // norm identity ||x^[d]|| = ||x||^d, including the (1,1) -> 4 spot value
  const auto l2 = lift_vector({1.0, 1.0}, 2);
  double sq = 0.0;
  for (double x : l2) sq += x * x;
  CHECK(sq == doctest::Approx(4.0).epsilon(1e-14));

  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t d = 1 + trial % 4;
    std::vector<double> x(n);
    for (double& xi : x) xi = rng.uniform(-2.0, 2.0);
    const auto lifted = lift_vector(x, d);
    CHECK(norm2(lifted) ==
          doctest::Approx(std::pow(norm2(x), static_cast<double>(d))).epsilon(1e-12));
  }
}

TEST_CASE("lift_matrix definitional identity") {
  CHECK((lift_matrix(Matrix::identity(3), 2) - Matrix::identity(6)).max_abs() <= 1e-14);

  Matrix scalar(1, 1);
  scalar(0, 0) = -1.3;
  CHECK(lift_matrix(scalar, 3)(0, 0) == doctest::Approx(-1.3 * -1.3 * -1.3));

  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = testsupport::random_matrix(rng, 2);
    const Matrix lifted = lift_matrix(a, 2);
    std::vector<double> x(2);
    x[0] = rng.uniform(-1.0, 1.0);
    x[1] = rng.uniform(-1.0, 1.0);
    const auto lhs = lift_vector(a.apply(x), 2);
    const auto rhs = lifted.apply(lift_vector(x, 2));
    for (std::size_t i = 0; i < lhs.size(); ++i)
      CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-10);
  }
}

TEST_CASE("lift multiplicativity") {
  Rng rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const std::size_t d = 2 + trial % 3;
    const Matrix a = testsupport::random_matrix(rng, n);
    const Matrix b = testsupport::random_matrix(rng, n);
    const Matrix lhs = lift_matrix(a * b, d);
    const Matrix rhs = lift_matrix(a, d) * lift_matrix(b, d);
    CHECK((lhs - rhs).max_abs() <= 1e-9 * std::max(1.0, rhs.max_abs()));
  }
}

TEST_CASE("lifted operator norm equals the norm power") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = testsupport::random_matrix(rng, 2);
    const std::size_t d = 1 + trial % 4;
    CHECK(operator_norm_2(lift_matrix(a, d)) ==
          doctest::Approx(std::pow(operator_norm_2(a), static_cast<double>(d)))
              .epsilon(1e-9));
  }
}

TEST_CASE("compose_poly") {
  // identity leaves the polynomial alone
  Rng rng(19);
  HomogeneousPoly p{2, 4, {}};
  p.coeffs.resize(MonomialBasis::get(2, 4).size());
  for (double& c : p.coeffs) c = rng.gauss();
  const HomogeneousPoly same = compose_poly(p, Matrix::identity(2));
  for (std::size_t i = 0; i < p.coeffs.size(); ++i)
    CHECK(same.coeffs[i] == doctest::Approx(p.coeffs[i]).epsilon(1e-12));

  // ||x||^{2d} is invariant under orthogonal maps
  const HomogeneousPoly sphere = sphere_power_poly(2, 4);
  const Matrix q = testsupport::random_orthogonal(rng, 2);
  const HomogeneousPoly rotated = compose_poly(sphere, q);
  for (std::size_t i = 0; i < sphere.coeffs.size(); ++i)
    CHECK(rotated.coeffs[i] == doctest::Approx(sphere.coeffs[i]).epsilon(1e-10));

  // direct substitution: p = x1^2, A = e1 e2^T gives x2^2
  HomogeneousPoly x1sq{2, 2, {1.0, 0.0, 0.0}};
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  const HomogeneousPoly swapped = compose_poly(x1sq, a);
  CHECK(swapped.coeffs[0] == doctest::Approx(0.0));
  CHECK(swapped.coeffs[1] == doctest::Approx(0.0));
  CHECK(swapped.coeffs[2] == doctest::Approx(1.0));

  // contravariance: (p o B) o A = p o (BA)
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix ma = testsupport::random_matrix(rng, 2);
    const Matrix mb = testsupport::random_matrix(rng, 2);
    const HomogeneousPoly two_steps = compose_poly(compose_poly(p, mb), ma);
    const HomogeneousPoly one_step = compose_poly(p, mb * ma);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i)
      CHECK(std::abs(two_steps.coeffs[i] - one_step.coeffs[i]) <=
            1e-9 * (1.0 + std::abs(one_step.coeffs[i])));
  }
}

TEST_CASE("evaluation matches plain monomial arithmetic") {
  Rng rng(23);
  const MonomialBasis& b = MonomialBasis::get(3, 4);
  HomogeneousPoly p{3, 4, {}};
  p.coeffs.resize(b.size());
  std::vector<double> plain(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    p.coeffs[i] = rng.gauss();
    plain[i] = p.coeffs[i] * b.scale(i);
  }
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(3);
    for (double& xi : x) xi = rng.uniform(-1.5, 1.5);
    const double direct = testsupport::eval_monomials(b.exponents(), plain, x);
    CHECK(evaluate_poly(p, x) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("gram_to_coeffs") {
  // identity Gram at d = 1 is ||x||^2
  const HomogeneousPoly n2 = gram_to_coeffs(GramForm{2, 1, Matrix::identity(2)});
  std::vector<double> x{0.6, -0.8};
  CHECK(evaluate_poly(n2, x) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(27);
  // rank-1 Gram is the square of the linear-in-lift form
  const std::size_t d = 2;
  const MonomialBasis& bd = MonomialBasis::get(2, d);
  const auto v = testsupport::random_unit(rng, bd.size());
  Matrix vv(bd.size(), bd.size());
  for (std::size_t i = 0; i < bd.size(); ++i)
    for (std::size_t j = 0; j < bd.size(); ++j) vv(i, j) = v[i] * v[j];
  const HomogeneousPoly square = gram_to_coeffs(GramForm{2, d, vv});
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> pt{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const double lin = dot(v, lift_vector(pt, d));
    CHECK(evaluate_poly(square, pt) == doctest::Approx(lin * lin).epsilon(1e-10));
  }

  // random symmetric Gram evaluated two ways
  for (int trial = 0; trial < 10; ++trial) {
    Matrix gm = testsupport::random_psd(rng, bd.size());
    const HomogeneousPoly poly = gram_to_coeffs(GramForm{2, d, gm});
    std::vector<double> pt{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const auto lifted = lift_vector(pt, d);
    double quad = 0.0;
    for (std::size_t i = 0; i < lifted.size(); ++i)
      for (std::size_t j = 0; j < lifted.size(); ++j) quad += lifted[i] * gm(i, j) * lifted[j];
    CHECK(evaluate_poly(poly, pt) == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("gram fiber round trip") {
  // coefficients -> any Gram preimage -> coefficients is the identity
  Rng rng(31);
  const FiberMap& fm = FiberMap::get(2, 2);
  Matrix gm = testsupport::random_psd(rng, fm.gram_size());
  const HomogeneousPoly poly = gram_to_coeffs(GramForm{2, 2, gm});
  // build a preimage through the fiber matrices: G_eta coefficients reproduce poly
  for (std::size_t eta = 0; eta < fm.poly_size(); ++eta) {
    const Matrix g = fm.fiber_matrix(eta);
    CHECK(inner(g, gm) == doctest::Approx(poly.coeffs[eta]).epsilon(1e-11));
  }
}

TEST_CASE("power sums and sphere powers") {
  const HomogeneousPoly ps = power_sum_poly(3, 4);
  const HomogeneousPoly sp = sphere_power_poly(3, 4);
  std::vector<double> x{0.3, -1.1, 0.7};
  const double x4 = std::pow(x[0], 4) + std::pow(x[1], 4) + std::pow(x[2], 4);
  const double n4 = std::pow(x[0] * x[0] + x[1] * x[1] + x[2] * x[2], 2);
  CHECK(evaluate_poly(ps, x) == doctest::Approx(x4).epsilon(1e-12));
  CHECK(evaluate_poly(sp, x) == doctest::Approx(n4).epsilon(1e-12));
}
