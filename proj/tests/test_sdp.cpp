#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cjsr/sdp.hpp"
#include "support.hpp"

using namespace cjsr;
using testsupport::Rng;

namespace {

SdpProblem min_x_problem() {
  // minimize x over a 1x1 block with x = 1
  SdpProblem p;
  const std::size_t b = p.add_block("x", 1);
  Matrix one(1, 1);
  one(0, 0) = 1.0;
  p.set_objective(b, one);
  p.add_constraint({{{b, one}}, 1.0});
  return p;
}

}  // namespace

TEST_CASE("scalar minimum") {
  const SdpSolution s = solve(min_x_problem());
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.primal_objective == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s.primal_blocks[0](0, 0) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(s.residuals.primal <= 1e-8);
  CHECK(s.residuals.dual <= 1e-8);
  CHECK(s.residuals.gap <= 1e-8);
}

TEST_CASE("infeasible trace constraint is certified") {
  // trace(X) = -1 with X PSD has a Farkas certificate
  SdpProblem p;
  const std::size_t b = p.add_block("x", 2);
  p.add_constraint({{{b, Matrix::identity(2)}}, -1.0});
  const SdpSolution s = solve(p);
  REQUIRE(s.status == SdpStatus::infeasible);
  CHECK_FALSE(s.farkas_multipliers.empty());
  // certificate: y with b^T y = 1 and A*(y) negative semidefinite
  CHECK(s.farkas_multipliers[0] * -1.0 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(s.farkas_violation <= 1e-7);
}

TEST_CASE("gamma boundary of the 2x2 correlation block") {
  const auto feasibility_at = [](double gamma) {
    SdpProblem p;
    const std::size_t b = p.add_block("x", 2);
    Matrix e00(2, 2), e11(2, 2), e01(2, 2);
    e00(0, 0) = 1.0;
    e11(1, 1) = 1.0;
    e01(0, 1) = 0.5;
    e01(1, 0) = 0.5;
    p.add_constraint({{{b, e00}}, 1.0});
    p.add_constraint({{{b, e11}}, 1.0});
    p.add_constraint({{{b, e01}}, gamma});
    return feasibility(p, 1e-9);
  };
  const FeasibilityResult lo = feasibility_at(0.999);
  CHECK(lo.verdict == FeasibilityVerdict::strictly_feasible);
  CHECK(lo.shift == doctest::Approx(1.0 - 0.999).epsilon(1e-4));
  const FeasibilityResult hi = feasibility_at(1.001);
  CHECK(hi.verdict == FeasibilityVerdict::infeasible);
  CHECK(hi.shift == doctest::Approx(1.0 - 1.001).epsilon(1e-4));

  // bisection localizes the flip within 1e-6 of gamma = 1
  double a = 0.9, b = 1.1;
  while (b - a > 2e-7) {
    const double mid = 0.5 * (a + b);
    if (feasibility_at(mid).verdict == FeasibilityVerdict::strictly_feasible)
      a = mid;
    else
      b = mid;
  }
  CHECK(std::abs(0.5 * (a + b) - 1.0) <= 1e-6);
}

TEST_CASE("empty constraint set is strictly feasible") {
  SdpProblem p;
  p.add_block("x", 3);
  const FeasibilityResult r = feasibility(p, 1e-9);
  CHECK(r.verdict == FeasibilityVerdict::strictly_feasible);
  CHECK(r.shift > 1.0);  // the identity point sits deep inside
}

TEST_CASE("random problems with known strictly complementary optima") {
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const std::size_t m = 2 + trial % 4;
    SdpProblem p;
    const std::size_t b = p.add_block("x", n);

    // strictly complementary pair: X* = U diag(lam, 0) U^T, Z* = U diag(0, om) U^T
    const Matrix u = testsupport::random_orthogonal(rng, n);
    const std::size_t rank = 1 + trial % (n - 1 + 1);
    Matrix xstar(n, n), zstar(n, n);
    {
      Matrix dx(n, n), dz(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        if (i < rank)
          dx(i, i) = 0.5 + rng.uniform(0.0, 1.0);
        else
          dz(i, i) = 0.5 + rng.uniform(0.0, 1.0);
      }
      xstar = u * dx * u.transpose();
      zstar = u * dz * u.transpose();
      xstar.symmetrize();
      zstar.symmetrize();
    }
    std::vector<Matrix> amats;
    std::vector<double> ystar;
    for (std::size_t c = 0; c < m; ++c) {
      Matrix a = testsupport::random_matrix(rng, n);
      a = a + a.transpose();
      a.symmetrize();
      amats.push_back(a);
      ystar.push_back(rng.gauss());
    }
    Matrix cmat = zstar;
    for (std::size_t c = 0; c < m; ++c) {
      Matrix t = amats[c];
      t *= ystar[c];
      cmat += t;
    }
    p.set_objective(b, cmat);
    for (std::size_t c = 0; c < m; ++c)
      p.add_constraint({{{b, amats[c]}}, inner(amats[c], xstar)});

    const double opt = inner(cmat, xstar);
    const SdpSolution s = solve(p);
    REQUIRE(s.status == SdpStatus::optimal);
    CHECK(s.residuals.primal <= 1e-8);
    CHECK(s.residuals.dual <= 1e-8);
    CHECK(s.residuals.gap <= 1e-8);
    CHECK(std::abs(s.primal_objective - opt) <= 1e-6 * (1.0 + std::abs(opt)));
    // complementarity of the returned pair
    double xz = 0.0;
    for (std::size_t i = 0; i < 1; ++i)
      xz += inner(s.primal_blocks[0], s.dual_slack_blocks[0]);
    CHECK(xz <= 1e-6 * static_cast<double>(n));
    // primal block PSD within floor
    CHECK(symmetric_min_eigenvalue(s.primal_blocks[0]) >= -1e-9);
  }
}

TEST_CASE("presolve drops duplicate rows and flags inconsistent ones") {
  SdpProblem p;
  const std::size_t b = p.add_block("x", 2);
  Matrix e00(2, 2);
  e00(0, 0) = 1.0;
  p.add_constraint({{{b, e00}}, 1.0});
  Matrix e00b = e00;
  e00b *= 2.0;
  p.add_constraint({{{b, e00b}}, 2.0});  // same hyperplane, scaled
  Matrix e11(2, 2);
  e11(1, 1) = 1.0;
  p.set_objective(b, e11);
  const SdpSolution s = solve(p);
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.primal_objective == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(s.primal_blocks[0](0, 0) == doctest::Approx(1.0).epsilon(1e-6));

  SdpProblem q;
  const std::size_t c = q.add_block("x", 2);
  q.add_constraint({{{c, e00}}, 1.0});
  q.add_constraint({{{c, e00b}}, 3.0});  // inconsistent with the first
  const SdpSolution sq = solve(q);
  CHECK(sq.status == SdpStatus::infeasible);
}

TEST_CASE("deterministic iterates") {
  const SdpSolution a = solve(min_x_problem());
  const SdpSolution b = solve(min_x_problem());
  CHECK(a.iterations == b.iterations);
  CHECK(a.primal_objective == b.primal_objective);  // bit-identical
  CHECK(a.primal_blocks[0](0, 0) == b.primal_blocks[0](0, 0));
}

TEST_CASE("sdpa dump shape") {
  std::ostringstream os;
  write_sdpa(min_x_problem(), os);
  const std::string text = os.str();
  CHECK(text.find("1 = mDIM") != std::string::npos);
  CHECK(text.find("1 = nBLOCK") != std::string::npos);
  CHECK(text.find("0 1 1 1 -1") != std::string::npos);  // F0 = -C
  CHECK(text.find("1 1 1 1 1") != std::string::npos);   // A_1
}
