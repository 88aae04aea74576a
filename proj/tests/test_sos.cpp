#include <doctest.h>

#include <cmath>

#include "cjsr/sos.hpp"
#include "support.hpp"

using namespace cjsr;
using testsupport::Rng;

namespace {

ConstrainedSystem scaled_loop(const Matrix& a) { return unconstrained_system({a}); }

}  // namespace

TEST_CASE("primal feasibility flips at the spectral radius of a single loop") {
  Matrix half = Matrix::identity(2);
  half *= 0.5;
  const ConstrainedSystem sys = scaled_loop(half);
  {
    const SosProgram prog = build_primal(sys, 1, 0.6, 1e-6);
    CHECK(feasibility(prog.problem, 1e-9).verdict == FeasibilityVerdict::strictly_feasible);
  }
  {
    // gamma below rho(A) = 0.5 contradicts necessity
    const SosProgram prog = build_primal(sys, 1, 0.4, 1e-6);
    CHECK(feasibility(prog.problem, 1e-9).verdict == FeasibilityVerdict::infeasible);
  }
}

TEST_CASE("simple1 is feasible at gamma = 1 with the power-sum certificate") {
  const ConstrainedSystem sys = simple1_example();
  for (std::size_t d : {1u, 2u}) {
    const SosProgram above = build_primal(sys, d, 1.02, 1e-8);
    CHECK(feasibility(above.problem, 1e-9).verdict == FeasibilityVerdict::strictly_feasible);
    const SosProgram below = build_primal(sys, d, 0.98, 1e-8);
    CHECK(feasibility(below.problem, 1e-9).verdict == FeasibilityVerdict::infeasible);
  }
}

TEST_CASE("jsr_sos on the exactness example") {
  const ConstrainedSystem sys = simple1_example();
  for (std::size_t d : {1u, 2u}) {
    const JsrSosResult res = jsr_sos(sys, d, 1e-6);
    CHECK(std::abs(res.upper - 1.0) <= 2e-6);
    REQUIRE(res.certificate.has_value());
    const CertificateCheck check = verify_certificate(sys, *res.certificate);
    CHECK(check.ok);
    CHECK(check.worst_identity_residual <= 1e-7);
    CHECK(check.worst_gram_eigenvalue >= -1e-9);
  }
}

TEST_CASE("jsr_sos on a scaled rotation is exact at d = 1") {
  Matrix rot{{0.0, -0.5}, {0.5, 0.0}};
  const ConstrainedSystem sys = scaled_loop(rot);
  const JsrSosResult res = jsr_sos(sys, 1, 1e-6);
  CHECK(std::abs(res.upper - 0.5) <= 2e-6);
}

TEST_CASE("running example upper bounds decrease and stay above the known value") {
  const ConstrainedSystem sys = running_example();
  double prev = 1e300;
  for (std::size_t d = 1; d <= 3; ++d) {
    const JsrSosResult res = jsr_sos(sys, d, 1e-6);
    CHECK(res.upper >= 0.97482 - 1e-6);
    CHECK(res.upper <= prev + 1e-6);
    prev = res.upper;
  }
  // the Program-3 instance at gamma = 1.05, d = 1 is strictly feasible
  const SosProgram prog = build_primal(sys, 1, 1.05, 1e-6);
  CHECK(feasibility(prog.problem, 1e-9).verdict == FeasibilityVerdict::strictly_feasible);
}

TEST_CASE("dual extraction on simple1 recovers the cyclic Diracs") {
  const ConstrainedSystem sys = simple1_example();
  const JsrSosResult res = jsr_sos(sys, 1, 1e-6);
  REQUIRE(res.dual_near_optimal.has_value());
  const PseudoMeasure& pm = *res.dual_near_optimal;
  CHECK_FALSE(pm.low_quality);
  CHECK(std::abs(pm.total_mass() - 1.0) <= 1e-6);

  // the measure on the arc with matrix e_i e_{i+1}^T sits at e_{i+1}:
  // that is the only assignment that balances mass around the cycle
  for (std::size_t arc = 0; arc < 3; ++arc) {
    CHECK(pm.mass(arc) == doctest::Approx(1.0 / 3.0).epsilon(2e-4));
    const std::size_t source_coord = (arc + 1) % 3;
    const Matrix& m = pm.moment_matrices[arc];
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const double expected =
            (i == source_coord && j == source_coord) ? 1.0 / 3.0 : 0.0;
        CHECK(std::abs(m(i, j) - expected) <= 2e-4);
      }
  }
  // and it satisfies the moment program at its own gamma
  const DualCheck check = verify_dual(sys, pm, pm.gamma, 1e-6);
  CHECK(check.feasible);
}

TEST_CASE("running example dual support matches the known zero pattern") {
  const ConstrainedSystem sys = running_example();
  const JsrSosResult res = jsr_sos(sys, 1, 1e-6);
  REQUIRE(res.dual_near_optimal.has_value());
  const PseudoMeasure& pm = *res.dual_near_optimal;
  // arcs (1,3,1), (3,1,2), (3,3,1) carry the dual; all others vanish
  const std::vector<std::size_t> support{0, 4, 7};
  double max_trace = 0.0;
  for (const Matrix& m : pm.moment_matrices) max_trace = std::max(max_trace, m.trace());
  for (std::size_t e = 0; e < 9; ++e) {
    const bool on = std::find(support.begin(), support.end(), e) != support.end();
    if (on)
      CHECK(pm.moment_matrices[e].trace() > 0.01 * max_trace);
    else
      CHECK(pm.moment_matrices[e].trace() < 1e-4 * max_trace);
  }

  const PrunedAutomaton pruned = prune_zero_dual_arcs(sys, res.duals);
  CHECK_FALSE(pruned.fallback_full);
  CHECK(pruned.kept_arcs == support);
  // dominant component {1, 3} has adjacency [[0,1],[1,1]]: the golden ratio
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(pruned.adjacency_rho == doctest::Approx(golden).epsilon(1e-9));
  CHECK(pruned.component_nodes == std::vector<std::size_t>{0, 2});
}

TEST_CASE("prune falls back to the full automaton on empty duals") {
  const ConstrainedSystem sys = simple1_example();
  PseudoMeasure zero;
  zero.d = 1;
  zero.nvars = 3;
  zero.gamma = 1.0;
  zero.moment_vectors.assign(3, std::vector<double>(MonomialBasis::get(3, 2).size(), 0.0));
  zero.moment_matrices.assign(3, Matrix(3, 3));
  const PrunedAutomaton pruned = prune_zero_dual_arcs(sys, {zero});
  CHECK(pruned.fallback_full);
  CHECK(pruned.kept_arcs.size() == 3);
  CHECK(pruned.adjacency_rho == doctest::Approx(3.0));
}

TEST_CASE("soundness sandwich on small random systems") {
  Rng rng(61);
  for (int trial = 0; trial < 5; ++trial) {
    const ConstrainedSystem sys = testsupport::random_system(rng, 2, 2, 2, 2, 0.7);
    const JsrSosResult res = jsr_sos(sys, 1, 1e-6);
    // any certificate gamma upper-bounds every cycle growth
    for (const Path& p : enumerate_paths(sys.automaton(), 3)) {
      if (!sys.automaton().path_is_cycle(p)) continue;
      CHECK(sys.cycle_growth(p) <= res.upper + 2e-6);
    }
  }
}

TEST_CASE("degree cap guard") {
  const ConstrainedSystem sys = simple1_example();
  CHECK_THROWS_AS(build_primal(sys, 60, 1.0, 1e-6), Error);
}
