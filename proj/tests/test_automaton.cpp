#include <doctest.h>

#include <cmath>
#include <set>

#include "cjsr/automaton.hpp"
#include "cjsr/system.hpp"
#include "support.hpp"

using namespace cjsr;
using testsupport::Rng;

TEST_CASE("strong connectivity verdicts") {
  CHECK(check_strong_connectivity(1, {Arc{0, 0, 0}}));
  CHECK_FALSE(check_strong_connectivity(2, {Arc{0, 1, 0}}));
  const Automaton run = running_example().automaton();
  CHECK(run.node_count() == 4);
  CHECK(run.arc_count() == 9);
  CHECK(check_strong_connectivity(run.node_count(), run.arcs()));
}

TEST_CASE("construction rejects bad graphs") {
  CHECK_THROWS_AS(Automaton(2, {Arc{0, 1, 0}}), Error);                 // not strongly connected
  CHECK_THROWS_AS(Automaton(1, {Arc{0, 0, 0}, Arc{0, 0, 0}}), Error);   // duplicate triple
  CHECK_THROWS_AS(Automaton(1, {Arc{0, 1, 0}}), Error);                 // endpoint range
  CHECK_NOTHROW(Automaton(1, {Arc{0, 0, 0}, Arc{0, 0, 1}}));            // parallel labels ok
}

TEST_CASE("adjacency spectral radius") {
  // one node, m self-loops: the arbitrary-switching encoding
  Automaton loops(1, {Arc{0, 0, 0}, Arc{0, 0, 1}, Arc{0, 0, 2}});
  CHECK(loops.adjacency_spectral_radius() == doctest::Approx(3.0).epsilon(1e-12));

  // pure cycle
  Automaton cyc(4, {Arc{0, 1, 0}, Arc{1, 2, 0}, Arc{2, 3, 0}, Arc{3, 0, 0}});
  CHECK(cyc.adjacency_spectral_radius() == doctest::Approx(1.0).epsilon(1e-10));

  // running example vs the Gelfand estimate ||A(G)^k||_inf^{1/k}
  const Automaton run = running_example().automaton();
  const double rho = run.adjacency_spectral_radius();
  Matrix p = Matrix::identity(4);
  const Matrix a = run.adjacency_matrix();
  for (int i = 0; i < 32; ++i) p = p * a;
  const double gelfand = std::pow(p.inf_norm(), 1.0 / 32.0);
  CHECK(rho == doctest::Approx(gelfand).epsilon(0.05));
  CHECK(rho <= gelfand + 1e-12);  // Gelfand estimates from above
}

TEST_CASE("path enumeration") {
  Automaton loop(1, {Arc{0, 0, 0}});
  CHECK(enumerate_paths(loop, 3).size() == 1);

  Automaton loops(1, {Arc{0, 0, 0}, Arc{0, 0, 1}, Arc{0, 0, 2}});
  CHECK(enumerate_paths(loops, 4).size() == 81);  // m^k under arbitrary switching

  const Automaton run = running_example().automaton();
  CHECK(enumerate_paths(run, 1).size() == 9);

  // |E_k| equals the total of A(G)^k entries
  Rng rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    const Automaton g = testsupport::random_automaton(rng, 2 + trial % 3, 2, 3);
    for (std::size_t k = 1; k <= 5; ++k) {
      Matrix p = Matrix::identity(g.node_count());
      const Matrix a = g.adjacency_matrix();
      for (std::size_t i = 0; i < k; ++i) p = p * a;
      double total = 0.0;
      for (std::size_t i = 0; i < g.node_count(); ++i)
        for (std::size_t j = 0; j < g.node_count(); ++j) total += p(i, j);
      CHECK(enumerate_paths(g, k).size() == static_cast<std::size_t>(total + 0.5));
    }
  }
}

TEST_CASE("path filters agree with brute scans") {
  Rng rng(9);
  const Automaton g = testsupport::random_automaton(rng, 3, 2, 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto all = enumerate_paths(g, k);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      std::size_t into = 0, from = 0;
      for (const Path& p : all) {
        if (g.path_end(p) == v) ++into;
        if (g.path_start(p) == v) ++from;
      }
      CHECK(enumerate_paths(g, k, PathFilter::ending_at(v)).size() == into);
      CHECK(enumerate_paths(g, k, PathFilter::starting_at(v)).size() == from);
      CHECK(count_paths_into(g, k, v) == into);
      CHECK(count_paths_from(g, k, v) == from);
    }
    std::size_t with_arc0 = 0;
    for (const Path& p : all)
      if (p.arcs.front() == 0) ++with_arc0;
    CHECK(enumerate_paths(g, k, PathFilter::starting_with_arc(0)).size() == with_arc0);
    // lexicographic order by arc sequence
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].arcs < all[i].arcs);
  }
}

TEST_CASE("transpose involution and reversed admissibility") {
  const Automaton run = running_example().automaton();
  const Automaton runt = run.transpose();
  CHECK(runt.arc(0).source == 2);  // (1,3,1) becomes (3,1,1)
  CHECK(runt.arc(0).target == 0);
  CHECK(runt.arc(0).label == 0);
  const Automaton back = runt.transpose();
  for (std::size_t e = 0; e < run.arc_count(); ++e) CHECK(back.arc(e) == run.arc(e));

  Rng rng(13);
  const Automaton g = testsupport::random_automaton(rng, 3, 2, 3);
  const Automaton gt = g.transpose();
  // a path is admissible in G iff its reversal is admissible in G^T
  for (const Path& p : enumerate_paths(g, 3)) {
    Path rev{std::vector<std::size_t>(p.arcs.rbegin(), p.arcs.rend())};
    CHECK(gt.path_is_valid(rev));
  }
  // N+_k(G^T) = N-_k(G)
  for (std::size_t k = 1; k <= 4; ++k) {
    std::size_t fwd = 0, bwd = 0;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      fwd = std::max(fwd, count_paths_from(gt, k, v));
      bwd = std::max(bwd, count_paths_into(g, k, v));
    }
    CHECK(fwd == bwd);
  }
}

TEST_CASE("kozyakin lift structure") {
  // single node single loop: the lift is the matrix itself
  Matrix half = Matrix::identity(2);
  half *= 0.5;
  const auto sys1 = unconstrained_system({half});
  const auto lift1 = kozyakin_lift(sys1);
  CHECK(lift1.size() == 1);
  CHECK((lift1[0] - half).max_abs() == 0.0);

  // two-node alternating cycle: the inadmissible word (1,1) vanishes
  Rng rng(21);
  const Matrix a = testsupport::random_matrix(rng, 2);
  const Matrix b = testsupport::random_matrix(rng, 2);
  ConstrainedSystem alt({a, b}, Automaton(2, {Arc{0, 1, 0}, Arc{1, 0, 1}}));
  const auto lifted = kozyakin_lift(alt);
  CHECK((lifted[0] * lifted[0]).max_abs() == 0.0);
  CHECK((lifted[1] * lifted[0]).max_abs() > 0.0);

  // running example: all words of length 2 vanish exactly off the admissible set
  const ConstrainedSystem run = running_example();
  const auto lifts = kozyakin_lift(run);
  const Automaton& g = run.automaton();
  std::set<std::pair<std::size_t, std::size_t>> admissible;  // (first arc, second arc)
  for (const Path& p : enumerate_paths(g, 2)) admissible.insert({p.arcs[0], p.arcs[1]});
  for (std::size_t e1 = 0; e1 < g.arc_count(); ++e1)
    for (std::size_t e2 = 0; e2 < g.arc_count(); ++e2) {
      const Matrix prod = lifts[e2] * lifts[e1];  // word: e1 then e2
      if (admissible.count({e1, e2})) {
        CHECK(prod.max_abs() > 1e-12);
        // norm identity with the flat product
        Path p{{e1, e2}};
        CHECK(operator_norm_2(prod) ==
              doctest::Approx(operator_norm_2(run.path_product(p))).epsilon(1e-9));
      } else {
        CHECK(prod.max_abs() == 0.0);
      }
    }
}

TEST_CASE("max cycle mean: loops and known graphs") {
  Automaton loop(1, {Arc{0, 0, 0}});
  const auto mcm = max_cycle_mean(loop, {0.7});
  CHECK(mcm.mean == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(mcm.cycle.arcs == std::vector<std::size_t>{0});

  // the scalar system of the two-swap example: two unit weights, geometric mean 1
  Automaton two(2, {Arc{0, 1, 0}, Arc{1, 0, 1}});
  const auto swap = max_cycle_mean(two, {std::log(1.0), std::log(1.0)});
  CHECK(std::exp(swap.mean) == doctest::Approx(1.0).epsilon(1e-12));

  const auto pair = max_cycle_mean(two, {std::log(2.0), std::log(8.0)});
  CHECK(std::exp(pair.mean) == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(pair.cycle.length() == 2);
}

TEST_CASE("karp equals brute force over simple cycles") {
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Automaton g = testsupport::random_automaton(rng, 2 + trial % 5, 2, 4);
    std::vector<double> w(g.arc_count());
    for (double& x : w) x = rng.uniform(-2.0, 2.0);

    // brute force: cycles up to |V| arcs via DFS
    double best = -1e300;
    const std::size_t n = g.node_count();
    std::vector<std::size_t> stack_arcs;
    const auto dfs = [&](auto&& self, std::size_t start, std::size_t node, double acc) -> void {
      if (!stack_arcs.empty() && node == start)
        best = std::max(best, acc / static_cast<double>(stack_arcs.size()));
      if (stack_arcs.size() == n) return;
      for (std::size_t e : g.out_arcs(node)) {
        stack_arcs.push_back(e);
        self(self, start, g.arc(e).target, acc + w[e]);
        stack_arcs.pop_back();
      }
    };
    for (std::size_t v = 0; v < n; ++v) dfs(dfs, v, v, 0.0);

    const auto mcm = max_cycle_mean(g, w);
    CHECK(mcm.mean == doctest::Approx(best).epsilon(1e-9));
    // the returned cycle attains the mean
    double acc = 0.0;
    for (std::size_t e : mcm.cycle.arcs) acc += w[e];
    CHECK(acc / static_cast<double>(mcm.cycle.length()) ==
          doctest::Approx(mcm.mean).epsilon(1e-9));
    CHECK(g.path_is_cycle(mcm.cycle));
  }
}

TEST_CASE("cycle growth on the running example self-loop") {
  const ConstrainedSystem run = running_example();
  // arc 7 is the label-1 self-loop on node 3 (0-indexed node 2)
  CHECK(run.automaton().arc(7).source == 2);
  CHECK(run.automaton().arc(7).target == 2);
  Path self{{7}};
  // rho(A_1) = sqrt(det) for this complex-pair matrix
  const double det = 0.94 * 0.73 - 0.56 * (-0.35);
  CHECK(run.cycle_growth(self) == doctest::Approx(std::sqrt(det)).epsilon(1e-10));
  CHECK(run.cycle_growth(self) == doctest::Approx(0.939255).epsilon(1e-5));
}
