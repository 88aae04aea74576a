#include "cjsr/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cjsr/sos.hpp"

namespace cjsr {

LowRankFactorization factorize(const ConstrainedSystem& sys, std::size_t r, double tol) {
  if (r == 0 || r > sys.dimension()) throw Error("factorize: rank out of range");
  LowRankFactorization f;
  f.rank = r;
  const std::size_t n = sys.dimension();
  for (std::size_t s = 0; s < sys.mode_count(); ++s) {
    const SvdResult dec = svd(sys.matrix(s));
    if (r < dec.singular_values.size() && dec.singular_values[0] > 0.0 &&
        dec.singular_values[r] > tol * dec.singular_values[0]) {
      throw Error("factorize: matrix " + std::to_string(s + 1) +
                  " has effective rank above " + std::to_string(r) + " (sigma_{r+1} = " +
                  std::to_string(dec.singular_values[r]) + ")");
    }
    Matrix x(n, r), y(n, r);
    for (std::size_t j = 0; j < r && j < dec.singular_values.size(); ++j) {
      const double root = std::sqrt(std::max(0.0, dec.singular_values[j]));
      for (std::size_t i = 0; i < n; ++i) {
        x(i, j) = dec.u(i, j) * root;
        y(i, j) = dec.v(i, j) * root;
      }
    }
    f.x.push_back(std::move(x));
    f.y.push_back(std::move(y));
  }
  return f;
}

ReducedSystem reduce(const ConstrainedSystem& sys, const LowRankFactorization& f) {
  const Automaton& g = sys.automaton();
  if (f.x.size() != sys.mode_count()) throw Error("reduce: factorization mode mismatch");

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> label_of;
  std::vector<std::pair<std::size_t, std::size_t>> label_pairs;
  std::vector<Matrix> reduced_matrices;
  std::vector<Arc> reduced_arcs;
  for (std::size_t e1 = 0; e1 < g.arc_count(); ++e1) {
    for (std::size_t e2 = 0; e2 < g.arc_count(); ++e2) {
      if (g.arc(e1).target != g.arc(e2).source) continue;
      const std::size_t s1 = g.arc(e1).label;  // earlier
      const std::size_t s2 = g.arc(e2).label;  // later
      const auto key = std::make_pair(s2, s1);
      auto it = label_of.find(key);
      if (it == label_of.end()) {
        it = label_of.emplace(key, label_pairs.size()).first;
        label_pairs.push_back(key);
        Matrix m = f.y[s2].transpose() * f.x[s1];
        reduced_matrices.push_back(std::move(m));
      }
      reduced_arcs.push_back(Arc{e1, e2, it->second});
    }
  }
  if (reduced_arcs.empty()) throw Error("reduce: no chained arc pairs");

  bool restricted = false;
  std::vector<std::size_t> node_to_original;
  std::size_t node_count = g.arc_count();
  if (!check_strong_connectivity(g.arc_count(), reduced_arcs)) {
    // keep the strongly connected piece with the largest adjacency radius
    restricted = true;
    const auto comps = strongly_connected_components(g.arc_count(), reduced_arcs);
    double best_rho = -1.0;
    std::vector<std::size_t> best;
    for (const auto& comp : comps) {
      std::vector<std::size_t> pos(g.arc_count(), g.arc_count());
      for (std::size_t i = 0; i < comp.size(); ++i) pos[comp[i]] = i;
      Matrix adj(comp.size(), comp.size());
      bool has_arc = false;
      for (const Arc& a : reduced_arcs)
        if (pos[a.source] < comp.size() && pos[a.target] < comp.size()) {
          adj(pos[a.source], pos[a.target]) += 1.0;
          has_arc = true;
        }
      if (!has_arc) continue;
      const double rho = spectral_radius(adj);
      if (rho > best_rho) {
        best_rho = rho;
        best = comp;
      }
    }
    if (best.empty()) throw Error("reduce: reduced automaton has no cycle");
    std::vector<std::size_t> pos(g.arc_count(), g.arc_count());
    for (std::size_t i = 0; i < best.size(); ++i) pos[best[i]] = i;
    std::vector<Arc> kept;
    for (const Arc& a : reduced_arcs)
      if (pos[a.source] < best.size() && pos[a.target] < best.size())
        kept.push_back(Arc{pos[a.source], pos[a.target], a.label});
    reduced_arcs = std::move(kept);
    node_count = best.size();
    node_to_original = best;
  } else {
    node_to_original.resize(g.arc_count());
    for (std::size_t i = 0; i < g.arc_count(); ++i) node_to_original[i] = i;
  }

  // drop labels that no longer appear after the restriction
  std::vector<bool> used(reduced_matrices.size(), false);
  for (const Arc& a : reduced_arcs) used[a.label] = true;
  std::vector<std::size_t> remap(reduced_matrices.size(), 0);
  std::vector<Matrix> final_matrices;
  std::vector<std::pair<std::size_t, std::size_t>> final_pairs;
  for (std::size_t i = 0; i < reduced_matrices.size(); ++i) {
    if (!used[i]) continue;
    remap[i] = final_matrices.size();
    final_matrices.push_back(reduced_matrices[i]);
    final_pairs.push_back(label_pairs[i]);
  }
  for (Arc& a : reduced_arcs) a.label = remap[a.label];

  ReducedSystem result{
      ConstrainedSystem(std::move(final_matrices), Automaton(node_count, std::move(reduced_arcs))),
      std::move(final_pairs), std::move(node_to_original), restricted};
  result.system.set_name(sys.name().empty() ? "reduced" : sys.name() + "-reduced");
  return result;
}

LowRankFactorization apply_gauge(const LowRankFactorization& f, const Matrix& s) {
  if (!s.square() || s.rows() != f.rank) throw Error("apply_gauge: S must be r x r");
  LowRankFactorization out;
  out.rank = f.rank;
  // Y' = Y S^{-T}: solve S^T (Y'^T) = Y^T column by column
  LuFactorization lu(s.transpose());
  if (lu.singular()) throw Error("apply_gauge: S is singular");
  for (std::size_t m = 0; m < f.x.size(); ++m) {
    out.x.push_back(f.x[m] * s);
    const Matrix yt = f.y[m].transpose();  // r x n
    Matrix ypt(f.rank, yt.cols());
    for (std::size_t c = 0; c < yt.cols(); ++c) {
      std::vector<double> col(f.rank);
      for (std::size_t i = 0; i < f.rank; ++i) col[i] = yt(i, c);
      const auto sol = lu.solve(col);
      for (std::size_t i = 0; i < f.rank; ++i) ypt(i, c) = sol[i];
    }
    out.y.push_back(ypt.transpose());
  }
  return out;
}

EquivalenceReport reduction_equivalence_check(const ConstrainedSystem& sys,
                                              const LowRankFactorization& f, std::size_t d,
                                              double tol, const Matrix* gauge) {
  EquivalenceReport report;
  const ReducedSystem reduced = reduce(sys, f);
  report.jsr_original = jsr_sos(sys, d, tol).upper;
  report.jsr_reduced = jsr_sos(reduced.system, d, tol).upper;
  report.agree = std::abs(report.jsr_original - report.jsr_reduced) <= 5.0 * tol;
  if (gauge != nullptr) {
    const ReducedSystem gauged = reduce(sys, apply_gauge(f, *gauge));
    report.jsr_reduced_gauged = jsr_sos(gauged.system, d, tol).upper;
    report.gauge_invariant =
        std::abs(*report.jsr_reduced_gauged - report.jsr_reduced) <= 5.0 * tol;
  }
  return report;
}

}  // namespace cjsr
