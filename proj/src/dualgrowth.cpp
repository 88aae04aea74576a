#include "cjsr/dualgrowth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cjsr {

namespace {

double pow_int(double base, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

double coeff_norm(const std::vector<double>& c) {
  double s = 0.0;
  for (double v : c) s += v * v;
  return std::sqrt(s);
}

}  // namespace

GrowthTrace run_prodl(const ConstrainedSystem& sys, const PseudoMeasure& pm,
                      const HomogeneousPoly& p0, std::size_t l, std::size_t blocks) {
  if (l == 0) throw Error("run_prodl: l must be positive");
  if (p0.nvars != sys.dimension() || p0.degree != 2 * pm.d)
    throw Error("run_prodl: p0 has the wrong shape");
  const Automaton& g = sys.automaton();

  GrowthTrace trace;
  trace.d = pm.d;
  trace.l = l;
  trace.gamma = pm.gamma;

  // initial arc: the one whose pseudo-expectation of p0 is largest
  double best = 0.0;
  std::size_t best_arc = g.arc_count();
  for (std::size_t e = 0; e < g.arc_count(); ++e) {
    const double v = pseudo_expectation(pm, e, p0);
    if (v > best) {
      best = v;
      best_arc = e;
    }
  }
  if (best_arc == g.arc_count())
    throw Error("run_prodl: no arc has a positive pseudo-expectation of p0");
  trace.initial_arc = best_arc;
  trace.log_theta0 = std::log(best);

  HomogeneousPoly p = p0;
  double logmag = 0.0;
  std::size_t head = g.arc(best_arc).source;

  for (std::size_t blk = 0; blk < blocks; ++blk) {
    const auto paths = enumerate_paths(g, l, PathFilter::ending_at(head));
    double best_val = 0.0;
    const Path* best_path = nullptr;
    HomogeneousPoly best_poly;
    for (const Path& s : paths) {
      HomogeneousPoly q = compose_poly(p, sys.path_product(s));
      const double val = pseudo_expectation(pm, s.arcs.front(), q);
      if (best_path == nullptr ? val > 0.0 : val > best_val) {
        best_val = val;
        best_path = &s;
        best_poly = std::move(q);
      }
    }
    if (best_path == nullptr) {
      trace.stalled = true;
      break;
    }
    GrowthStep step;
    step.head_before = head;
    step.arcs.assign(best_path->arcs.rbegin(), best_path->arcs.rend());
    step.log_theta = std::log(best_val) + logmag;
    const double nrm = coeff_norm(best_poly.coeffs);
    logmag += std::log(nrm);
    for (double& c : best_poly.coeffs) c /= nrm;
    p = std::move(best_poly);
    head = g.path_start(*best_path);
    for (std::size_t a : step.arcs) trace.picks.push_back(a);
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

GrowthGuarantee check_growth_guarantee(const GrowthTrace& trace, const ConstrainedSystem& sys) {
  const Automaton& g = sys.automaton();
  GrowthGuarantee out;
  out.worst_step_slack = std::numeric_limits<double>::infinity();
  const double log_gamma = std::log(trace.gamma);
  const double step_gain = 2.0 * static_cast<double>(trace.d * trace.l) * log_gamma;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const double prev = (i == 0) ? trace.log_theta0 : trace.steps[i - 1].log_theta;
    const double indeg =
        static_cast<double>(count_paths_into(g, trace.l, trace.steps[i].head_before));
    const double bound = prev + step_gain - std::log(indeg);
    out.worst_step_slack = std::min(out.worst_step_slack, trace.steps[i].log_theta - bound);
  }
  out.per_step_ok = trace.steps.empty() || out.worst_step_slack >= -1e-9;

  Matrix at_pow = Matrix::identity(g.node_count());
  const Matrix at = g.transpose().adjacency_matrix();
  for (std::size_t i = 0; i < trace.l; ++i) at_pow = at_pow * at;
  out.asymptotic_bound =
      trace.gamma / std::pow(at_pow.inf_norm(),
                             1.0 / (2.0 * static_cast<double>(trace.d * trace.l)));
  if (trace.cycle)
    out.asymptotic_ok = trace.cycle->growth >= out.asymptotic_bound - 1e-6;
  return out;
}

std::optional<CycleCertificate> detect_period(const ConstrainedSystem& sys, GrowthTrace& trace,
                                              std::size_t burn_in, std::size_t max_period) {
  const auto& picks = trace.picks;
  if (picks.size() < burn_in + 2) return std::nullopt;
  for (std::size_t p = 1; p <= max_period; ++p) {
    if (picks.size() < 2 * p) break;
    // extend the p-periodic suffix backwards as far as it goes
    std::size_t settled = picks.size() - p;
    while (settled > 0 && picks[settled - 1] == picks[settled - 1 + p]) --settled;
    if (picks.size() - settled < 2 * p) continue;  // fewer than two full periods
    // one period, reversed, is a forward-admissible cycle
    std::vector<std::size_t> fwd(picks.end() - static_cast<std::ptrdiff_t>(p), picks.end());
    std::reverse(fwd.begin(), fwd.end());
    Path cycle{std::move(fwd)};
    if (!sys.automaton().path_is_valid(cycle) || !sys.automaton().path_is_cycle(cycle))
      continue;
    CycleCertificate cert{cycle, sys.cycle_growth(cycle)};
    trace.cycle = cert;
    return cert;
  }
  return std::nullopt;
}

std::optional<PseudoMeasure> cycle_to_measures(const ConstrainedSystem& sys, const Path& cycle,
                                               std::size_t d) {
  const Automaton& g = sys.automaton();
  if (!g.path_is_cycle(cycle)) throw Error("cycle_to_measures: not a cycle");
  const Matrix prod = sys.path_product(cycle);
  const double rho = spectral_radius(prod);
  if (rho <= 0.0) throw Error("cycle_to_measures: zero spectral radius");
  const auto x0 = dominant_real_eigenvector(prod);
  if (!x0) return std::nullopt;  // complex dominant pair: unsupported

  const std::size_t k = cycle.length();
  const double lambda_hat = std::pow(rho, 1.0 / static_cast<double>(k));
  const std::size_t nd = MonomialBasis::get(sys.dimension(), d).size();
  const std::size_t n2d = MonomialBasis::get(sys.dimension(), 2 * d).size();

  PseudoMeasure pm;
  pm.d = d;
  pm.nvars = sys.dimension();
  pm.gamma = lambda_hat;
  pm.moment_vectors.assign(g.arc_count(), std::vector<double>(n2d, 0.0));
  pm.moment_matrices.assign(g.arc_count(), Matrix(nd, nd));

  std::vector<double> x = *x0;
  double lognorm = 0.0;  // log ||x_i|| accumulated from the unit eigenvector
  for (std::size_t i = 0; i < k; ++i) {
    // atom for step i+1 sits at the source state x_i
    const double alpha =
        std::exp(lognorm - static_cast<double>(i) * std::log(lambda_hat));
    const std::size_t arc = cycle.arcs[i];
    const auto lifted_2d = lift_vector(x, 2 * d);
    const auto lifted_d = lift_vector(x, d);
    for (std::size_t j = 0; j < n2d; ++j) pm.moment_vectors[arc][j] += alpha * lifted_2d[j];
    for (std::size_t r = 0; r < nd; ++r)
      for (std::size_t c = 0; c < nd; ++c)
        pm.moment_matrices[arc](r, c) += alpha * lifted_d[r] * lifted_d[c];
    // advance along the cycle and renormalize
    x = sys.matrix(g.arc(arc).label).apply(x);
    const double nx = norm2(x);
    if (nx <= 0.0) throw Error("cycle_to_measures: trajectory hit zero");
    lognorm += std::log(nx);
    for (double& xi : x) xi /= nx;
  }
  const double total = pm.total_mass();
  if (total > 0.0) {
    for (auto& mv : pm.moment_vectors)
      for (double& v : mv) v /= total;
    for (auto& mm : pm.moment_matrices) mm *= 1.0 / total;
  }
  return pm;
}

std::optional<Atom> extract_atoms(const Matrix& moment_matrix, std::size_t nvars,
                                  std::size_t d, double tol) {
  if (!moment_matrix.square()) throw Error("extract_atoms: non-square moment matrix");
  const SvdResult dec = svd(moment_matrix);
  if (dec.singular_values.empty() || dec.singular_values[0] <= 1e-14) return std::nullopt;
  if (dec.singular_values.size() > 1 &&
      dec.singular_values[1] / dec.singular_values[0] >= tol)
    return std::nullopt;

  std::vector<double> top(moment_matrix.rows());
  for (std::size_t i = 0; i < top.size(); ++i) top[i] = dec.u(i, 0);

  Atom atom;
  atom.weight = moment_matrix.trace();
  if (d == 1) {
    atom.direction = top;
  } else {
    // de-lift: the top direction must itself be a lifted vector
    const MonomialBasis& basis = MonomialBasis::get(nvars, d);
    std::size_t anchor = 0;
    double anchor_val = 0.0;
    std::vector<std::size_t> pure(nvars);
    for (std::size_t i = 0; i < nvars; ++i) {
      std::vector<int> e(nvars, 0);
      e[i] = static_cast<int>(d);
      pure[i] = basis.index_of(e);
      if (std::abs(top[pure[i]]) > anchor_val) {
        anchor_val = std::abs(top[pure[i]]);
        anchor = i;
      }
    }
    if (anchor_val <= 1e-10) return std::nullopt;
    // fix sign so the anchor pure power is positive
    if (top[pure[anchor]] < 0.0)
      for (double& v : top) v = -v;
    std::vector<double> x(nvars, 0.0);
    x[anchor] = std::pow(top[pure[anchor]], 1.0 / static_cast<double>(d));
    std::vector<int> mixed(nvars, 0);
    for (std::size_t j = 0; j < nvars; ++j) {
      if (j == anchor) continue;
      std::fill(mixed.begin(), mixed.end(), 0);
      mixed[anchor] = static_cast<int>(d - 1);
      mixed[j] = 1;
      const std::size_t idx = basis.index_of(mixed);
      x[j] = top[idx] /
             (basis.scale(idx) * std::pow(x[anchor], static_cast<double>(d - 1)));
    }
    const double nx = norm2(x);
    if (nx <= 0.0) return std::nullopt;
    for (double& xi : x) xi /= nx;
    const auto roundtrip = lift_vector(x, d);
    double err = 0.0;
    for (std::size_t i = 0; i < roundtrip.size(); ++i)
      err += (roundtrip[i] - top[i]) * (roundtrip[i] - top[i]);
    if (std::sqrt(err) > std::max(tol, 1e-6) * 10.0) return std::nullopt;
    atom.direction = x;
  }
  const double nd = norm2(atom.direction);
  if (nd <= 0.0) return std::nullopt;
  for (double& v : atom.direction) v /= nd;
  for (double v : atom.direction) {
    if (std::abs(v) > 1e-12) {
      if (v < 0.0)
        for (double& u : atom.direction) u = -u;
      break;
    }
  }
  return atom;
}

ScalarSystem bsc_reduce(const ConstrainedSystem& sys,
                        const std::vector<std::optional<Atom>>& arc_atoms,
                        double angular_tol) {
  const Automaton& g = sys.automaton();
  if (arc_atoms.size() != g.arc_count()) throw Error("bsc_reduce: atom list size mismatch");
  ScalarSystem ss;

  // deduplicate atom directions projectively
  for (std::size_t e = 0; e < g.arc_count(); ++e) {
    if (!arc_atoms[e]) continue;
    ss.support_arcs.push_back(e);
    const Atom& a = *arc_atoms[e];
    bool found = false;
    for (const Atom& known : ss.atoms) {
      const double c = std::abs(dot(known.direction, a.direction));
      if (std::acos(std::min(1.0, c)) <= 1e-8) {
        found = true;
        break;
      }
    }
    if (!found) ss.atoms.push_back(a);
  }
  if (ss.atoms.empty()) return ss;

  // composite nodes: every (node, atom) pair
  for (std::size_t v = 0; v < g.node_count(); ++v)
    for (std::size_t b = 0; b < ss.atoms.size(); ++b)
      ss.nodes.push_back(ScalarSystem::Node{v, b});
  const auto node_id = [&](std::size_t v, std::size_t b) {
    return v * ss.atoms.size() + b;
  };

  for (std::size_t e = 0; e < g.arc_count(); ++e) {
    const Arc& arc = g.arc(e);
    for (std::size_t b = 0; b < ss.atoms.size(); ++b) {
      std::vector<double> y = sys.matrix(arc.label).apply(ss.atoms[b].direction);
      const double ny = norm2(y);
      if (ny <= 1e-14) continue;
      for (double& v : y) v /= ny;
      for (std::size_t c = 0; c < ss.atoms.size(); ++c) {
        const double cosang = std::abs(dot(y, ss.atoms[c].direction));
        if (std::acos(std::min(1.0, cosang)) <= angular_tol)
          ss.arcs.push_back(ScalarSystem::SArc{node_id(arc.source, b),
                                               node_id(arc.target, c), ny, e});
      }
    }
  }
  return ss;
}

namespace {

// best cycle growth over closed walks of the support subgraph
std::optional<CycleCertificate> support_cycle_scan(const ConstrainedSystem& sys,
                                                   const std::vector<std::size_t>& support) {
  const Automaton& g = sys.automaton();
  std::vector<std::vector<std::size_t>> out_by_node(g.node_count());
  for (std::size_t e : support) out_by_node[g.arc(e).source].push_back(e);
  const std::size_t cap_len = std::max<std::size_t>(g.node_count() + 2, 8);
  std::optional<CycleCertificate> best;
  std::size_t explored = 0;

  std::vector<std::size_t> stack_arcs;
  const auto dfs = [&](auto&& self, std::size_t start, std::size_t node) -> void {
    if (explored > kPathEnumerationCap) return;
    if (!stack_arcs.empty() && node == start) {
      ++explored;
      Path cycle{stack_arcs};
      const double growth = sys.cycle_growth(cycle);
      if (!best || growth > best->growth) best = CycleCertificate{cycle, growth};
    }
    if (stack_arcs.size() >= cap_len) return;
    for (std::size_t e : out_by_node[node]) {
      stack_arcs.push_back(e);
      self(self, start, g.arc(e).target);
      stack_arcs.pop_back();
    }
  };
  for (std::size_t v = 0; v < g.node_count(); ++v) dfs(dfs, v, v);
  return best;
}

}  // namespace

std::optional<CycleCertificate> scalar_lower_bound(const ScalarSystem& ss,
                                                   const ConstrainedSystem& sys) {
  std::optional<CycleCertificate> best;

  if (!ss.empty()) {
    // Karp per strongly connected component of the composite graph
    std::vector<Arc> comp_arcs;
    comp_arcs.reserve(ss.arcs.size());
    for (const auto& a : ss.arcs) comp_arcs.push_back(Arc{a.source, a.target, 0});
    const auto comps = strongly_connected_components(ss.nodes.size(), comp_arcs);
    for (const auto& comp : comps) {
      std::vector<std::size_t> pos(ss.nodes.size(), ss.nodes.size());
      for (std::size_t i = 0; i < comp.size(); ++i) pos[comp[i]] = i;
      std::vector<Arc> local;
      std::vector<double> weights;
      std::vector<std::size_t> local_to_global;
      for (std::size_t ai = 0; ai < ss.arcs.size(); ++ai) {
        const auto& a = ss.arcs[ai];
        if (pos[a.source] < comp.size() && pos[a.target] < comp.size()) {
          // distinct labels keep parallel composite arcs distinct
          local.push_back(Arc{pos[a.source], pos[a.target], local.size()});
          weights.push_back(std::log(a.weight));
          local_to_global.push_back(ai);
        }
      }
      if (local.empty()) continue;
      if (!check_strong_connectivity(comp.size(), local)) continue;
      Automaton comp_graph(comp.size(), local);
      const MaxCycleMean mcm = max_cycle_mean(comp_graph, weights);
      // project back to the original automaton and recompute the growth
      std::vector<std::size_t> original;
      for (std::size_t le : mcm.cycle.arcs)
        original.push_back(ss.arcs[local_to_global[le]].original_arc);
      Path projected{std::move(original)};
      if (!sys.automaton().path_is_valid(projected) ||
          !sys.automaton().path_is_cycle(projected))
        continue;
      const double growth = sys.cycle_growth(projected);
      if (!best || growth > best->growth) best = CycleCertificate{projected, growth};
    }
  }

  // the composite graph may be acyclic even though the dual support carries
  // cycles; scan those directly
  if (!ss.support_arcs.empty()) {
    const auto support_best = support_cycle_scan(sys, ss.support_arcs);
    if (support_best && (!best || support_best->growth > best->growth)) best = support_best;
  }
  return best;
}

BruteForceBounds brute_force_bounds(const ConstrainedSystem& sys, std::size_t kmax) {
  if (kmax == 0) throw Error("brute_force_bounds: kmax must be positive");
  const Automaton& g = sys.automaton();
  BruteForceBounds out;
  out.kmax = kmax;
  std::size_t explored = 0;

  std::vector<std::size_t> stack_arcs;
  std::vector<Matrix> products;  // products[i] = A of the first i arcs
  products.push_back(Matrix::identity(sys.dimension()));

  double best_upper = 0.0;
  const auto dfs = [&](auto&& self, std::size_t start, std::size_t node) -> void {
    if (++explored > kPathEnumerationCap)
      throw Error("brute_force_bounds: path cap exceeded");
    const std::size_t len = stack_arcs.size();
    if (len > 0 && node == start) {
      const double rho = spectral_radius(products.back());
      const double growth = std::pow(rho, 1.0 / static_cast<double>(len));
      if (!out.lower || growth > out.lower->growth)
        out.lower = CycleCertificate{Path{stack_arcs}, growth};
    }
    if (len == kmax) {
      best_upper = std::max(best_upper, operator_norm_2(products.back()));
      return;
    }
    for (std::size_t e : g.out_arcs(node)) {
      stack_arcs.push_back(e);
      products.push_back(sys.matrix(g.arc(e).label) * products.back());
      self(self, start, g.arc(e).target);
      products.pop_back();
      stack_arcs.pop_back();
    }
  };
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    stack_arcs.clear();
    dfs(dfs, v, v);
  }
  out.upper = std::pow(best_upper, 1.0 / static_cast<double>(kmax));
  return out;
}

}  // namespace cjsr
