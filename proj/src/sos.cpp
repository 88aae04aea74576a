#include "cjsr/sos.hpp"

#include <algorithm>
#include <cmath>

namespace cjsr {

namespace {

double pow_int(double base, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

SosProgram build_primal(const ConstrainedSystem& sys, std::size_t d, double gamma,
                        double epsilon) {
  if (d == 0) throw Error("build_primal: d must be positive");
  if (gamma <= 0.0) throw Error("build_primal: gamma must be positive");
  if (epsilon <= 0.0) throw Error("build_primal: epsilon must be positive");
  const std::size_t n = sys.dimension();
  const Automaton& g = sys.automaton();
  const MonomialBasis& bd = MonomialBasis::get(n, d);
  const MonomialBasis& b2d = MonomialBasis::get(n, 2 * d);
  if (b2d.size() > 3000) throw Error("build_primal: lifted degree exceeds the size cap");
  const FiberMap& fm = FiberMap::get(n, d);
  const double g2d = pow_int(gamma, 2 * d);

  SosProgram out;
  out.layout.d = d;
  out.layout.nvars = n;
  out.layout.gamma = gamma;
  out.layout.epsilon = epsilon;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    out.layout.node_block.push_back(out.problem.add_block("P" + std::to_string(v), bd.size()));
  for (std::size_t e = 0; e < g.arc_count(); ++e)
    out.layout.arc_block.push_back(out.problem.add_block("Q" + std::to_string(e), bd.size()));

  // per-label lifted matrices and the epsilon right-hand sides
  std::vector<Matrix> lifted(sys.mode_count());
  std::vector<HomogeneousPoly> lifted_gram_poly(sys.mode_count());
  const HomogeneousPoly norm2d = sphere_power_poly(n, 2 * d);
  for (std::size_t s = 0; s < sys.mode_count(); ++s) {
    lifted[s] = lift_matrix(sys.matrix(s), d);
    GramForm gf{n, d, lifted[s].transpose() * lifted[s]};
    gf.gram.symmetrize();
    lifted_gram_poly[s] = gram_to_coeffs(gf);  // coefficients of ||A_sigma x||^{2d}
  }

  out.layout.arc_rows.resize(g.arc_count());
  for (std::size_t e = 0; e < g.arc_count(); ++e) {
    const Arc& arc = g.arc(e);
    const Matrix& lift = lifted[arc.label];
    for (std::size_t eta = 0; eta < b2d.size(); ++eta) {
      const Matrix fiber = fm.fiber_matrix(eta);
      SdpProblem::Constraint row;
      Matrix source_coeff = fiber;
      source_coeff *= g2d;
      row.terms.push_back({out.layout.node_block[arc.source], std::move(source_coeff)});
      Matrix target_coeff = lift * fiber * lift.transpose();
      target_coeff *= -1.0;
      target_coeff.symmetrize();
      row.terms.push_back({out.layout.node_block[arc.target], std::move(target_coeff)});
      Matrix slack_coeff = fiber;
      slack_coeff *= -1.0;
      row.terms.push_back({out.layout.arc_block[e], std::move(slack_coeff)});
      row.rhs = epsilon * (lifted_gram_poly[arc.label].coeffs[eta] - g2d * norm2d.coeffs[eta]);
      out.layout.arc_rows[e].push_back(out.problem.add_constraint(std::move(row)));
    }
  }
  {
    SdpProblem::Constraint norm_row;
    for (std::size_t v = 0; v < g.node_count(); ++v)
      norm_row.terms.push_back({out.layout.node_block[v], Matrix::identity(bd.size())});
    norm_row.rhs = static_cast<double>(g.node_count()) *
                   (1.0 - epsilon * static_cast<double>(bd.size()));
    out.layout.normalization_row = out.problem.add_constraint(std::move(norm_row));
  }
  return out;
}

CertificateCheck verify_certificate(const ConstrainedSystem& sys, const GramCertificate& cert,
                                    double tol) {
  const std::size_t n = sys.dimension();
  const Automaton& g = sys.automaton();
  const std::size_t d = cert.d;
  const double g2d = pow_int(cert.gamma, 2 * d);
  CertificateCheck out;
  out.worst_gram_eigenvalue = std::numeric_limits<double>::infinity();
  out.worst_identity_residual = 0.0;

  std::vector<HomogeneousPoly> node_polys;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    Matrix interior = cert.node_grams[v];
    for (std::size_t i = 0; i < interior.rows(); ++i) interior(i, i) -= cert.epsilon;
    out.worst_gram_eigenvalue =
        std::min(out.worst_gram_eigenvalue, symmetric_min_eigenvalue(interior));
    node_polys.push_back(gram_to_coeffs(GramForm{n, d, cert.node_grams[v]}));
  }
  for (std::size_t e = 0; e < g.arc_count(); ++e) {
    const Arc& arc = g.arc(e);
    out.worst_gram_eigenvalue =
        std::min(out.worst_gram_eigenvalue, symmetric_min_eigenvalue(cert.arc_slacks[e]));
    // gamma^{2d} p_u - p_v o A_sigma - q_e = 0, checked in the coefficient route
    HomogeneousPoly composed = compose_poly(node_polys[arc.target], sys.matrix(arc.label));
    HomogeneousPoly slack = gram_to_coeffs(GramForm{n, d, cert.arc_slacks[e]});
    double resid = 0.0;
    for (std::size_t i = 0; i < composed.coeffs.size(); ++i) {
      const double r =
          g2d * node_polys[arc.source].coeffs[i] - composed.coeffs[i] - slack.coeffs[i];
      resid = std::max(resid, std::abs(r));
    }
    out.worst_identity_residual = std::max(out.worst_identity_residual, resid);
  }
  double scale = 1.0;
  for (const auto& p : node_polys)
    for (double c : p.coeffs) scale = std::max(scale, std::abs(c));
  out.ok = out.worst_identity_residual <= tol * scale * std::max(1.0, g2d) &&
           out.worst_gram_eigenvalue >= -tol;
  return out;
}

double PseudoMeasure::mass(std::size_t arc) const {
  return dot(power_sum_poly(nvars, 2 * d).coeffs, moment_vectors[arc]);
}

double PseudoMeasure::total_mass() const {
  double s = 0.0;
  for (std::size_t e = 0; e < moment_vectors.size(); ++e) s += mass(e);
  return s;
}

double pseudo_expectation(const PseudoMeasure& pm, std::size_t arc,
                          const HomogeneousPoly& q) {
  if (q.degree != 2 * pm.d) throw Error("pseudo_expectation: degree mismatch");
  return dot(q.coeffs, pm.moment_vectors[arc]);
}

PseudoMeasure extract_dual(const ConstrainedSystem& sys, const SosLayout& layout,
                           const std::vector<double>& row_multipliers) {
  const Automaton& g = sys.automaton();
  const FiberMap& fm = FiberMap::get(layout.nvars, layout.d);
  PseudoMeasure pm;
  pm.d = layout.d;
  pm.nvars = layout.nvars;
  pm.gamma = layout.gamma;
  pm.moment_vectors.resize(g.arc_count());
  pm.moment_matrices.resize(g.arc_count());
  const HomogeneousPoly ps = power_sum_poly(layout.nvars, 2 * layout.d);
  double total = 0.0;
  for (std::size_t e = 0; e < g.arc_count(); ++e) {
    std::vector<double>& y = pm.moment_vectors[e];
    y.resize(fm.poly_size(), 0.0);
    for (std::size_t eta = 0; eta < fm.poly_size(); ++eta)
      y[eta] = row_multipliers[layout.arc_rows[e][eta]];
    total += dot(ps.coeffs, y);
  }
  if (!(total > 1e-300)) {
    pm.low_quality = true;
  } else {
    for (auto& y : pm.moment_vectors)
      for (double& v : y) v /= total;
  }
  for (std::size_t e = 0; e < g.arc_count(); ++e) {
    Matrix m(fm.gram_size(), fm.gram_size());
    for (std::size_t eta = 0; eta < fm.poly_size(); ++eta) {
      const double yv = pm.moment_vectors[e][eta];
      if (yv == 0.0) continue;
      for (const auto& entry : fm.fiber(eta)) {
        const double half = (entry.i == entry.j) ? entry.weight : entry.weight / 2.0;
        m(entry.i, entry.j) += half * yv;
        if (entry.i != entry.j) m(entry.j, entry.i) += half * yv;
      }
    }
    double tracescale = std::max(1e-12, m.trace());
    if (symmetric_min_eigenvalue(m) < -1e-6 * tracescale) pm.low_quality = true;
    pm.moment_matrices[e] = std::move(m);
  }
  return pm;
}

DualCheck verify_dual(const ConstrainedSystem& sys, const PseudoMeasure& pm, double gamma,
                      double tol) {
  const Automaton& g = sys.automaton();
  const std::size_t d = pm.d;
  const double g2d = pow_int(gamma, 2 * d);
  std::vector<Matrix> lifted(sys.mode_count());
  for (std::size_t s = 0; s < sys.mode_count(); ++s) lifted[s] = lift_matrix(sys.matrix(s), d);
  const std::size_t nd = MonomialBasis::get(sys.dimension(), d).size();

  DualCheck out;
  out.worst_node_min_eigenvalue = std::numeric_limits<double>::infinity();
  out.worst_node_max_abs = 0.0;
  out.worst_moment_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < g.arc_count(); ++e)
    out.worst_moment_min_eigenvalue = std::min(
        out.worst_moment_min_eigenvalue, symmetric_min_eigenvalue(pm.moment_matrices[e]));
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    Matrix s(nd, nd);
    for (std::size_t e : g.in_arcs(v)) {
      const Matrix& lift = lifted[g.arc(e).label];
      Matrix pushed = lift * pm.moment_matrices[e] * lift.transpose();
      pushed.symmetrize();
      s += pushed;
    }
    for (std::size_t e : g.out_arcs(v)) {
      Matrix outgoing = pm.moment_matrices[e];
      outgoing *= g2d;
      s -= outgoing;
    }
    const auto eig = symmetric_eigen(s);
    if (!eig.values.empty()) {
      out.worst_node_min_eigenvalue =
          std::min(out.worst_node_min_eigenvalue, eig.values.front());
      out.worst_node_max_abs = std::max(
          out.worst_node_max_abs,
          std::max(std::abs(eig.values.front()), std::abs(eig.values.back())));
    }
  }
  out.feasible = out.worst_node_min_eigenvalue >= -tol &&
                 out.worst_moment_min_eigenvalue >= -tol;
  return out;
}

JsrSosResult jsr_sos(const ConstrainedSystem& sys, std::size_t d, double tol,
                     double lower_hint) {
  if (tol < 1e-6) tol = 1e-6;
  JsrSosResult res;
  const Automaton& g = sys.automaton();
  const std::size_t nd = MonomialBasis::get(sys.dimension(), d).size();
  const double epsilon =
      1e-6 * static_cast<double>(g.node_count()) / static_cast<double>(nd);
  const double margin = 1e-9;

  double hi = 0.0;
  for (const Matrix& a : sys.matrices()) hi = std::max(hi, operator_norm_2(a));
  if (hi <= 1e-300) {
    res.upper = 0.0;
    return res;
  }
  hi *= 1.0 + 1e-9;
  double lo = std::max(0.0, lower_hint);

  const auto probe = [&](double gamma) -> FeasibilityVerdict {
    ++res.probes;
    SosProgram prog = build_primal(sys, d, gamma, epsilon);
    FeasibilityResult fr = feasibility(prog.problem, margin);
    if (fr.status == SdpStatus::max_iterations && fr.primal_blocks.empty()) {
      res.solver_trouble = true;
      return FeasibilityVerdict::marginal;
    }
    if (fr.verdict == FeasibilityVerdict::strictly_feasible) {
      GramCertificate cert;
      cert.d = d;
      cert.gamma = gamma;
      cert.epsilon = epsilon;
      for (std::size_t v = 0; v < g.node_count(); ++v) {
        Matrix p = fr.primal_blocks[prog.layout.node_block[v]];
        for (std::size_t i = 0; i < p.rows(); ++i) p(i, i) += epsilon;
        cert.node_grams.push_back(std::move(p));
      }
      for (std::size_t e = 0; e < g.arc_count(); ++e)
        cert.arc_slacks.push_back(fr.primal_blocks[prog.layout.arc_block[e]]);
      res.certificate = std::move(cert);
    } else if (!fr.row_multipliers.empty()) {
      PseudoMeasure pm = extract_dual(sys, prog.layout, fr.row_multipliers);
      res.duals.push_back(pm);
      if (!pm.low_quality || !res.dual_near_optimal) res.dual_near_optimal = std::move(pm);
    }
    return fr.verdict;
  };

  // establish a strictly feasible upper endpoint
  bool hi_ok = false;
  for (int attempt = 0; attempt < 60 && !res.solver_trouble; ++attempt) {
    const FeasibilityVerdict v = probe(hi);
    if (v == FeasibilityVerdict::strictly_feasible) {
      hi_ok = true;
      break;
    }
    lo = std::max(lo, hi);
    hi = hi * 1.25 + 1e-9;
  }
  if (!hi_ok) {
    res.solver_trouble = true;
    res.upper = hi;
    res.lower_probe = lo;
    return res;
  }

  while (hi - lo > tol && !res.solver_trouble) {
    const double gamma = 0.5 * (lo + hi);
    const FeasibilityVerdict v = probe(gamma);
    if (res.solver_trouble) break;
    if (v == FeasibilityVerdict::strictly_feasible)
      hi = gamma;
    else
      lo = gamma;
  }
  res.upper = hi;
  res.lower_probe = lo;
  return res;
}

PrunedAutomaton prune_zero_dual_arcs(const ConstrainedSystem& sys,
                                     const std::vector<PseudoMeasure>& duals,
                                     double threshold) {
  const Automaton& g = sys.automaton();
  PrunedAutomaton out;
  std::vector<bool> kept(g.arc_count(), false);
  bool any_dual = false;
  for (const PseudoMeasure& pm : duals) {
    if (pm.moment_matrices.size() != g.arc_count()) continue;
    any_dual = true;
    double max_trace = 0.0;
    for (const Matrix& m : pm.moment_matrices) max_trace = std::max(max_trace, m.trace());
    if (max_trace <= 0.0) continue;
    for (std::size_t e = 0; e < g.arc_count(); ++e)
      if (pm.moment_matrices[e].trace() >= threshold * max_trace) kept[e] = true;
  }
  for (std::size_t e = 0; e < g.arc_count(); ++e)
    if (kept[e]) out.kept_arcs.push_back(e);

  if (!any_dual || out.kept_arcs.empty()) {
    out.fallback_full = true;
    out.kept_arcs.clear();
    for (std::size_t e = 0; e < g.arc_count(); ++e) out.kept_arcs.push_back(e);
    out.adjacency_rho = g.adjacency_spectral_radius();
    out.automaton = g;
    for (std::size_t v = 0; v < g.node_count(); ++v) out.component_nodes.push_back(v);
    return out;
  }

  std::vector<Arc> kept_arc_list;
  for (std::size_t e : out.kept_arcs) kept_arc_list.push_back(g.arc(e));
  const auto comps = strongly_connected_components(g.node_count(), kept_arc_list);

  // dominant component: the one whose adjacency spectral radius is largest
  double best_rho = -1.0;
  std::vector<std::size_t> best_comp;
  for (const auto& comp : comps) {
    std::vector<std::size_t> node_pos(g.node_count(), g.node_count());
    for (std::size_t i = 0; i < comp.size(); ++i) node_pos[comp[i]] = i;
    Matrix adj(comp.size(), comp.size());
    bool has_arc = false;
    for (const Arc& a : kept_arc_list) {
      if (node_pos[a.source] < comp.size() && node_pos[a.target] < comp.size()) {
        adj(node_pos[a.source], node_pos[a.target]) += 1.0;
        has_arc = true;
      }
    }
    if (!has_arc) continue;
    const double rho = spectral_radius(adj);
    if (rho > best_rho + 1e-12 || (rho > best_rho - 1e-12 && comp.size() > best_comp.size())) {
      best_rho = rho;
      best_comp = comp;
    }
  }
  if (best_comp.empty()) {
    out.fallback_full = true;
    out.kept_arcs.clear();
    for (std::size_t e = 0; e < g.arc_count(); ++e) out.kept_arcs.push_back(e);
    out.adjacency_rho = g.adjacency_spectral_radius();
    out.automaton = g;
    for (std::size_t v = 0; v < g.node_count(); ++v) out.component_nodes.push_back(v);
    return out;
  }
  out.adjacency_rho = best_rho;
  out.component_nodes = best_comp;
  std::vector<std::size_t> node_pos(g.node_count(), g.node_count());
  for (std::size_t i = 0; i < best_comp.size(); ++i) node_pos[best_comp[i]] = i;
  std::vector<Arc> comp_arcs;
  for (const Arc& a : kept_arc_list)
    if (node_pos[a.source] < best_comp.size() && node_pos[a.target] < best_comp.size())
      comp_arcs.push_back(Arc{node_pos[a.source], node_pos[a.target], a.label});
  out.automaton = Automaton(best_comp.size(), std::move(comp_arcs));
  return out;
}

}  // namespace cjsr
