#include "cjsr/pradius.hpp"

#include <algorithm>
#include <cmath>

#include "cjsr/dualgrowth.hpp"
#include "cjsr/polylift.hpp"
#include "cjsr/sos.hpp"

namespace cjsr {

PRadiusResult p_radius_even(const ConstrainedSystem& sys, std::size_t p) {
  if (p < 2 || p % 2 != 0) throw Error("p_radius_even: p must be even and at least 2");
  const Automaton& g = sys.automaton();
  const std::size_t np = MonomialBasis::get(sys.dimension(), p).size();
  const std::size_t dim = g.node_count() * np;
  if (dim > 4000) throw Error("p_radius_even: lifted block dimension exceeds the cap");

  std::vector<Matrix> lifted(sys.mode_count());
  for (std::size_t s = 0; s < sys.mode_count(); ++s) lifted[s] = lift_matrix(sys.matrix(s), p);

  Matrix total(dim, dim);
  for (const Arc& a : g.arcs()) {
    const Matrix& block = lifted[a.label];
    const std::size_t r0 = a.target * np;
    const std::size_t c0 = a.source * np;
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j) total(r0 + i, c0 + j) += block(i, j);
  }
  const double pr = static_cast<double>(p);
  PRadiusResult out;
  out.p = p;
  out.method = PRadiusMethod::lift_spectral;
  out.value = std::pow(spectral_radius(total), 1.0 / pr) /
              std::pow(g.adjacency_spectral_radius(), 1.0 / pr);
  return out;
}

PRadiusResult p_radius_bruteforce(const ConstrainedSystem& sys, std::size_t p,
                                  std::size_t k) {
  if (p == 0 || k == 0) throw Error("p_radius_bruteforce: p and k must be positive");
  const Automaton& g = sys.automaton();
  const double pd = static_cast<double>(p);

  double total = 0.0;
  std::size_t total_count = 0;
  double max_form = 0.0;
  std::size_t explored = 0;
  std::vector<Matrix> products;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    double node_sum = 0.0;
    std::size_t node_count = 0;
    products.clear();
    products.push_back(Matrix::identity(sys.dimension()));
    const auto dfs = [&](auto&& self, std::size_t node, std::size_t depth) -> void {
      if (++explored > kPathEnumerationCap)
        throw Error("p_radius_bruteforce: path cap exceeded");
      if (depth == k) {
        node_sum += std::pow(operator_norm_2(products.back()), pd);
        ++node_count;
        return;
      }
      for (std::size_t e : g.out_arcs(node)) {
        products.push_back(sys.matrix(g.arc(e).label) * products.back());
        self(self, g.arc(e).target, depth + 1);
        products.pop_back();
      }
    };
    dfs(dfs, v, 0);
    total += node_sum;
    total_count += node_count;
    if (node_count > 0)
      max_form = std::max(max_form, node_sum / static_cast<double>(node_count));
  }
  PRadiusResult out;
  out.p = p;
  out.k = k;
  out.method = PRadiusMethod::brute_force_k;
  out.value = std::pow(total / static_cast<double>(total_count),
                       1.0 / (pd * static_cast<double>(k)));
  out.max_form = std::pow(max_form, 1.0 / (pd * static_cast<double>(k)));
  return out;
}

InequalityChainReport inequality_chain_check(const ConstrainedSystem& sys, std::size_t d,
                                             std::size_t brute_k, double slack_tol) {
  InequalityChainReport report;
  const Automaton& g = sys.automaton();
  const double rho_adj = g.adjacency_spectral_radius();
  const double binom_factor = static_cast<double>(
      binomial(sys.dimension() + d - 1, d));

  std::vector<double> rho_p;  // p = 2, 4, ..., 2d
  for (std::size_t p = 2; p <= 2 * d; p += 2) rho_p.push_back(p_radius_even(sys, p).value);

  const BruteForceBounds brute = brute_force_bounds(sys, brute_k);
  report.brute_lower = brute.lower ? brute.lower->growth : 0.0;
  report.brute_upper = brute.upper;
  const JsrSosResult sos = jsr_sos(sys, d, 1e-6, report.brute_lower);
  report.jsr_sos_upper = sos.upper;
  report.mix_lower =
      sos.upper * std::pow(std::min(binom_factor, rho_adj), -1.0 / (2.0 * d));

  const auto add = [&](std::string name, double lhs, double rhs) {
    InequalityLink link;
    link.name = std::move(name);
    link.lhs = lhs;
    link.rhs = rhs;
    link.slack = rhs - lhs;
    link.ok = link.slack >= -slack_tol;
    report.links.push_back(std::move(link));
  };

  for (std::size_t i = 0; i + 1 < rho_p.size(); ++i) {
    const std::size_t p = 2 * (i + 1), q = 2 * (i + 2);
    add("rho_" + std::to_string(p) + " <= rho_" + std::to_string(q), rho_p[i], rho_p[i + 1]);
    add("rho(A(G))^{1/" + std::to_string(q) + "} rho_" + std::to_string(q) +
            " <= rho(A(G))^{1/" + std::to_string(p) + "} rho_" + std::to_string(p),
        std::pow(rho_adj, 1.0 / q) * rho_p[i + 1], std::pow(rho_adj, 1.0 / p) * rho_p[i]);
  }
  for (std::size_t i = 0; i < rho_p.size(); ++i) {
    const std::size_t p = 2 * (i + 1);
    add("rho_" + std::to_string(p) + " <= cjsr (via brute upper)", rho_p[i], brute.upper);
    add("brute lower <= rho(A(G))^{1/" + std::to_string(p) + "} rho_" + std::to_string(p),
        report.brute_lower, std::pow(rho_adj, 1.0 / p) * rho_p[i]);
  }
  add("jsrsos <= rho(A(G))^{1/2d} rho_2d", sos.upper,
      std::pow(rho_adj, 1.0 / (2.0 * d)) * rho_p.back());
  add("jsrsos <= binom^{1/2d} cjsr (via brute upper)", sos.upper,
      std::pow(binom_factor, 1.0 / (2.0 * d)) * brute.upper);
  add("mix lower <= cjsr (via brute upper)", report.mix_lower, brute.upper);
  add("brute lower <= jsrsos", report.brute_lower, sos.upper);

  report.all_ok = std::all_of(report.links.begin(), report.links.end(),
                              [](const InequalityLink& l) { return l.ok; });
  return report;
}

}  // namespace cjsr
