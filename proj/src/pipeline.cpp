#include "cjsr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "cjsr/polylift.hpp"

namespace cjsr {

namespace {

void note_cycle(BoundsReport& report, const CycleCertificate& cert, const std::string& prov,
                std::size_t degree) {
  report.lower_bounds.push_back(LowerBound{cert.growth, prov, degree});
  if (!report.best_cycle || cert.growth > report.best_cycle->growth) report.best_cycle = cert;
}

}  // namespace

BoundsReport run_bounds(const ConstrainedSystem& sys, const BoundsOptions& opts) {
  BoundsReport report;
  const Automaton& g = sys.automaton();
  const double rho_adj = g.adjacency_spectral_radius();

  // degree-independent cycle search first; it also seeds the bisections
  double cycle_hint = 0.0;
  try {
    const BruteForceBounds brute = brute_force_bounds(sys, opts.cycle_kmax);
    report.brute_upper = brute.upper;
    if (brute.lower) {
      note_cycle(report, *brute.lower, "cycle", 0);
      cycle_hint = brute.lower->growth;
    }
  } catch (const Error& e) {
    report.warnings.push_back(std::string("brute force: ") + e.what());
    report.brute_upper = std::numeric_limits<double>::infinity();
  }

  double best_sos = std::numeric_limits<double>::infinity();
  for (std::size_t d = 1; d <= opts.degree_max; ++d) {
    DegreeRow row;
    row.d = d;
    try {
      const JsrSosResult sos = jsr_sos(sys, d, opts.tol, cycle_hint);
      if (sos.solver_trouble)
        report.warnings.push_back("d=" + std::to_string(d) +
                                  ": solver breakdown mid-bisection; bracket reported as-is");
      row.ub = sos.upper;
      best_sos = std::min(best_sos, sos.upper);

      const double binom_factor =
          static_cast<double>(binomial(sys.dimension() + d - 1, d));
      const double mix = sos.upper * std::pow(std::min(binom_factor, rho_adj),
                                              -1.0 / (2.0 * static_cast<double>(d)));
      row.lb_mix = mix;
      report.lower_bounds.push_back(LowerBound{mix, "mix-corollary", d});

      if (!sos.duals.empty()) {
        try {
          const PrunedAutomaton pruned = prune_zero_dual_arcs(sys, sos.duals);
          const double pruned_mix =
              sos.upper * std::pow(std::min(binom_factor, pruned.adjacency_rho),
                                   -1.0 / (2.0 * static_cast<double>(d)));
          row.lb_pruned = pruned_mix;
          report.lower_bounds.push_back(LowerBound{pruned_mix, "pruned-mix", d});
        } catch (const Error& e) {
          report.warnings.push_back("d=" + std::to_string(d) + " pruning: " + e.what());
        }
      }

      double cycle_lb = cycle_hint > 0.0 ? cycle_hint : 0.0;
      bool have_cycle_lb = cycle_hint > 0.0;
      if (sos.dual_near_optimal) {
        const PseudoMeasure& dual = *sos.dual_near_optimal;
        for (std::size_t l : opts.prodl_l) {
          try {
            const std::size_t blocks = 50 + 100 / l + 5;
            GrowthTrace trace =
                run_prodl(sys, dual, sphere_power_poly(sys.dimension(), 2 * d), l, blocks);
            const auto cert = detect_period(sys, trace, 50 * l, 50);
            if (cert) {
              note_cycle(report, *cert, "algorithm-1", d);
              cycle_lb = std::max(cycle_lb, cert->growth);
              have_cycle_lb = true;
              const GrowthGuarantee gg = check_growth_guarantee(trace, sys);
              if (!gg.per_step_ok)
                report.warnings.push_back("d=" + std::to_string(d) + " l=" + std::to_string(l) +
                                          ": per-step growth guarantee violated");
            }
          } catch (const Error& e) {
            report.warnings.push_back("d=" + std::to_string(d) + " l=" + std::to_string(l) +
                                      " algorithm-1: " + e.what());
          }
        }
        try {
          std::vector<std::optional<Atom>> atoms;
          atoms.reserve(g.arc_count());
          for (std::size_t e = 0; e < g.arc_count(); ++e)
            atoms.push_back(extract_atoms(dual.moment_matrices[e], sys.dimension(), d, 1e-2));
          const ScalarSystem ss = bsc_reduce(sys, atoms);
          const auto cert = scalar_lower_bound(ss, sys);
          if (cert) {
            note_cycle(report, *cert, "atom-extraction", d);
            cycle_lb = std::max(cycle_lb, cert->growth);
            have_cycle_lb = true;
          }
        } catch (const Error& e) {
          report.warnings.push_back("d=" + std::to_string(d) + " atoms: " + e.what());
        }
      }
      if (have_cycle_lb) row.lb_cycle = cycle_lb;
    } catch (const Error& e) {
      report.warnings.push_back("d=" + std::to_string(d) + ": " + e.what());
    }
    report.rows.push_back(row);
    if (report.best_cycle) cycle_hint = std::max(cycle_hint, report.best_cycle->growth);
  }

  report.best_sos_upper = best_sos;
  report.best_upper = std::min(best_sos, report.brute_upper);
  report.best_lower = 0.0;
  for (const LowerBound& lb : report.lower_bounds)
    report.best_lower = std::max(report.best_lower, lb.value);

  // replay the winning cycle through its occupation measures when possible
  if (report.best_cycle) {
    try {
      const auto pm = cycle_to_measures(sys, report.best_cycle->cycle, 1);
      if (pm) {
        const DualCheck check = verify_dual(sys, *pm, report.best_cycle->growth, 1e-7);
        report.notes.push_back(
            "occupation-measure replay of the best cycle: worst node eigenvalue " +
            std::to_string(check.worst_node_max_abs));
      } else {
        report.notes.push_back(
            "best cycle has a complex dominant pair; occupation-measure replay skipped");
      }
    } catch (const Error& e) {
      report.warnings.push_back(std::string("cycle replay: ") + e.what());
    }
  }
  return report;
}

void write_csv(const BoundsReport& report, std::ostream& os) {
  os << "d,ub,lb_mix,lb_pruned,lb_cycle\r\n";
  const auto cell = [&os](const std::optional<double>& v, bool last) {
    if (v) os << std::setprecision(12) << *v;
    os << (last ? "\r\n" : ",");
  };
  for (const DegreeRow& row : report.rows) {
    os << row.d << ",";
    cell(row.ub, false);
    cell(row.lb_mix, false);
    cell(row.lb_pruned, false);
    cell(row.lb_cycle, true);
  }
}

void write_report(const BoundsReport& report, const ConstrainedSystem& sys, std::ostream& os) {
  os << "system: " << (sys.name().empty() ? "<unnamed>" : sys.name()) << "\n";
  os << "dimension " << sys.dimension() << ", modes " << sys.mode_count() << ", nodes "
     << sys.automaton().node_count() << ", arcs " << sys.automaton().arc_count() << "\n\n";
  os << std::setprecision(10);
  for (const DegreeRow& row : report.rows) {
    os << "d = " << row.d << ":";
    if (row.ub) os << "  ub " << *row.ub;
    if (row.lb_mix) os << "  lb_mix " << *row.lb_mix;
    if (row.lb_pruned) os << "  lb_pruned " << *row.lb_pruned;
    if (row.lb_cycle) os << "  lb_cycle " << *row.lb_cycle;
    os << "\n";
  }
  os << "\nbrute-force upper (finite-k): " << report.brute_upper << "\n";
  if (report.best_cycle) {
    os << "best cycle (arcs";
    for (std::size_t e : report.best_cycle->cycle.arcs) os << " " << e;
    os << "; labels";
    for (std::size_t l : sys.automaton().path_labels(report.best_cycle->cycle))
      os << " " << l + 1;
    os << "): growth " << report.best_cycle->growth << "\n";
  }
  os << "final bracket: [" << report.best_lower << ", " << report.best_upper << "]\n";
  for (const std::string& n : report.notes) os << "note: " << n << "\n";
  for (const std::string& w : report.warnings) os << "warning: " << w << "\n";
}

}  // namespace cjsr
