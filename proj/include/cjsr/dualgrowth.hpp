#pragma once

#include <optional>
#include <vector>

#include "cjsr/sos.hpp"
#include "cjsr/system.hpp"

namespace cjsr {

/// One argmax block of the high-growth generator: the chosen incoming path
/// (recorded backwards in time) and the log pseudo-expectation reached.
struct GrowthStep {
  std::size_t head_before = 0;         // node whose incoming length-l paths were scanned
  std::vector<std::size_t> arcs;       // arcs appended to the trace, reverse-chronological
  double log_theta = 0.0;
};

/// Reversed-admissible trace produced by the high-growth generator.
struct GrowthTrace {
  std::size_t d = 1;
  std::size_t l = 1;
  double gamma = 0.0;
  std::size_t initial_arc = 0;
  double log_theta0 = 0.0;
  std::vector<GrowthStep> steps;
  std::vector<std::size_t> picks;  // flattened arc choices, reverse-chronological
  bool stalled = false;            // every candidate pseudo-expectation hit zero
  std::optional<CycleCertificate> cycle;
};

/// Produces a reversed-admissible sequence whose pseudo-expectations stay
/// large; p0 must lie in the interior of the SOS cone.
GrowthTrace run_prodl(const ConstrainedSystem& sys, const PseudoMeasure& pm,
                      const HomogeneousPoly& p0, std::size_t l, std::size_t blocks);

struct GrowthGuarantee {
  bool per_step_ok = false;
  double worst_step_slack = 0.0;  // min over steps of the log-space slack
  bool asymptotic_ok = true;      // vacuous when no cycle was detected
  double asymptotic_bound = 0.0;  // gamma / ||(A(G)^T)^l||_inf^{1/(2dl)}
};
/// Log-space check of the per-step growth inequality and, once a cycle is
/// detected, of the asymptotic bound.
GrowthGuarantee check_growth_guarantee(const GrowthTrace& trace, const ConstrainedSystem& sys);

/// Looks for a repeating arc-choice block in the trace tail and certifies its
/// growth on the forward cycle.
std::optional<CycleCertificate> detect_period(const ConstrainedSystem& sys, GrowthTrace& trace,
                                              std::size_t burn_in, std::size_t max_period);

/// Occupation measures of the periodic trajectory riding a cycle; requires a
/// real dominant eigenvalue of the cycle product.
std::optional<PseudoMeasure> cycle_to_measures(const ConstrainedSystem& sys, const Path& cycle,
                                               std::size_t d);

struct Atom {
  double weight = 0.0;
  std::vector<double> direction;  // unit vector, first nonzero coordinate positive
};

/// Rank-1 reading of a moment matrix: weight from the trace, direction from
/// the top singular vector (de-lifted when d > 1).
std::optional<Atom> extract_atoms(const Matrix& moment_matrix, std::size_t nvars,
                                  std::size_t d, double tol = 1e-3);

/// Scalar switched system over (node, atom) composite states.
struct ScalarSystem {
  struct Node {
    std::size_t original_node = 0;
    std::size_t atom = 0;
  };
  struct SArc {
    std::size_t source = 0;
    std::size_t target = 0;
    double weight = 0.0;  // ||A_sigma x_B||_2, strictly positive
    std::size_t original_arc = 0;
  };
  std::vector<Node> nodes;
  std::vector<SArc> arcs;
  std::vector<std::size_t> support_arcs;  // original arcs that carried an atom
  std::vector<Atom> atoms;
  bool empty() const { return arcs.empty(); }
};

/// Composite pushforward graph of Prop.-style singleton sets; arcs appear only
/// where the pushed atom lands on another atom within angular_tol (sign-blind).
ScalarSystem bsc_reduce(const ConstrainedSystem& sys,
                        const std::vector<std::optional<Atom>>& arc_atoms,
                        double angular_tol = 1e-3);

/// Max cycle mean on the composite graph projected back to the original
/// automaton; the certificate growth is always recomputed as rho(A_c)^{1/k}.
/// Falls back to scanning cycles of the atom-support subgraph when the
/// composite graph carries no cycle.
std::optional<CycleCertificate> scalar_lower_bound(const ScalarSystem& ss,
                                                   const ConstrainedSystem& sys);

struct BruteForceBounds {
  std::optional<CycleCertificate> lower;
  double upper = 0.0;  // max over length-kmax paths of ||A_s||^{1/kmax}
  std::size_t kmax = 0;
};
/// Exhaustive closed-walk lower bound and finite-k norm upper bound; the
/// desk-scale oracle for everything else.
BruteForceBounds brute_force_bounds(const ConstrainedSystem& sys, std::size_t kmax);

}  // namespace cjsr
