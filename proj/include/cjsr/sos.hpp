#pragma once

#include <optional>
#include <vector>

#include "cjsr/polylift.hpp"
#include "cjsr/sdp.hpp"
#include "cjsr/system.hpp"

namespace cjsr {

/// Where each node/arc of the Lyapunov program landed in the SDP.
struct SosLayout {
  std::size_t d = 1;  // Gram degree; polynomials have degree 2d
  std::size_t nvars = 0;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::vector<std::size_t> node_block;              // per node
  std::vector<std::size_t> arc_block;               // per arc
  std::vector<std::vector<std::size_t>> arc_rows;   // per arc, one row per degree-2d monomial
  std::size_t normalization_row = 0;
};

struct SosProgram {
  SdpProblem problem;
  SosLayout layout;
};

/// Feasibility program for a fixed gamma: per-node Grams P_v = P~_v + eps*I,
/// per-arc slack Grams Q_e, fiber equalities
///   gamma^{2d} p_u - p_v o A_sigma = q_e   coefficient-wise,
/// trace normalization sum_v tr(P_v) = |V|.
SosProgram build_primal(const ConstrainedSystem& sys, std::size_t d, double gamma,
                        double epsilon);

/// Per-node Lyapunov Grams with the per-arc slack certificates.
struct GramCertificate {
  std::size_t d = 1;
  double gamma = 0.0;
  double epsilon = 0.0;
  std::vector<Matrix> node_grams;  // P_v, PSD with P_v - eps*I PSD
  std::vector<Matrix> arc_slacks;  // Q_e, PSD
};

struct CertificateCheck {
  bool ok = false;
  double worst_gram_eigenvalue = 0.0;  // min over P_v - eps*I and Q_e spectra
  double worst_identity_residual = 0.0;
};
/// Replays the certificate with plain lift/Gram arithmetic, no solver involved.
CertificateCheck verify_certificate(const ConstrainedSystem& sys, const GramCertificate& cert,
                                    double tol = 1e-7);

/// Truncated moment data per arc: the dual variables of the moment program.
struct PseudoMeasure {
  std::size_t d = 1;
  std::size_t nvars = 0;
  double gamma = 0.0;
  std::vector<std::vector<double>> moment_vectors;  // per arc, scaled degree-2d basis
  std::vector<Matrix> moment_matrices;              // per arc, N_d x N_d, PSD up to noise
  bool low_quality = false;

  double mass(std::size_t arc) const;   // pE_e[sum_i x_i^{2d}]
  double total_mass() const;
};

double pseudo_expectation(const PseudoMeasure& pm, std::size_t arc, const HomogeneousPoly& q);

/// Reads the moment vectors off the SDP dual multipliers of the arc fiber rows
/// and rescales to unit total mass.
PseudoMeasure extract_dual(const ConstrainedSystem& sys, const SosLayout& layout,
                           const std::vector<double>& row_multipliers);

struct DualCheck {
  bool feasible = false;
  double worst_node_min_eigenvalue = 0.0;  // min over nodes of lambda_min(S_v)
  double worst_node_max_abs = 0.0;         // max over nodes of max |lambda(S_v)|
  double worst_moment_min_eigenvalue = 0.0;
};
/// Checks the moment-program constraints: for every node v,
///   sum_in A^[d] M_e A^[d]^T - gamma^{2d} sum_out M_e  is PSD.
DualCheck verify_dual(const ConstrainedSystem& sys, const PseudoMeasure& pm, double gamma,
                      double tol = 1e-8);

struct JsrSosResult {
  double upper = 0.0;          // smallest strictly feasible gamma found
  double lower_probe = 0.0;    // largest gamma found not strictly feasible
  std::optional<GramCertificate> certificate;
  std::optional<PseudoMeasure> dual_near_optimal;
  std::vector<PseudoMeasure> duals;  // one per infeasible-or-marginal probe
  bool solver_trouble = false;
  std::size_t probes = 0;
};

/// Bisection on gamma; every infeasible probe leaves its dual behind.
JsrSosResult jsr_sos(const ConstrainedSystem& sys, std::size_t d, double tol,
                     double lower_hint = 0.0);

struct PrunedAutomaton {
  std::vector<std::size_t> kept_arcs;  // original arc indices
  double adjacency_rho = 0.0;          // rho of the pruned graph's adjacency
  std::optional<Automaton> automaton;  // dominant strongly connected component
  std::vector<std::size_t> component_nodes;  // original node ids of that component
  bool fallback_full = false;
};

/// Drops arcs whose moment trace is below threshold * (max trace) in every
/// supplied dual; used only for the pruned accuracy bound, never to shrink
/// the analyzed system.  The default threshold sits well above the
/// interior-point noise floor (~1e-5 relative) and well below any genuinely
/// used arc.
PrunedAutomaton prune_zero_dual_arcs(const ConstrainedSystem& sys,
                                     const std::vector<PseudoMeasure>& duals,
                                     double threshold = 1e-4);

}  // namespace cjsr
