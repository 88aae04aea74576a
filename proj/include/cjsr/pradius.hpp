#pragma once

#include <string>
#include <vector>

#include "cjsr/system.hpp"

namespace cjsr {

enum class PRadiusMethod { lift_spectral, brute_force_k };

struct PRadiusResult {
  std::size_t p = 2;
  double value = 0.0;
  PRadiusMethod method = PRadiusMethod::lift_spectral;
  std::size_t k = 0;        // brute force only
  double max_form = 0.0;    // brute force only: the max-over-nodes variant
};

/// Even-p constrained p-radius through the invariant-cone lift:
/// rho(sum over arcs of (e_v e_u^T) (x) A_sigma^[p])^{1/p} / rho(A(G))^{1/p}.
PRadiusResult p_radius_even(const ConstrainedSystem& sys, std::size_t p);

/// Finite-k truncation  [ |E_k|^{-1} sum_{s in E_k} ||A_s||^p ]^{1/(pk)};
/// max_form carries the max-over-start-nodes variant.
PRadiusResult p_radius_bruteforce(const ConstrainedSystem& sys, std::size_t p, std::size_t k);

struct InequalityLink {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool ok = false;
};

struct InequalityChainReport {
  std::vector<InequalityLink> links;
  bool all_ok = false;
  double jsr_sos_upper = 0.0;
  double mix_lower = 0.0;
  double brute_lower = 0.0;
  double brute_upper = 0.0;
};

/// Numeric sweep of the p-radius inequality chain, the adjacency-radius
/// accuracy bound and the mixed bracket, all against brute-force references.
InequalityChainReport inequality_chain_check(const ConstrainedSystem& sys, std::size_t d,
                                             std::size_t brute_k = 10, double slack_tol = 1e-4);

}  // namespace cjsr
