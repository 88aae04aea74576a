#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cjsr/system.hpp"

namespace cjsr {

/// Per-mode split A_sigma = X_sigma Y_sigma^T with n x r factors.
struct LowRankFactorization {
  std::size_t rank = 0;
  std::vector<Matrix> x;
  std::vector<Matrix> y;
};

/// Balanced truncated-SVD split; rejects any matrix whose (r+1)-th singular
/// value exceeds tol relative to the largest.
LowRankFactorization factorize(const ConstrainedSystem& sys, std::size_t r, double tol = 1e-9);

/// Reduced constrained system: nodes are the original arcs, an arc chains two
/// original arcs through their shared middle node, and the matrix applied on
/// the transition (sigma1 then sigma2) is Y_{sigma2}^T X_{sigma1}.
struct ReducedSystem {
  ConstrainedSystem system;
  // reduced label -> (later label sigma2, earlier label sigma1)
  std::vector<std::pair<std::size_t, std::size_t>> label_pairs;
  std::vector<std::size_t> node_to_original_arc;
  bool restricted_to_component = false;
};

ReducedSystem reduce(const ConstrainedSystem& sys, const LowRankFactorization& f);

/// Gauge change (X S, Y S^{-T}); the reduced bound must not move.
LowRankFactorization apply_gauge(const LowRankFactorization& f, const Matrix& s);

struct EquivalenceReport {
  double jsr_original = 0.0;
  double jsr_reduced = 0.0;
  std::optional<double> jsr_reduced_gauged;
  bool agree = false;
  bool gauge_invariant = true;
};

/// Same-degree SOS runs on both systems, optionally repeated after a gauge
/// change by an invertible S.
EquivalenceReport reduction_equivalence_check(const ConstrainedSystem& sys,
                                              const LowRankFactorization& f, std::size_t d,
                                              double tol = 1e-6,
                                              const Matrix* gauge = nullptr);

}  // namespace cjsr
