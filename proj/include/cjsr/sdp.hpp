#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cjsr/matrix.hpp"

namespace cjsr {

/// min <C, X>  s.t.  <A_i, X> = b_i,  X block-diagonal PSD.
class SdpProblem {
 public:
  struct Term {
    std::size_t block;
    Matrix coeff;  // symmetric, block-sized
  };
  struct Constraint {
    std::vector<Term> terms;
    double rhs = 0.0;
  };

  std::size_t add_block(std::string name, std::size_t size);
  void set_objective(std::size_t block, Matrix c);
  std::size_t add_constraint(Constraint c);

  std::size_t block_count() const { return block_sizes_.size(); }
  std::size_t block_size(std::size_t b) const { return block_sizes_[b]; }
  const std::string& block_name(std::size_t b) const { return block_names_[b]; }
  const Matrix& objective(std::size_t b) const { return objective_[b]; }
  std::size_t constraint_count() const { return constraints_.size(); }
  const Constraint& constraint(std::size_t i) const { return constraints_[i]; }
  std::size_t total_dimension() const;

 private:
  std::vector<std::string> block_names_;
  std::vector<std::size_t> block_sizes_;
  std::vector<Matrix> objective_;
  std::vector<Constraint> constraints_;
};

enum class SdpStatus { optimal, infeasible, unbounded, max_iterations };

struct SdpResiduals {
  double primal = 0.0;  // ||A(X) - b||_inf / (1 + ||b||_inf)
  double dual = 0.0;    // ||A*(y) + Z - C||_max / (1 + ||C||_max)
  double gap = 0.0;     // |<C,X> - b^T y| / (1 + |<C,X>| + |b^T y|)
};

struct SdpSolution {
  SdpStatus status = SdpStatus::max_iterations;
  std::vector<Matrix> primal_blocks;      // X
  std::vector<double> dual_multipliers;   // y, one per constraint (0 for dropped rows)
  std::vector<Matrix> dual_slack_blocks;  // Z = C - A*(y)
  SdpResiduals residuals;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  std::size_t iterations = 0;
  // Farkas-type certificate when status == infeasible
  std::vector<double> farkas_multipliers;
  double farkas_violation = 0.0;
  std::string diagnostics;
};

struct SdpOptions {
  double tol = 1e-8;
  std::size_t max_iterations = 200;
  double step_fraction = 0.98;
  double presolve_threshold = 1e-11;
};

/// Homogeneous self-dual interior point with HKM scaling and Mehrotra
/// predictor-corrector.  Deterministic: identical inputs give identical
/// iterates.
SdpSolution solve(const SdpProblem& p, const SdpOptions& opts = {});
inline SdpSolution solve(const SdpProblem& p, double tol) {
  SdpOptions o;
  o.tol = tol;
  return solve(p, o);
}

enum class FeasibilityVerdict { strictly_feasible, infeasible, marginal };

struct FeasibilityResult {
  FeasibilityVerdict verdict = FeasibilityVerdict::marginal;
  double shift = 0.0;  // optimal min-eigenvalue shift t*; > 0 iff strictly feasible
  SdpStatus status = SdpStatus::max_iterations;
  std::vector<Matrix> primal_blocks;      // X + t* I, per original block
  std::vector<double> row_multipliers;    // y per original constraint
  std::vector<Matrix> dual_slack_blocks;  // per original block
  SdpResiduals residuals;
  std::size_t iterations = 0;
};

/// Phase-I query: maximize the common minimum block eigenvalue over the
/// affine constraint set.  Strictly feasible iff the optimum exceeds margin.
FeasibilityResult feasibility(const SdpProblem& p, double margin,
                              const SdpOptions& opts = {});

/// Debug dump in sparse SDPA form (desk-scale cross-validation).
void write_sdpa(const SdpProblem& p, std::ostream& os);

}  // namespace cjsr
