#pragma once

#include <string>
#include <vector>

#include "cjsr/automaton.hpp"
#include "cjsr/matrix.hpp"

namespace cjsr {

/// Switched linear system x_k = A_{sigma_k} x_{k-1} with the switching
/// sequence constrained to label sequences of admissible paths.
class ConstrainedSystem {
 public:
  ConstrainedSystem(std::vector<Matrix> matrices, Automaton automaton);

  std::size_t dimension() const { return n_; }
  std::size_t mode_count() const { return matrices_.size(); }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  const Matrix& matrix(std::size_t label) const { return matrices_[label]; }
  const Automaton& automaton() const { return automaton_; }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  /// Product along a path, last label applied leftmost: A_s = A_{sk} ... A_{s1}.
  Matrix path_product(const Path& p) const;

  /// rho(A_c)^{1/k} for a closed path.
  double cycle_growth(const Path& cycle) const;

 private:
  std::vector<Matrix> matrices_;
  Automaton automaton_;
  std::size_t n_ = 0;
  std::string name_;
};

/// Arbitrary switching over m matrices: one node, m self-loops.
ConstrainedSystem unconstrained_system(std::vector<Matrix> matrices);

/// Block embedding (e_v e_u^T) (x) A_sigma per arc; admissible path products
/// keep their norm, inadmissible words vanish.
std::vector<Matrix> kozyakin_lift(const ConstrainedSystem& sys);

/// The running example bundled with the project documents.
ConstrainedSystem running_example();
/// Three cyclic coordinate shifts, arbitrary switching.
ConstrainedSystem simple1_example();
/// Two coordinate swaps, arbitrary switching.
ConstrainedSystem simple0_example();

}  // namespace cjsr
