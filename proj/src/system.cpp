#include "cjsr/system.hpp"

#include <cmath>
#include <vector>

namespace cjsr {

ConstrainedSystem::ConstrainedSystem(std::vector<Matrix> matrices, Automaton automaton)
    : matrices_(std::move(matrices)), automaton_(std::move(automaton)) {
  if (matrices_.empty()) throw Error("ConstrainedSystem: no matrices");
  n_ = matrices_.front().rows();
  std::vector<bool> used(matrices_.size(), false);
  for (const Matrix& m : matrices_) {
    if (!m.square() || m.rows() != n_)
      throw Error("ConstrainedSystem: matrices must be square and share dimension");
    if (!m.all_finite()) throw Error("ConstrainedSystem: non-finite matrix entries");
  }
  for (const Arc& a : automaton_.arcs()) {
    if (a.label >= matrices_.size())
      throw Error("ConstrainedSystem: arc label out of range");
    used[a.label] = true;
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i])
      throw Error("ConstrainedSystem: label " + std::to_string(i + 1) +
                  " appears on no arc");
}

Matrix ConstrainedSystem::path_product(const Path& p) const {
  if (!automaton_.path_is_valid(p)) throw Error("path_product: invalid path");
  Matrix prod = Matrix::identity(n_);
  for (std::size_t e : p.arcs) prod = matrix(automaton_.arc(e).label) * prod;
  return prod;
}

double ConstrainedSystem::cycle_growth(const Path& cycle) const {
  if (!automaton_.path_is_cycle(cycle)) throw Error("cycle_growth: path is not a cycle");
  const double rho = spectral_radius(path_product(cycle));
  return std::pow(rho, 1.0 / static_cast<double>(cycle.length()));
}

ConstrainedSystem unconstrained_system(std::vector<Matrix> matrices) {
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < matrices.size(); ++i) arcs.push_back(Arc{0, 0, i});
  return ConstrainedSystem(std::move(matrices), Automaton(1, std::move(arcs)));
}

std::vector<Matrix> kozyakin_lift(const ConstrainedSystem& sys) {
  const std::size_t nv = sys.automaton().node_count();
  std::vector<Matrix> lifted;
  lifted.reserve(sys.automaton().arc_count());
  for (const Arc& a : sys.automaton().arcs()) {
    Matrix placement(nv, nv);
    placement(a.target, a.source) = 1.0;
    lifted.push_back(kron(placement, sys.matrix(a.label)));
  }
  return lifted;
}

ConstrainedSystem running_example() {
  const double k1 = -0.49, k2 = 0.27;
  const Matrix a{{0.94, 0.56}, {0.14, 0.46}};
  Matrix a1 = a, a2 = a, a3 = a;
  a1(1, 0) += k1;
  a1(1, 1) += k2;
  a2(1, 1) += k2;
  a3(1, 0) += k1;
  std::vector<Arc> arcs{
      {0, 2, 0},  // 1 -> 3 label 1
      {0, 1, 2},  // 1 -> 2 label 3
      {1, 0, 1},  // 2 -> 1 label 2
      {1, 2, 0},  // 2 -> 3 label 1
      {2, 0, 1},  // 3 -> 1 label 2
      {2, 1, 2},  // 3 -> 2 label 3
      {2, 3, 3},  // 3 -> 4 label 4
      {2, 2, 0},  // 3 -> 3 label 1
      {3, 2, 0},  // 4 -> 3 label 1
  };
  ConstrainedSystem sys({a1, a2, a3, a}, Automaton(4, std::move(arcs)));
  sys.set_name("running-example");
  return sys;
}

ConstrainedSystem simple1_example() {
  Matrix a1(3, 3), a2(3, 3), a3(3, 3);
  a1(0, 1) = 1.0;  // e1 e2^T
  a2(1, 2) = 1.0;  // e2 e3^T
  a3(2, 0) = 1.0;  // e3 e1^T
  auto sys = unconstrained_system({a1, a2, a3});
  sys.set_name("simple1");
  return sys;
}

ConstrainedSystem simple0_example() {
  Matrix a1(2, 2), a2(2, 2);
  a1(0, 1) = 1.0;  // e1 e2^T
  a2(1, 0) = 1.0;  // e2 e1^T
  auto sys = unconstrained_system({a1, a2});
  sys.set_name("simple0");
  return sys;
}

}  // namespace cjsr
