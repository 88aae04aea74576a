#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "cjsr/automaton.hpp"
#include "cjsr/matrix.hpp"
#include "cjsr/polylift.hpp"
#include "cjsr/system.hpp"

namespace testsupport {

using cjsr::Arc;
using cjsr::Automaton;
using cjsr::ConstrainedSystem;
using cjsr::Matrix;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double gauss() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(gen_);
  }

 private:
  std::mt19937_64 gen_;
};

inline Matrix random_matrix(Rng& rng, std::size_t n, double scale = 1.0) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = scale * rng.gauss();
  return m;
}

inline Matrix random_psd(Rng& rng, std::size_t n) {
  Matrix r = random_matrix(rng, n);
  Matrix q = r.transpose() * r;
  q.symmetrize();
  return q;
}

inline Matrix random_orthogonal(Rng& rng, std::size_t n) {
  // Gram-Schmidt on random Gaussian columns
  Matrix a = random_matrix(rng, n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      double proj = 0.0;
      for (std::size_t i = 0; i < n; ++i) proj += a(i, c) * a(i, prev);
      for (std::size_t i = 0; i < n; ++i) a(i, c) -= proj * a(i, prev);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += a(i, c) * a(i, c);
    norm = std::sqrt(norm);
    if (norm < 1e-8) return random_orthogonal(rng, n);
    for (std::size_t i = 0; i < n; ++i) a(i, c) /= norm;
  }
  return a;
}

inline std::vector<double> random_unit(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  double norm = 0.0;
  for (double& x : v) {
    x = rng.gauss();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

/// Strongly connected random automaton: a spanning cycle plus extra arcs,
/// every label in [0, m) guaranteed to appear.
inline Automaton random_automaton(Rng& rng, std::size_t nodes, std::size_t m,
                                  std::size_t extra_arcs) {
  while (true) {
    std::vector<Arc> arcs;
    for (std::size_t v = 0; v < nodes; ++v)
      arcs.push_back(Arc{v, (v + 1) % nodes, rng.index(m)});
    for (std::size_t i = 0; i < extra_arcs; ++i)
      arcs.push_back(Arc{rng.index(nodes), rng.index(nodes), rng.index(m)});
    std::vector<bool> used(m, false);
    for (const Arc& a : arcs) used[a.label] = true;
    for (std::size_t l = 0; l < m; ++l) {
      if (!used[l]) arcs.push_back(Arc{rng.index(nodes), rng.index(nodes), l});
    }
    // drop duplicate triples
    std::vector<Arc> dedup;
    for (const Arc& a : arcs) {
      bool seen = false;
      for (const Arc& b : dedup)
        if (a == b) {
          seen = true;
          break;
        }
      if (!seen) dedup.push_back(a);
    }
    bool all_used = true;
    std::vector<bool> used2(m, false);
    for (const Arc& a : dedup) used2[a.label] = true;
    for (bool u : used2) all_used = all_used && u;
    if (all_used && cjsr::check_strong_connectivity(nodes, dedup))
      return Automaton(nodes, dedup);
  }
}

inline ConstrainedSystem random_system(Rng& rng, std::size_t n, std::size_t m,
                                       std::size_t nodes, std::size_t extra_arcs,
                                       double scale = 0.8) {
  Automaton g = random_automaton(rng, nodes, m, extra_arcs);
  std::vector<Matrix> mats;
  for (std::size_t s = 0; s < m; ++s) mats.push_back(random_matrix(rng, n, scale));
  return ConstrainedSystem(std::move(mats), std::move(g));
}

/// Direct monomial evaluation, independent of the scaled-basis machinery.
inline double eval_monomials(const std::vector<std::vector<int>>& exponents,
                             const std::vector<double>& plain_coeffs,
                             const std::vector<double>& x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    double term = plain_coeffs[i];
    for (std::size_t j = 0; j < x.size(); ++j)
      for (int r = 0; r < exponents[i][j]; ++r) term *= x[j];
    sum += term;
  }
  return sum;
}

}  // namespace testsupport
