#pragma once

#include <cstddef>
#include <vector>

#include "cjsr/matrix.hpp"

namespace cjsr {

/// Scaled monomial basis of homogeneous degree-d polynomials in n variables,
/// graded-lex order (x1 > x2 > ...).  The scale sqrt(d!/alpha!) makes
/// ||x^[d]||_2 = ||x||_2^d hold exactly.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t nvars, std::size_t degree);

  std::size_t nvars() const { return nvars_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return exponents_.size(); }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }
  const std::vector<int>& exponent(std::size_t i) const { return exponents_[i]; }
  double scale(std::size_t i) const { return scales_[i]; }
  std::size_t index_of(const std::vector<int>& e) const;

  /// Shared immutable instance (basis tables are reused heavily).
  static const MonomialBasis& get(std::size_t nvars, std::size_t degree);

 private:
  std::size_t nvars_ = 0;
  std::size_t degree_ = 0;
  std::vector<std::vector<int>> exponents_;
  std::vector<double> scales_;
};

std::size_t binomial(std::size_t n, std::size_t k);

/// Coordinates of a homogeneous polynomial in the scaled basis.
struct HomogeneousPoly {
  std::size_t nvars = 0;
  std::size_t degree = 0;
  std::vector<double> coeffs;

  const MonomialBasis& basis() const { return MonomialBasis::get(nvars, degree); }
};

/// Symmetric Gram representation of a degree-2d polynomial over the degree-d basis.
struct GramForm {
  std::size_t nvars = 0;
  std::size_t degree = 0;  // Gram basis degree d; induced polynomial has degree 2d
  Matrix gram;
};

/// x^[d] with the sqrt-multinomial scaling.
std::vector<double> lift_vector(const std::vector<double>& x, std::size_t d);

/// The unique matrix with (Ax)^[d] = A^[d] x^[d].
Matrix lift_matrix(const Matrix& a, std::size_t d);

double evaluate_poly(const HomogeneousPoly& p, const std::vector<double>& x);

/// Coefficients of p(Ax): the transpose action of lift_matrix(A, 2d).
HomogeneousPoly compose_poly(const HomogeneousPoly& p, const Matrix& a);

HomogeneousPoly gram_to_coeffs(const GramForm& g);

/// sum_i x_i^{2d} in the scaled basis.
HomogeneousPoly power_sum_poly(std::size_t nvars, std::size_t degree2d);
/// ||x||_2^{2d} in the scaled basis (the identity Gram's polynomial).
HomogeneousPoly sphere_power_poly(std::size_t nvars, std::size_t degree2d);

/// The Gram fibers: for each degree-2d monomial, the (i, j) Gram positions
/// feeding its coefficient.  fiber_matrix(eta) is the symmetric matrix G with
/// <G, Q> = coefficient eta of the polynomial of Q.
class FiberMap {
 public:
  FiberMap(std::size_t nvars, std::size_t gram_degree);

  struct Entry {
    std::size_t i, j;  // i <= j
    double weight;     // includes the factor 2 for off-diagonal pairs
  };
  const std::vector<Entry>& fiber(std::size_t eta_index) const { return fibers_[eta_index]; }
  std::size_t poly_size() const { return fibers_.size(); }
  std::size_t gram_size() const { return gram_size_; }
  Matrix fiber_matrix(std::size_t eta_index) const;

  static const FiberMap& get(std::size_t nvars, std::size_t gram_degree);

 private:
  std::size_t nvars_ = 0;
  std::size_t gram_degree_ = 0;
  std::size_t gram_size_ = 0;
  std::vector<std::vector<Entry>> fibers_;
};

}  // namespace cjsr
