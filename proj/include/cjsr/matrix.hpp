#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cjsr {

/// Error raised on contract violations (bad dimensions, non-finite data, ...).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Dense real matrix, row-major.  Sized for small dense kernels
/// (n up to a few hundred after lifting).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);
  friend Matrix operator*(double s, Matrix m) {
    m *= s;
    return m;
  }

  std::vector<double> apply(const std::vector<double>& x) const;

  double frobenius_norm() const;
  double inf_norm() const;  // max absolute row sum
  double max_abs() const;
  double trace() const;
  bool all_finite() const;
  bool is_symmetric(double tol) const;
  void symmetrize();

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
/// trace(A^T B), the Frobenius inner product.
double inner(const Matrix& a, const Matrix& b);

struct SpectrumResult {
  double spectral_radius = 0.0;
  std::vector<double> eigenvalue_moduli;  // descending
  bool converged = false;
};

/// Eigenvalue moduli of a general square matrix:
/// balance -> Hessenberg -> implicitly shifted double QR.
SpectrumResult eigenvalue_spectrum(const Matrix& m);
double spectral_radius(const Matrix& m);

/// All eigenvalues as (real, imag) pairs, same QR path.
std::vector<std::pair<double, double>> eigenvalues(const Matrix& m);

/// sqrt(rho(M^T M)); the symmetric Jacobi path is used on M^T M.
double operator_norm_2(const Matrix& m);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns, orthonormal
};
/// Cyclic Jacobi for symmetric matrices.
SymmetricEigen symmetric_eigen(const Matrix& m);
double symmetric_min_eigenvalue(const Matrix& m);

struct SvdResult {
  Matrix u;                            // rows x k, orthonormal columns
  std::vector<double> singular_values;  // descending, length k = min(rows, cols)
  Matrix v;                            // cols x k, orthonormal columns
};
/// One-sided Jacobi SVD, M = U diag(s) V^T.
SvdResult svd(const Matrix& m);

struct CholeskyResult {
  bool psd = false;
  Matrix r;  // upper triangular, R^T R = M + E with ||E|| <= tol*||M|| when psd
  std::size_t failing_pivot = 0;
  double pivot_value = 0.0;
};
/// Cholesky of a symmetric matrix, tolerant of semidefiniteness.
/// Not-PSD verdict names the first failing pivot.
CholeskyResult cholesky_psd(const Matrix& m, double tol);

/// LU with partial pivoting; throws on exactly singular input.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix m);
  bool singular() const { return singular_; }
  std::vector<double> solve(std::vector<double> rhs) const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  bool singular_ = false;
};

/// Unit eigenvector for the dominant eigenvalue when that eigenvalue is real;
/// nullopt when the dominant eigenvalue is a complex pair.
std::optional<std::vector<double>> dominant_real_eigenvector(const Matrix& m,
                                                             std::uint64_t seed = 1u);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace cjsr
