#include "cjsr/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cjsr {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error("Matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw Error("Matrix multiply: dimension mismatch");
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) out(i, j) += a * other(k, j);
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  Matrix out = *this;
  out += other;
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  Matrix out = *this;
  out -= other;
  return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error("Matrix add: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw Error("Matrix sub: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

std::vector<double> Matrix::apply(const std::vector<double>& x) const {
  if (x.size() != cols_) throw Error("Matrix apply: dimension mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Matrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double x : data_) best = std::max(best, std::abs(x));
  return best;
}

double Matrix::trace() const {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
  return s;
}

bool Matrix::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

bool Matrix::is_symmetric(double tol) const {
  if (!square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

void Matrix::symmetrize() {
  if (!square()) throw Error("symmetrize: non-square");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j) {
      const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = v;
      (*this)(j, i) = v;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

double inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("inner: shape mismatch");
  return dot(a.data(), b.data());
}

double operator_norm_2(const Matrix& m) {
  if (!m.all_finite()) throw Error("operator_norm_2: non-finite entries");
  if (m.empty()) return 0.0;
  Matrix g = m.transpose() * m;
  g.symmetrize();
  const auto eig = symmetric_eigen(g);
  const double top = eig.values.empty() ? 0.0 : eig.values.back();
  return std::sqrt(std::max(0.0, top));
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
  if (!m.square()) throw Error("symmetric_eigen: non-square");
  const std::size_t n = m.rows();
  Matrix a = m;
  a.symmetrize();
  Matrix v = Matrix::identity(n);
  const double scale = std::max(1.0, a.max_abs());
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale * n) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-18 * scale) continue;
        const double app = a(p, p), aqq = a(q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

double symmetric_min_eigenvalue(const Matrix& m) {
  const auto eig = symmetric_eigen(m);
  return eig.values.empty() ? 0.0 : eig.values.front();
}

CholeskyResult cholesky_psd(const Matrix& m, double tol) {
  if (!m.square()) throw Error("cholesky_psd: non-square");
  if (!m.is_symmetric(std::max(tol, 1e-12) * std::max(1.0, m.max_abs()) * 10.0 + 1e-300))
    throw Error("cholesky_psd: asymmetric input");
  const std::size_t n = m.rows();
  const double scale = std::max(m.max_abs(), 1e-300);
  const double floor = tol * scale + 1e-300;
  CholeskyResult res;
  res.r = Matrix(n, n);
  Matrix& r = res.r;
  for (std::size_t k = 0; k < n; ++k) {
    double d = m(k, k);
    for (std::size_t i = 0; i < k; ++i) d -= r(i, k) * r(i, k);
    if (d < -floor) {
      res.psd = false;
      res.failing_pivot = k;
      res.pivot_value = d;
      return res;
    }
    if (d <= floor) {
      // zero pivot within tolerance: treat the whole row as zero
      for (std::size_t j = k; j < n; ++j) r(k, j) = 0.0;
      continue;
    }
    const double rk = std::sqrt(d);
    r(k, k) = rk;
    for (std::size_t j = k + 1; j < n; ++j) {
      double s = m(k, j);
      for (std::size_t i = 0; i < k; ++i) s -= r(i, k) * r(i, j);
      r(k, j) = s / rk;
    }
  }
  res.psd = true;
  return res;
}

LuFactorization::LuFactorization(Matrix m) : lu_(std::move(m)) {
  if (!lu_.square()) throw Error("LuFactorization: non-square");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      lu_(i, k) /= lu_(k, k);
      const double f = lu_(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

std::vector<double> LuFactorization::solve(std::vector<double> rhs) const {
  if (singular_) throw Error("LuFactorization::solve: singular matrix");
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw Error("LuFactorization::solve: size mismatch");
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) b[i] -= lu_(i, j) * b[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) b[i] -= lu_(i, j) * b[j];
    b[i] /= lu_(i, i);
  }
  return b;
}

std::optional<std::vector<double>> dominant_real_eigenvector(const Matrix& m,
                                                             std::uint64_t seed) {
  if (!m.square()) throw Error("dominant_real_eigenvector: non-square");
  const std::size_t n = m.rows();
  const auto eigs = eigenvalues(m);
  double rho = 0.0;
  for (const auto& [re, im] : eigs) rho = std::max(rho, std::hypot(re, im));
  if (rho == 0.0) return std::nullopt;
  // dominant eigenvalue must be real (within rounding) for an eigenvector on the sphere
  double lambda = 0.0;
  bool found_real = false;
  for (const auto& [re, im] : eigs) {
    if (std::hypot(re, im) >= rho * (1.0 - 1e-9) && std::abs(im) <= 1e-8 * rho) {
      lambda = re;
      found_real = true;
      break;
    }
  }
  if (!found_real) return std::nullopt;

  // inverse iteration with a slightly off-shifted LU
  Matrix shifted = m;
  const double shift = lambda + (std::abs(lambda) + 1.0) * 1e-10;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= shift;
  LuFactorization lu(std::move(shifted));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<double> x(n);
  for (double& xi : x) xi = unit(rng);
  double nx = norm2(x);
  for (double& xi : x) xi /= nx;
  for (int it = 0; it < 50; ++it) {
    std::vector<double> y;
    if (lu.singular()) break;
    y = lu.solve(x);
    const double ny = norm2(y);
    if (!std::isfinite(ny) || ny == 0.0) break;
    for (double& yi : y) yi /= ny;
    const auto mx = m.apply(y);
    const double res = [&] {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = mx[i] - lambda * y[i];
        s += d * d;
      }
      return std::sqrt(s);
    }();
    x = std::move(y);
    if (res <= 1e-13 * (std::abs(lambda) + 1.0)) break;
  }
  // fix sign: first nonzero coordinate positive
  for (double xi : x) {
    if (std::abs(xi) > 1e-12) {
      if (xi < 0.0)
        for (double& v : x) v = -v;
      break;
    }
  }
  return x;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double f = a(i, j);
      if (f == 0.0) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          out(i * b.rows() + p, j * b.cols() + q) = f * b(p, q);
    }
  return out;
}

}  // namespace cjsr
