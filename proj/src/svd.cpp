#include <algorithm>
#include <cmath>

#include "cjsr/matrix.hpp"

namespace cjsr {
namespace {

// One-sided Jacobi on the columns of a tall matrix (rows >= cols).
SvdResult svd_tall(const Matrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix w = m;
  Matrix v = Matrix::identity(cols);
  const double eps = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += w(i, p) * w(i, p);
          beta += w(i, q) * w(i, q);
          gamma += w(i, p) * w(i, q);
        }
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < rows; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = c * wp - s * wq;
          w(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < cols; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += w(i, j) * w(i, j);
    sv[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(cols);
  for (std::size_t i = 0; i < cols; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sv[a] > sv[b]; });

  SvdResult out;
  out.singular_values.resize(cols);
  out.u = Matrix(rows, cols);
  out.v = Matrix(cols, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const std::size_t src = order[j];
    out.singular_values[j] = sv[src];
    for (std::size_t i = 0; i < cols; ++i) out.v(i, j) = v(i, src);
    if (sv[src] > 0.0) {
      for (std::size_t i = 0; i < rows; ++i) out.u(i, j) = w(i, src) / sv[src];
    }
  }
  // complete U columns for zero singular values by Gram-Schmidt against earlier ones
  for (std::size_t j = 0; j < cols; ++j) {
    if (out.singular_values[j] > 0.0) continue;
    for (std::size_t attempt = 0; attempt < rows; ++attempt) {
      std::vector<double> cand(rows, 0.0);
      cand[attempt] = 1.0;
      for (std::size_t k = 0; k < j; ++k) {
        double proj = 0.0;
        for (std::size_t i = 0; i < rows; ++i) proj += out.u(i, k) * cand[i];
        for (std::size_t i = 0; i < rows; ++i) cand[i] -= proj * out.u(i, k);
      }
      const double nc = norm2(cand);
      if (nc > 0.5) {
        for (std::size_t i = 0; i < rows; ++i) out.u(i, j) = cand[i] / nc;
        break;
      }
    }
  }
  return out;
}

}  // namespace

SvdResult svd(const Matrix& m) {
  if (!m.all_finite()) throw Error("svd: non-finite entries");
  if (m.rows() >= m.cols()) return svd_tall(m);
  SvdResult t = svd_tall(m.transpose());
  SvdResult out;
  out.u = std::move(t.v);
  out.v = std::move(t.u);
  out.singular_values = std::move(t.singular_values);
  return out;
}

}  // namespace cjsr
