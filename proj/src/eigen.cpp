#include <algorithm>
#include <cmath>

#include "cjsr/matrix.hpp"

namespace cjsr {
namespace {

// EISPACK-style balancing by radix-2 similarity scaling.
void balance(Matrix& a) {
  const std::size_t n = a.rows();
  const double radix = 2.0;
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        again = true;
        const double ginv = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= ginv;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form.
void hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i < n; ++i) scale += std::abs(a(i, m - 1));
    if (scale == 0.0) continue;
    std::vector<double> v(n, 0.0);
    double h = 0.0;
    for (std::size_t i = m; i < n; ++i) {
      v[i] = a(i, m - 1) / scale;
      h += v[i] * v[i];
    }
    double g = std::sqrt(h);
    if (v[m] > 0) g = -g;
    h -= v[m] * g;
    v[m] -= g;
    // apply P = I - v v^T / h from both sides
    for (std::size_t j = 0; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = m; i < n; ++i) f += v[i] * a(i, j);
      f /= h;
      for (std::size_t i = m; i < n; ++i) a(i, j) -= f * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = m; j < n; ++j) f += a(i, j) * v[j];
      f /= h;
      for (std::size_t j = m; j < n; ++j) a(i, j) -= f * v[j];
    }
    a(m, m - 1) = scale * g;
    for (std::size_t i = m + 1; i < n; ++i) a(i, m - 1) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix; emits (re, im) pairs.
bool hqr(Matrix& a, std::vector<std::pair<double, double>>& w, std::size_t max_iter) {
  const std::size_t n0 = a.rows();
  if (n0 == 0) return true;
  double anorm = 0.0;
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = (i > 0 ? i - 1 : 0); j < n0; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) {
    w.assign(n0, {0.0, 0.0});
    return true;
  }
  std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n0) - 1;
  double t = 0.0;
  std::size_t total_iter = 0;
  while (nn >= 0) {
    std::size_t its = 0;
    std::ptrdiff_t l;
    for (;;) {
      for (l = nn; l >= 1; --l) {
        const double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        const double cmp = (s == 0.0) ? anorm : s;
        if (std::abs(a(l, l - 1)) <= 1e-300 + 2.3e-16 * cmp) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {  // one real root
        w.emplace_back(x + t, 0.0);
        --nn;
        break;
      }
      double y = a(nn - 1, nn - 1);
      double wv = a(nn, nn - 1) * a(nn - 1, nn);
      if (l == nn - 1) {  // two roots
        double p = 0.5 * (y - x);
        double q = p * p + wv;
        double z = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          z = p + (p >= 0 ? z : -z);
          w.emplace_back(x + z, 0.0);
          w.emplace_back(z != 0.0 ? x - wv / z : x + z, 0.0);
        } else {
          w.emplace_back(x + p, z);
          w.emplace_back(x + p, -z);
        }
        nn -= 2;
        break;
      }
      if (total_iter++ > max_iter) return false;
      if (its == 10 || its == 20) {  // exceptional shift
        t += x;
        for (std::ptrdiff_t i = 0; i <= nn; ++i) a(i, i) -= x;
        const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
        x = y = 0.75 * s;
        wv = -0.4375 * s * s;
      }
      ++its;
      // double-shift: find l <= m <= nn-2 to start the implicit bulge
      std::ptrdiff_t m;
      double p = 0, q = 0, r = 0;
      for (m = nn - 2; m >= l; --m) {
        const double z = a(m, m);
        const double rr = x - z;
        const double ss = y - z;
        p = (rr * ss - wv) / a(m + 1, m) + a(m, m + 1);
        q = a(m + 1, m + 1) - z - rr - ss;
        r = a(m + 2, m + 1);
        const double scale = std::abs(p) + std::abs(q) + std::abs(r);
        p /= scale;
        q /= scale;
        r /= scale;
        if (m == l) break;
        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
        const double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(a(m, m)) +
                                        std::abs(a(m + 1, m + 1)));
        if (u <= 2.3e-16 * v) break;
      }
      for (std::ptrdiff_t i = m + 2; i <= nn; ++i) {
        a(i, i - 2) = 0.0;
        if (i != m + 2) a(i, i - 3) = 0.0;
      }
      for (std::ptrdiff_t k = m; k <= nn - 1; ++k) {
        if (k != m) {
          p = a(k, k - 1);
          q = a(k + 1, k - 1);
          r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        double s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (k == m) {
          if (l != m) a(k, k - 1) = -a(k, k - 1);
        } else {
          a(k, k - 1) = -s * x;
        }
        p += s;
        x = p / s;
        const double yy = q / s;
        const double zz = r / s;
        q /= p;
        r /= p;
        for (std::ptrdiff_t j = k; j <= nn; ++j) {  // row modification
          double pp = a(k, j) + q * a(k + 1, j);
          if (k != nn - 1) {
            pp += r * a(k + 2, j);
            a(k + 2, j) -= pp * zz;
          }
          a(k + 1, j) -= pp * yy;
          a(k, j) -= pp * x;
        }
        const std::ptrdiff_t mmin = std::min(nn, k + 3);
        for (std::ptrdiff_t i = l; i <= mmin; ++i) {  // column modification
          double pp = x * a(i, k) + yy * a(i, k + 1);
          if (k != nn - 1) {
            pp += zz * a(i, k + 2);
            a(i, k + 2) -= pp * r;
          }
          a(i, k + 1) -= pp * q;
          a(i, k) -= pp;
        }
      }
    }
  }
  return true;
}

}  // namespace

std::vector<std::pair<double, double>> eigenvalues(const Matrix& m) {
  if (!m.square()) throw Error("eigenvalues: non-square input");
  if (!m.all_finite()) throw Error("eigenvalues: non-finite entries");
  const std::size_t n = m.rows();
  std::vector<std::pair<double, double>> w;
  if (n == 0) return w;
  if (m.is_symmetric(1e-13 * std::max(1.0, m.max_abs()))) {
    const auto se = symmetric_eigen(m);
    for (double v : se.values) w.emplace_back(v, 0.0);
    return w;
  }
  Matrix a = m;
  balance(a);
  hessenberg(a);
  if (!hqr(a, w, 100 * n)) throw Error("eigenvalues: QR iteration did not converge");
  return w;
}

SpectrumResult eigenvalue_spectrum(const Matrix& m) {
  SpectrumResult out;
  const auto w = eigenvalues(m);
  out.eigenvalue_moduli.reserve(w.size());
  for (const auto& [re, im] : w) out.eigenvalue_moduli.push_back(std::hypot(re, im));
  std::sort(out.eigenvalue_moduli.rbegin(), out.eigenvalue_moduli.rend());
  out.spectral_radius = out.eigenvalue_moduli.empty() ? 0.0 : out.eigenvalue_moduli.front();
  out.converged = true;
  return out;
}

double spectral_radius(const Matrix& m) { return eigenvalue_spectrum(m).spectral_radius; }

}  // namespace cjsr
