#include "cjsr/polylift.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace cjsr {

namespace {

void enumerate_exponents(std::size_t nvars, int remaining, std::vector<int>& prefix,
                         std::vector<std::vector<int>>& out) {
  if (prefix.size() + 1 == nvars) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    prefix.push_back(e);
    enumerate_exponents(nvars, remaining - e, prefix, out);
    prefix.pop_back();
  }
}

// d!/(alpha_1! ... alpha_n!), exact for the degrees in play (d <= 20)
double multinomial(const std::vector<int>& alpha) {
  double result = 1.0;
  int seen = 0;
  for (int a : alpha) {
    for (int i = 1; i <= a; ++i) {
      ++seen;
      result = result * static_cast<double>(seen) / static_cast<double>(i);
    }
  }
  return std::round(result);
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t nvars, std::size_t degree)
    : nvars_(nvars), degree_(degree) {
  if (nvars == 0) throw Error("MonomialBasis: need at least one variable");
  std::vector<int> prefix;
  enumerate_exponents(nvars, static_cast<int>(degree), prefix, exponents_);
  scales_.reserve(exponents_.size());
  for (const auto& e : exponents_) scales_.push_back(std::sqrt(multinomial(e)));
}

std::size_t MonomialBasis::index_of(const std::vector<int>& e) const {
  // graded-lex descending: binary search
  const auto cmp = [](const std::vector<int>& a, const std::vector<int>& b) { return a > b; };
  const auto it = std::lower_bound(exponents_.begin(), exponents_.end(), e, cmp);
  if (it == exponents_.end() || *it != e) throw Error("MonomialBasis: exponent not in basis");
  return static_cast<std::size_t>(it - exponents_.begin());
}

const MonomialBasis& MonomialBasis::get(std::size_t nvars, std::size_t degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, MonomialBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({nvars, degree});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(nvars, degree), MonomialBasis(nvars, degree)).first;
  return it->second;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(r));
}

std::vector<double> lift_vector(const std::vector<double>& x, std::size_t d) {
  if (d == 0) throw Error("lift_vector: degree must be positive");
  const MonomialBasis& basis = MonomialBasis::get(x.size(), d);
  std::vector<double> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    double v = basis.scale(i);
    const auto& e = basis.exponent(i);
    for (std::size_t j = 0; j < x.size(); ++j)
      for (int rep = 0; rep < e[j]; ++rep) v *= x[j];
    out[i] = v;
  }
  return out;
}

Matrix lift_matrix(const Matrix& a, std::size_t d) {
  if (!a.square()) throw Error("lift_matrix: non-square input");
  if (d == 0) throw Error("lift_matrix: degree must be positive");
  const std::size_t n = a.rows();
  const MonomialBasis& basis = MonomialBasis::get(n, d);
  const std::size_t nd = basis.size();
  Matrix out(nd, nd);

  // row alpha: expand (Ax)^alpha by multiplying one linear form at a time
  std::vector<const MonomialBasis*> bases(d + 1);
  for (std::size_t k = 0; k <= d; ++k) bases[k] = &MonomialBasis::get(n, k);
  for (std::size_t row = 0; row < nd; ++row) {
    const auto& alpha = basis.exponent(row);
    std::vector<double> poly{1.0};  // degree-0 coefficients, monomial basis
    std::size_t deg = 0;
    for (std::size_t var = 0; var < n; ++var) {
      for (int rep = 0; rep < alpha[var]; ++rep) {
        const MonomialBasis& from = *bases[deg];
        const MonomialBasis& to = *bases[deg + 1];
        std::vector<double> next(to.size(), 0.0);
        for (std::size_t t = 0; t < from.size(); ++t) {
          if (poly[t] == 0.0) continue;
          std::vector<int> e = from.exponent(t);
          for (std::size_t j = 0; j < n; ++j) {
            const double c = a(var, j);
            if (c == 0.0) continue;
            ++e[j];
            next[to.index_of(e)] += poly[t] * c;
            --e[j];
          }
        }
        poly = std::move(next);
        ++deg;
      }
    }
    for (std::size_t col = 0; col < nd; ++col) {
      if (poly[col] == 0.0) continue;
      out(row, col) = basis.scale(row) * poly[col] / basis.scale(col);
    }
  }
  return out;
}

double evaluate_poly(const HomogeneousPoly& p, const std::vector<double>& x) {
  if (x.size() != p.nvars) throw Error("evaluate_poly: dimension mismatch");
  const MonomialBasis& basis = p.basis();
  double sum = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (p.coeffs[i] == 0.0) continue;
    double v = basis.scale(i);
    const auto& e = basis.exponent(i);
    for (std::size_t j = 0; j < x.size(); ++j)
      for (int rep = 0; rep < e[j]; ++rep) v *= x[j];
    sum += p.coeffs[i] * v;
  }
  return sum;
}

HomogeneousPoly compose_poly(const HomogeneousPoly& p, const Matrix& a) {
  if (a.rows() != p.nvars) throw Error("compose_poly: dimension mismatch");
  const Matrix lift = lift_matrix(a, p.degree);
  HomogeneousPoly out{p.nvars, p.degree, std::vector<double>(p.coeffs.size(), 0.0)};
  for (std::size_t i = 0; i < lift.rows(); ++i) {
    const double ci = p.coeffs[i];
    if (ci == 0.0) continue;
    for (std::size_t j = 0; j < lift.cols(); ++j) out.coeffs[j] += lift(i, j) * ci;
  }
  return out;
}

HomogeneousPoly gram_to_coeffs(const GramForm& g) {
  const FiberMap& fm = FiberMap::get(g.nvars, g.degree);
  if (g.gram.rows() != fm.gram_size()) throw Error("gram_to_coeffs: Gram size mismatch");
  HomogeneousPoly out{g.nvars, 2 * g.degree, std::vector<double>(fm.poly_size(), 0.0)};
  for (std::size_t eta = 0; eta < fm.poly_size(); ++eta) {
    double s = 0.0;
    for (const auto& entry : fm.fiber(eta)) s += entry.weight * g.gram(entry.i, entry.j);
    out.coeffs[eta] = s;
  }
  return out;
}

HomogeneousPoly power_sum_poly(std::size_t nvars, std::size_t degree2d) {
  const MonomialBasis& basis = MonomialBasis::get(nvars, degree2d);
  HomogeneousPoly out{nvars, degree2d, std::vector<double>(basis.size(), 0.0)};
  std::vector<int> e(nvars, 0);
  for (std::size_t i = 0; i < nvars; ++i) {
    e[i] = static_cast<int>(degree2d);
    const std::size_t idx = basis.index_of(e);
    out.coeffs[idx] = 1.0 / basis.scale(idx);
    e[i] = 0;
  }
  return out;
}

HomogeneousPoly sphere_power_poly(std::size_t nvars, std::size_t degree2d) {
  if (degree2d % 2 != 0) throw Error("sphere_power_poly: degree must be even");
  GramForm g{nvars, degree2d / 2,
             Matrix::identity(MonomialBasis::get(nvars, degree2d / 2).size())};
  return gram_to_coeffs(g);
}

FiberMap::FiberMap(std::size_t nvars, std::size_t gram_degree)
    : nvars_(nvars), gram_degree_(gram_degree) {
  const MonomialBasis& bd = MonomialBasis::get(nvars, gram_degree);
  const MonomialBasis& b2d = MonomialBasis::get(nvars, 2 * gram_degree);
  gram_size_ = bd.size();
  fibers_.resize(b2d.size());
  std::vector<int> sum(nvars);
  for (std::size_t i = 0; i < bd.size(); ++i) {
    for (std::size_t j = i; j < bd.size(); ++j) {
      for (std::size_t v = 0; v < nvars; ++v) sum[v] = bd.exponent(i)[v] + bd.exponent(j)[v];
      const std::size_t eta = b2d.index_of(sum);
      const double w = (i == j ? 1.0 : 2.0) * bd.scale(i) * bd.scale(j) / b2d.scale(eta);
      fibers_[eta].push_back(Entry{i, j, w});
    }
  }
}

Matrix FiberMap::fiber_matrix(std::size_t eta_index) const {
  Matrix g(gram_size_, gram_size_);
  for (const auto& entry : fibers_[eta_index]) {
    const double half = (entry.i == entry.j) ? entry.weight : entry.weight / 2.0;
    g(entry.i, entry.j) = half;
    g(entry.j, entry.i) = half;
  }
  return g;
}

const FiberMap& FiberMap::get(std::size_t nvars, std::size_t gram_degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, std::size_t>, FiberMap> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({nvars, gram_degree});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(nvars, gram_degree), FiberMap(nvars, gram_degree)).first;
  return it->second;
}

}  // namespace cjsr
