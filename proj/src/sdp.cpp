#include "cjsr/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace cjsr {

namespace {

using BlockVec = std::vector<Matrix>;

BlockVec zeros_like(const std::vector<std::size_t>& sizes) {
  BlockVec v;
  v.reserve(sizes.size());
  for (std::size_t s : sizes) v.emplace_back(s, s);
  return v;
}

BlockVec identity_like(const std::vector<std::size_t>& sizes, double scale) {
  BlockVec v;
  v.reserve(sizes.size());
  for (std::size_t s : sizes) {
    Matrix m = Matrix::identity(s);
    m *= scale;
    v.push_back(std::move(m));
  }
  return v;
}

double bv_inner(const BlockVec& a, const BlockVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += inner(a[i], b[i]);
  return s;
}

void bv_axpy(BlockVec& y, double alpha, const BlockVec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t k = 0; k < y[i].data().size(); ++k)
      y[i].data()[k] += alpha * x[i].data()[k];
  }
}

double bv_max_abs(const BlockVec& a) {
  double m = 0.0;
  for (const Matrix& b : a) m = std::max(m, b.max_abs());
  return m;
}

// strict lower Cholesky; nullopt when not positive definite
std::optional<Matrix> chol_lower(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0 || !std::isfinite(d)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

// inverse from a lower Cholesky factor
Matrix chol_inverse(const Matrix& l) {
  const std::size_t n = l.rows();
  Matrix linv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    linv(j, j) = 1.0 / l(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s += l(i, k) * linv(k, j);
      linv(i, j) = -s / l(i, i);
    }
  }
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = i; k < n; ++k) s += linv(k, i) * linv(k, j);
      inv(i, j) = s;
      inv(j, i) = s;
    }
  return inv;
}

// largest alpha with P + alpha*D still PSD (P positive definite)
double max_step(const Matrix& p, const Matrix& d) {
  const auto l = chol_lower(p);
  if (!l) return 0.0;
  const std::size_t n = p.rows();
  // S = L^{-1} D L^{-T}
  Matrix s1(n, n);  // L^{-1} D
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = d(i, col);
      for (std::size_t k = 0; k < i; ++k) v -= (*l)(i, k) * s1(k, col);
      s1(i, col) = v / (*l)(i, i);
    }
  }
  Matrix s(n, n);  // s1 L^{-T}: solve row-wise
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = s1(row, j);
      for (std::size_t k = 0; k < j; ++k) v -= s(row, k) * (*l)(j, k);
      s(row, j) = v / (*l)(j, j);
    }
  }
  s.symmetrize();
  const double lmin = symmetric_min_eigenvalue(s);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct ScaledProblem {
  std::vector<std::size_t> sizes;
  BlockVec objective;
  std::vector<SdpProblem::Constraint> rows;  // scaled, independent
  std::vector<double> rhs;
  std::vector<std::size_t> original_row;  // index into the input constraint list
  std::vector<double> row_scale;          // divide original row by this
  bool inconsistent = false;
  std::string note;
};

// row scaling + removal of dependent equality rows (modified Gram-Schmidt)
ScaledProblem presolve(const SdpProblem& p, double threshold) {
  ScaledProblem sp;
  sp.sizes.resize(p.block_count());
  for (std::size_t b = 0; b < p.block_count(); ++b) sp.sizes[b] = p.block_size(b);
  sp.objective.reserve(p.block_count());
  for (std::size_t b = 0; b < p.block_count(); ++b) sp.objective.push_back(p.objective(b));

  std::size_t dim = 0;
  std::vector<std::size_t> offset(p.block_count());
  for (std::size_t b = 0; b < p.block_count(); ++b) {
    offset[b] = dim;
    dim += p.block_size(b) * p.block_size(b);
  }
  const auto densify = [&](const SdpProblem::Constraint& c) {
    std::vector<double> v(dim, 0.0);
    for (const auto& t : c.terms) {
      const auto& data = t.coeff.data();
      for (std::size_t k = 0; k < data.size(); ++k) v[offset[t.block] + k] += data[k];
    }
    return v;
  };

  std::vector<std::vector<double>> basis;  // orthonormal
  std::vector<double> basis_rhs;           // rhs carried through the same transform
  for (std::size_t c = 0; c < p.constraint_count(); ++c) {
    SdpProblem::Constraint row = p.constraint(c);
    double norm = 0.0;
    for (const auto& t : row.terms) {
      const double f = t.coeff.frobenius_norm();
      norm += f * f;
    }
    norm = std::sqrt(norm);
    const double scale = norm > 0.0 ? norm : 1.0;
    for (auto& t : row.terms) t.coeff *= 1.0 / scale;
    const double rhs = row.rhs / scale;
    row.rhs = rhs;

    std::vector<double> v = densify(row);
    double pred_rhs = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double proj = dot(v, basis[j]);
      for (std::size_t k = 0; k < dim; ++k) v[k] -= proj * basis[j][k];
      pred_rhs += proj * basis_rhs[j];
    }
    const double resid = norm2(v);
    if (resid <= threshold) {
      if (std::abs(rhs - pred_rhs) > 1e-8 * (1.0 + std::abs(rhs))) {
        sp.inconsistent = true;
        sp.note = "dependent row " + std::to_string(c) + " has inconsistent right-hand side";
        return sp;
      }
      continue;  // redundant row dropped
    }
    for (double& x : v) x /= resid;
    basis.push_back(std::move(v));
    basis_rhs.push_back((rhs - pred_rhs) / resid);
    sp.rows.push_back(std::move(row));
    sp.rhs.push_back(rhs);
    sp.original_row.push_back(c);
    sp.row_scale.push_back(scale);
  }
  return sp;
}

struct Operator {
  const ScaledProblem& sp;

  std::vector<double> forward(const BlockVec& x) const {  // A(X)
    std::vector<double> out(sp.rows.size(), 0.0);
    for (std::size_t c = 0; c < sp.rows.size(); ++c) {
      double s = 0.0;
      for (const auto& t : sp.rows[c].terms) s += inner(t.coeff, x[t.block]);
      out[c] = s;
    }
    return out;
  }

  BlockVec adjoint(const std::vector<double>& y) const {  // A*(y)
    BlockVec out = zeros_like(sp.sizes);
    for (std::size_t c = 0; c < sp.rows.size(); ++c) {
      const double yc = y[c];
      if (yc == 0.0) continue;
      for (const auto& t : sp.rows[c].terms) bv_axpy_one(out[t.block], yc, t.coeff);
    }
    return out;
  }

  static void bv_axpy_one(Matrix& dst, double alpha, const Matrix& src) {
    for (std::size_t k = 0; k < dst.data().size(); ++k) dst.data()[k] += alpha * src.data()[k];
  }
};

Matrix sym_product(const Matrix& zinv, const Matrix& u, const Matrix& x) {
  Matrix t = zinv * u * x;
  t.symmetrize();
  return t;
}

}  // namespace

std::size_t SdpProblem::add_block(std::string name, std::size_t size) {
  if (size == 0) throw Error("SdpProblem: empty block");
  block_names_.push_back(std::move(name));
  block_sizes_.push_back(size);
  objective_.emplace_back(size, size);
  return block_sizes_.size() - 1;
}

void SdpProblem::set_objective(std::size_t block, Matrix c) {
  if (block >= block_sizes_.size()) throw Error("SdpProblem: bad block index");
  if (c.rows() != block_sizes_[block] || !c.square())
    throw Error("SdpProblem: objective size mismatch");
  if (!c.is_symmetric(1e-9 * std::max(1.0, c.max_abs())))
    throw Error("SdpProblem: objective must be symmetric");
  c.symmetrize();
  objective_[block] = std::move(c);
}

std::size_t SdpProblem::add_constraint(Constraint c) {
  for (auto& t : c.terms) {
    if (t.block >= block_sizes_.size()) throw Error("SdpProblem: bad block index");
    if (t.coeff.rows() != block_sizes_[t.block] || !t.coeff.square())
      throw Error("SdpProblem: constraint size mismatch");
    if (!t.coeff.is_symmetric(1e-9 * std::max(1.0, t.coeff.max_abs())))
      throw Error("SdpProblem: constraint matrices must be symmetric");
    t.coeff.symmetrize();
  }
  constraints_.push_back(std::move(c));
  return constraints_.size() - 1;
}

std::size_t SdpProblem::total_dimension() const {
  std::size_t d = 0;
  for (std::size_t s : block_sizes_) d += s;
  return d;
}

SdpSolution solve(const SdpProblem& p, const SdpOptions& opts) {
  SdpSolution sol;
  sol.dual_multipliers.assign(p.constraint_count(), 0.0);
  ScaledProblem sp = presolve(p, opts.presolve_threshold);
  if (sp.inconsistent) {
    sol.status = SdpStatus::infeasible;
    sol.diagnostics = sp.note;
    return sol;
  }
  const std::size_t m = sp.rows.size();
  const std::size_t nblocks = sp.sizes.size();
  std::size_t ntot = 0;
  for (std::size_t s : sp.sizes) ntot += s;
  Operator op{sp};
  const BlockVec& cmat = sp.objective;
  const std::vector<double>& b = sp.rhs;

  double bmax = 0.0;
  for (double v : b) bmax = std::max(bmax, std::abs(v));
  const double cmax = bv_max_abs(cmat);
  double borig_max = 0.0;
  for (std::size_t c = 0; c < p.constraint_count(); ++c)
    borig_max = std::max(borig_max, std::abs(p.constraint(c).rhs));

  // homogeneous self-dual state
  BlockVec x = identity_like(sp.sizes, std::max(1.0, bmax));
  BlockVec z = identity_like(sp.sizes, std::max(1.0, cmax));
  std::vector<double> y(m, 0.0);
  double tau = 1.0, kappa = 1.0;

  const double mu0 = (bv_inner(x, z) + tau * kappa) / static_cast<double>(ntot + 1);

  const auto record_iterate = [&](SdpStatus status) {
    sol.status = status;
    sol.primal_blocks.clear();
    sol.dual_slack_blocks.clear();
    const double inv_tau = 1.0 / tau;
    for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
      Matrix xb = x[bidx];
      xb *= inv_tau;
      sol.primal_blocks.push_back(std::move(xb));
      Matrix zb = z[bidx];
      zb *= inv_tau;
      sol.dual_slack_blocks.push_back(std::move(zb));
    }
    for (std::size_t c = 0; c < m; ++c)
      sol.dual_multipliers[sp.original_row[c]] = y[c] * inv_tau / sp.row_scale[c];
    // residuals against the original data
    double pres = 0.0;
    for (std::size_t c = 0; c < p.constraint_count(); ++c) {
      double ax = 0.0;
      for (const auto& t : p.constraint(c).terms) ax += inner(t.coeff, sol.primal_blocks[t.block]);
      pres = std::max(pres, std::abs(ax - p.constraint(c).rhs));
    }
    double borig = 0.0;
    for (std::size_t c = 0; c < p.constraint_count(); ++c)
      borig = std::max(borig, std::abs(p.constraint(c).rhs));
    sol.residuals.primal = pres / (1.0 + borig);
    double dres = 0.0;
    double cbig = 0.0;
    for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
      Matrix r = sol.dual_slack_blocks[bidx] - p.objective(bidx);
      cbig = std::max(cbig, p.objective(bidx).max_abs());
      for (std::size_t c = 0; c < p.constraint_count(); ++c) {
        const double yc = sol.dual_multipliers[c];
        if (yc == 0.0) continue;
        for (const auto& t : p.constraint(c).terms)
          if (t.block == bidx) Operator::bv_axpy_one(r, yc, t.coeff);
      }
      dres = std::max(dres, r.max_abs());
    }
    sol.residuals.dual = dres / (1.0 + cbig);
    double cobj = 0.0;
    for (std::size_t bidx = 0; bidx < nblocks; ++bidx)
      cobj += inner(p.objective(bidx), sol.primal_blocks[bidx]);
    double bobj = 0.0;
    for (std::size_t c = 0; c < p.constraint_count(); ++c)
      bobj += p.constraint(c).rhs * sol.dual_multipliers[c];
    sol.primal_objective = cobj;
    sol.dual_objective = bobj;
    sol.residuals.gap = std::abs(cobj - bobj) / (1.0 + std::abs(cobj) + std::abs(bobj));
  };

  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    sol.iterations = iter;
    // residuals of the homogeneous model
    std::vector<double> ax = op.forward(x);
    std::vector<double> p_res(m);
    for (std::size_t c = 0; c < m; ++c) p_res[c] = b[c] * tau - ax[c];
    BlockVec d_res = zeros_like(sp.sizes);
    {
      BlockVec aty = op.adjoint(y);
      for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
        d_res[bidx] = cmat[bidx];
        d_res[bidx] *= tau;
        d_res[bidx] -= aty[bidx];
        d_res[bidx] -= z[bidx];
      }
    }
    const double cx = bv_inner(cmat, x);
    const double by = dot(b, y);
    const double g_res = kappa + cx - by;
    const double mu = (bv_inner(x, z) + tau * kappa) / static_cast<double>(ntot + 1);

    // convergence on the scaled-back iterate, in original row units
    {
      double pr = 0.0;
      for (std::size_t c = 0; c < m; ++c)
        pr = std::max(pr, std::abs(ax[c] / tau - b[c]) * sp.row_scale[c]);
      pr /= (1.0 + borig_max);
      double dr = 0.0;
      {
        BlockVec aty = op.adjoint(y);
        for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
          Matrix r = aty[bidx];
          r += z[bidx];
          r *= 1.0 / tau;
          r -= cmat[bidx];
          dr = std::max(dr, r.max_abs());
        }
      }
      dr /= (1.0 + cmax);
      const double gap = std::abs(cx / tau - by / tau) /
                         (1.0 + std::abs(cx / tau) + std::abs(by / tau));
      if (pr <= opts.tol && dr <= opts.tol && gap <= opts.tol) {
        record_iterate(SdpStatus::optimal);
        return sol;
      }
      // infeasibility: tau collapses while kappa stays
      if (tau <= 1e-12 * std::max(1.0, kappa) ||
          (mu <= 1e-10 * mu0 && tau <= 1e-6 * kappa)) {
        if (by > opts.tol) {
          sol.farkas_multipliers.assign(p.constraint_count(), 0.0);
          for (std::size_t c = 0; c < m; ++c)
            sol.farkas_multipliers[sp.original_row[c]] = y[c] / by / sp.row_scale[c];
          BlockVec aty = op.adjoint(y);
          double viol = 0.0;
          for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
            const auto eig = symmetric_eigen(aty[bidx]);
            if (!eig.values.empty()) viol = std::max(viol, eig.values.back() / by);
          }
          sol.farkas_violation = viol;
          record_iterate(SdpStatus::infeasible);
          sol.diagnostics = "tau/kappa collapse; Farkas certificate from dual multipliers";
          return sol;
        }
        if (cx < -opts.tol) {
          record_iterate(SdpStatus::unbounded);
          sol.diagnostics = "tau/kappa collapse; improving ray in the primal";
          return sol;
        }
        record_iterate(SdpStatus::max_iterations);
        sol.diagnostics = "tau collapsed without a certificate";
        return sol;
      }
    }

    // HKM scaling pieces
    std::vector<Matrix> zinv(nblocks);
    bool chol_ok = true;
    for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
      const auto l = chol_lower(z[bidx]);
      if (!l) {
        chol_ok = false;
        break;
      }
      zinv[bidx] = chol_inverse(*l);
    }
    if (!chol_ok) {
      record_iterate(SdpStatus::max_iterations);
      sol.diagnostics = "Cholesky breakdown on the dual slack";
      return sol;
    }

    // W(A_j) per constraint (block-sparse), W(C), W(D)
    std::vector<std::vector<Matrix>> wrows(m);
    for (std::size_t c = 0; c < m; ++c) {
      wrows[c].reserve(sp.rows[c].terms.size());
      for (const auto& t : sp.rows[c].terms)
        wrows[c].push_back(sym_product(zinv[t.block], t.coeff, x[t.block]));
    }
    BlockVec wc = zeros_like(sp.sizes);
    for (std::size_t bidx = 0; bidx < nblocks; ++bidx)
      if (cmat[bidx].max_abs() > 0.0) wc[bidx] = sym_product(zinv[bidx], cmat[bidx], x[bidx]);
    BlockVec wd = zeros_like(sp.sizes);
    for (std::size_t bidx = 0; bidx < nblocks; ++bidx)
      wd[bidx] = sym_product(zinv[bidx], d_res[bidx], x[bidx]);

    // Schur complement B_ij = <A_i, W(A_j)>
    Matrix schur(m, m);
    {
      std::vector<std::vector<std::pair<std::size_t, std::size_t>>> touching(nblocks);
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t ti = 0; ti < sp.rows[c].terms.size(); ++ti)
          touching[sp.rows[c].terms[ti].block].push_back({c, ti});
      for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
        const auto& rows_here = touching[bidx];
        for (std::size_t a = 0; a < rows_here.size(); ++a) {
          const auto [ci, ti] = rows_here[a];
          for (std::size_t bi = 0; bi < rows_here.size(); ++bi) {
            const auto [cj, tj] = rows_here[bi];
            if (cj < ci) continue;
            schur(ci, cj) += inner(sp.rows[ci].terms[ti].coeff, wrows[cj][tj]);
          }
        }
      }
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) schur(j, i) = schur(i, j);
    }
    std::optional<Matrix> schur_l = chol_lower(schur);
    if (!schur_l) {
      Matrix reg = schur;
      const double bump = 1e-12 * std::max(1.0, schur.max_abs());
      for (std::size_t i = 0; i < m; ++i) reg(i, i) += bump;
      schur_l = chol_lower(reg);
      if (!schur_l) {
        record_iterate(SdpStatus::max_iterations);
        sol.diagnostics = "Cholesky breakdown in the Schur complement";
        return sol;
      }
    }
    const auto schur_solve = [&](std::vector<double> rhs) {
      const Matrix& l = *schur_l;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < i; ++k) rhs[i] -= l(i, k) * rhs[k];
        rhs[i] /= l(i, i);
      }
      for (std::size_t i = m; i-- > 0;) {
        for (std::size_t k = i + 1; k < m; ++k) rhs[i] -= l(k, i) * rhs[k];
        rhs[i] /= l(i, i);
      }
      return rhs;
    };

    // tau column: B v = b + A(W(C))
    std::vector<double> rhs_v = op.forward(wc);
    for (std::size_t c = 0; c < m; ++c) rhs_v[c] += b[c];
    const std::vector<double> v = schur_solve(rhs_v);
    const std::vector<double> awc = op.forward(wc);

    const auto direction = [&](double mu_hat, const BlockVec* corr, double corr_tk,
                               BlockVec& dx, std::vector<double>& dy, BlockVec& dz,
                               double& dtau, double& dkappa) {
      BlockVec kvec = zeros_like(sp.sizes);
      for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
        kvec[bidx] = zinv[bidx];
        kvec[bidx] *= mu_hat;
        kvec[bidx] -= x[bidx];
        if (corr) kvec[bidx] -= (*corr)[bidx];
      }
      const double kappa_hat = (mu_hat - tau * kappa - corr_tk) / tau;
      // B u = p - A(K) + A(W(D))
      BlockVec k_minus_wd = kvec;
      bv_axpy(k_minus_wd, -1.0, wd);
      std::vector<double> rhs_u = op.forward(k_minus_wd);
      for (std::size_t c = 0; c < m; ++c) rhs_u[c] = p_res[c] - rhs_u[c];
      const std::vector<double> u = schur_solve(rhs_u);
      const double c_kwd = bv_inner(cmat, k_minus_wd);
      const double denom = dot(b, v) - dot(awc, v) + bv_inner(cmat, wc) + kappa / tau;
      const double numer = g_res - dot(b, u) + c_kwd + dot(awc, u) + kappa_hat;
      dtau = std::abs(denom) > 1e-300 ? numer / denom : 0.0;
      dy.resize(m);
      for (std::size_t c = 0; c < m; ++c) dy[c] = u[c] + v[c] * dtau;
      BlockVec aty = op.adjoint(dy);
      dz = d_res;
      for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
        dz[bidx] -= aty[bidx];
        Matrix ct = cmat[bidx];
        ct *= dtau;
        dz[bidx] += ct;
      }
      dx = kvec;
      for (std::size_t bidx = 0; bidx < nblocks; ++bidx)
        dx[bidx] -= sym_product(zinv[bidx], dz[bidx], x[bidx]);
      dkappa = kappa_hat - (kappa / tau) * dtau;
    };

    const auto step_bound = [&](const BlockVec& dx, const BlockVec& dz, double dtau,
                                double dkappa) {
      double a = std::numeric_limits<double>::infinity();
      for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
        a = std::min(a, max_step(x[bidx], dx[bidx]));
        a = std::min(a, max_step(z[bidx], dz[bidx]));
      }
      if (dtau < 0.0) a = std::min(a, -tau / dtau);
      if (dkappa < 0.0) a = std::min(a, -kappa / dkappa);
      return a;
    };

    // predictor
    BlockVec dx_a, dz_a;
    std::vector<double> dy_a;
    double dtau_a = 0.0, dkappa_a = 0.0;
    direction(0.0, nullptr, 0.0, dx_a, dy_a, dz_a, dtau_a, dkappa_a);
    const double alpha_aff = std::min(1.0, step_bound(dx_a, dz_a, dtau_a, dkappa_a));
    double mu_aff = tau * kappa + alpha_aff * (tau * dkappa_a + kappa * dtau_a) +
                    alpha_aff * alpha_aff * dtau_a * dkappa_a;
    {
      BlockVec xa = x, za = z;
      bv_axpy(xa, alpha_aff, dx_a);
      bv_axpy(za, alpha_aff, dz_a);
      mu_aff += bv_inner(xa, za);
      mu_aff /= static_cast<double>(ntot + 1);
    }
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::min(1.0, sigma);

    // corrector
    BlockVec corr = zeros_like(sp.sizes);
    for (std::size_t bidx = 0; bidx < nblocks; ++bidx) {
      Matrix t = zinv[bidx] * dz_a[bidx] * dx_a[bidx];
      t.symmetrize();
      corr[bidx] = std::move(t);
    }
    BlockVec dx, dz;
    std::vector<double> dy;
    double dtau = 0.0, dkappa = 0.0;
    direction(sigma * mu, &corr, dtau_a * dkappa_a, dx, dy, dz, dtau, dkappa);
    double alpha = std::min(1.0, opts.step_fraction * step_bound(dx, dz, dtau, dkappa));
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      record_iterate(SdpStatus::max_iterations);
      sol.diagnostics = "step length collapsed";
      return sol;
    }
    bv_axpy(x, alpha, dx);
    bv_axpy(z, alpha, dz);
    for (std::size_t c = 0; c < m; ++c) y[c] += alpha * dy[c];
    tau += alpha * dtau;
    kappa += alpha * dkappa;
  }
  record_iterate(SdpStatus::max_iterations);
  sol.diagnostics = "iteration cap reached";
  return sol;
}

FeasibilityResult feasibility(const SdpProblem& p, double margin, const SdpOptions& opts) {
  double span = 0.0;
  for (std::size_t c = 0; c < p.constraint_count(); ++c)
    span = std::max(span, std::abs(p.constraint(c).rhs));
  const double box = 100.0 * (1.0 + span);

  {
    SdpProblem q;
    for (std::size_t b = 0; b < p.block_count(); ++b) q.add_block(p.block_name(b), p.block_size(b));
    const std::size_t spos = q.add_block("_shift_pos", 1);
    const std::size_t sneg = q.add_block("_shift_neg", 1);
    Matrix neg_one(1, 1);
    neg_one(0, 0) = -1.0;
    q.set_objective(sneg, neg_one);  // max t, t = s_neg - box
    for (std::size_t c = 0; c < p.constraint_count(); ++c) {
      SdpProblem::Constraint row = p.constraint(c);
      double a = 0.0;
      for (const auto& t : row.terms) a += t.coeff.trace();
      if (a != 0.0) {
        Matrix coeff(1, 1);
        coeff(0, 0) = a;
        row.terms.push_back({sneg, std::move(coeff)});
        row.rhs += box * a;
      }
      q.add_constraint(std::move(row));
    }
    {
      SdpProblem::Constraint boxrow;
      Matrix one(1, 1);
      one(0, 0) = 1.0;
      boxrow.terms.push_back({spos, one});
      boxrow.terms.push_back({sneg, one});
      boxrow.rhs = 2.0 * box;
      q.add_constraint(std::move(boxrow));
    }
    SdpSolution s = solve(q, opts);
    // a shift saturating the box still decides the sign of the verdict
    const double shift =
        (s.primal_blocks.size() > sneg) ? s.primal_blocks[sneg](0, 0) - box : 0.0;

    FeasibilityResult out;
    out.status = s.status;
    out.shift = shift;
    out.iterations = s.iterations;
    out.residuals = s.residuals;
    if (s.status == SdpStatus::optimal || s.status == SdpStatus::max_iterations) {
      out.primal_blocks.clear();
      for (std::size_t b = 0; b < p.block_count(); ++b) {
        Matrix xb = s.primal_blocks[b];
        for (std::size_t i = 0; i < xb.rows(); ++i) xb(i, i) += shift;
        out.primal_blocks.push_back(std::move(xb));
      }
      out.row_multipliers.assign(s.dual_multipliers.begin(),
                                 s.dual_multipliers.begin() +
                                     static_cast<std::ptrdiff_t>(p.constraint_count()));
      out.dual_slack_blocks.assign(s.dual_slack_blocks.begin(),
                                   s.dual_slack_blocks.begin() +
                                       static_cast<std::ptrdiff_t>(p.block_count()));
    }
    if (s.status != SdpStatus::optimal) {
      out.verdict = FeasibilityVerdict::marginal;
    } else if (shift > margin) {
      out.verdict = FeasibilityVerdict::strictly_feasible;
    } else if (shift < -margin) {
      out.verdict = FeasibilityVerdict::infeasible;
    } else {
      out.verdict = FeasibilityVerdict::marginal;
    }
    return out;
  }
}

void write_sdpa(const SdpProblem& p, std::ostream& os) {
  os << "\"SDPA sparse dump: F0 = -C, F_i = A_i, c = b; the SDPA dual Y is the primal X\"\n";
  os << p.constraint_count() << " = mDIM\n";
  os << p.block_count() << " = nBLOCK\n";
  for (std::size_t b = 0; b < p.block_count(); ++b)
    os << p.block_size(b) << (b + 1 < p.block_count() ? " " : " = bLOCKsTRUCT\n");
  for (std::size_t c = 0; c < p.constraint_count(); ++c)
    os << p.constraint(c).rhs << (c + 1 < p.constraint_count() ? " " : "\n");
  const auto emit = [&os](std::size_t mat, std::size_t block, const Matrix& m, double sign) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = i; j < m.cols(); ++j)
        if (m(i, j) != 0.0)
          os << mat << " " << block + 1 << " " << i + 1 << " " << j + 1 << " "
             << sign * m(i, j) << "\n";
  };
  for (std::size_t b = 0; b < p.block_count(); ++b) emit(0, b, p.objective(b), -1.0);
  for (std::size_t c = 0; c < p.constraint_count(); ++c)
    for (const auto& t : p.constraint(c).terms) emit(c + 1, t.block, t.coeff, 1.0);
}

}  // namespace cjsr
