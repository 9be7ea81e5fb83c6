#include "entmeas/sdp.hpp"

#include <algorithm>
#include <cmath>

#include "entmeas/linalg.hpp"

namespace entmeas::sdp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

CMatrix SparseHermitian::to_dense(int n) const {
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& e : entries) m(e.row, e.col) += e.value;
  return m;
}

SparseHermitian SparseHermitian::from_dense(const CMatrix& m, double drop) {
  SparseHermitian out;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, j)) > drop) out.add(static_cast<int>(i), static_cast<int>(j), m(i, j));
  return out;
}

CMatrix apply_adjoint(const LmiBlock& block, const RVector& y) {
  CMatrix out = CMatrix::Zero(block.size, block.size);
  for (std::size_t i = 0; i < block.coefficients.size(); ++i) {
    const double yi = y[static_cast<Eigen::Index>(i)];
    if (yi == 0.0) continue;
    for (const auto& e : block.coefficients[i].entries) out(e.row, e.col) += yi * e.value;
  }
  return out;
}

namespace {

// Re tr(A B) for sparse Hermitian A and arbitrary square B.
double trace_product(const SparseHermitian& a, const CMatrix& b) {
  double acc = 0;
  for (const auto& e : a.entries) acc += (e.value * b(e.col, e.row)).real();
  return acc;
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

CMatrix inverse_hpd(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) return {};
  return hermitian_part(llt.solve(CMatrix::Identity(m.rows(), m.cols())));
}

// Largest alpha with m + alpha * d >= 0, for m positive definite.
double max_step(const CMatrix& m, const CMatrix& d) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  const CMatrix l_inv = llt.matrixL().solve(CMatrix::Identity(m.rows(), m.cols()));
  const double lmin = hermitian_eigen(l_inv * d * l_inv.adjoint()).values.minCoeff();
  return lmin >= 0 ? kInfinity : -1.0 / lmin;
}

struct State {
  std::vector<CMatrix> x, z;
  RVector y;
};

class Solver {
 public:
  Solver(const Problem& p, const Options& o) : p_(p), o_(o), m_(p.variables()) {
    for (const auto& b : p_.blocks) {
      if (b.constant.rows() != b.size || b.constant.cols() != b.size)
        throw ArgumentError("sdp: block constant has the wrong shape");
      if (static_cast<int>(b.coefficients.size()) != m_)
        throw ArgumentError("sdp: every block needs one coefficient slot per variable");
      for (const auto& a : b.coefficients)
        for (const auto& e : a.entries)
          if (e.row < 0 || e.col < 0 || e.row >= b.size || e.col >= b.size)
            throw ArgumentError("sdp: coefficient entry outside its block");
      n_total_ += b.size;
    }
  }

  Solution run();

 private:
  RVector apply_forward(const std::vector<CMatrix>& mats) const {
    RVector out = RVector::Zero(m_);
    for (std::size_t k = 0; k < p_.blocks.size(); ++k)
      for (int i = 0; i < m_; ++i) {
        const auto& a = p_.blocks[k].coefficients[static_cast<std::size_t>(i)];
        if (!a.empty()) out[i] += trace_product(a, mats[k]);
      }
    return out;
  }

  RMatrix schur(const std::vector<CMatrix>& x, const std::vector<CMatrix>& w) const;

  const Problem& p_;
  const Options& o_;
  int m_;
  int n_total_ = 0;
};

RMatrix Solver::schur(const std::vector<CMatrix>& x, const std::vector<CMatrix>& w) const {
  RMatrix mat = RMatrix::Zero(m_, m_);
  // Column j: M_ij = Re tr(A_i X A_j W), via B_j = X A_j W built from the
  // sparse entries of A_j. Columns are independent.
#pragma omp parallel for schedule(dynamic) if (m_ > 64)
  for (int j = 0; j < m_; ++j) {
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& aj = p_.blocks[k].coefficients[static_cast<std::size_t>(j)];
      if (aj.empty()) continue;
      const auto n = p_.blocks[k].size;
      CMatrix bj = CMatrix::Zero(n, n);
      for (const auto& e : aj.entries) bj.noalias() += e.value * x[k].col(e.row) * w[k].row(e.col);
      for (int i = 0; i < m_; ++i) {
        const auto& ai = p_.blocks[k].coefficients[static_cast<std::size_t>(i)];
        if (!ai.empty()) mat(i, j) += trace_product(ai, bj);
      }
    }
  }
  return (mat + mat.transpose()) * 0.5;
}

Solution Solver::run() {
  const std::size_t nb = p_.blocks.size();
  const RVector& b = p_.objective;
  Solution sol;

  double norm_c = 0;
  for (const auto& blk : p_.blocks) norm_c += blk.constant.squaredNorm();
  norm_c = std::sqrt(norm_c);
  const double norm_b = b.norm();

  if (m_ == 0) {
    sol.y = RVector();
    bool feasible = true;
    for (const auto& blk : p_.blocks) {
      sol.slack.push_back(blk.constant);
      sol.primal.push_back(CMatrix::Zero(blk.size, blk.size));
      if (blk.size > 0 && hermitian_eigen(blk.constant).values.minCoeff() < -o_.feasibility_tolerance)
        feasible = false;
    }
    sol.status = feasible ? SolveStatus::optimal : SolveStatus::infeasible;
    return sol;
  }

  // Starting point scaled to the data.
  double alpha = 0, max_a = 0;
  for (int i = 0; i < m_; ++i) {
    double na = 0;
    for (const auto& blk : p_.blocks) {
      const auto& a = blk.coefficients[static_cast<std::size_t>(i)];
      for (const auto& e : a.entries) na += std::norm(e.value);
    }
    na = std::sqrt(na);
    max_a = std::max(max_a, na);
    alpha = std::max(alpha, (1.0 + std::abs(b[i])) / (1.0 + na));
  }
  alpha *= n_total_;
  const double beta = (1.0 + std::max(max_a, norm_c)) / std::sqrt(static_cast<double>(n_total_));

  State s;
  s.y = RVector::Zero(m_);
  for (const auto& blk : p_.blocks) {
    s.x.push_back(10.0 * alpha * CMatrix::Identity(blk.size, blk.size));
    s.z.push_back(10.0 * beta * CMatrix::Identity(blk.size, blk.size));
  }

  std::vector<CMatrix> rd(nb), w(nb), t(nb), dx(nb), dz(nb), dx_pred(nb), dz_pred(nb);
  int it = 0;
  int stalled = 0;
  for (; it < o_.max_iterations; ++it) {
    double rd_norm = 0, pobj = 0, xz = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      rd[k] = p_.blocks[k].constant - apply_adjoint(p_.blocks[k], s.y) - s.z[k];
      rd_norm += rd[k].squaredNorm();
      pobj += trace_product(p_.blocks[k].constant, s.x[k]);
      xz += trace_product(s.x[k], s.z[k]);
    }
    rd_norm = std::sqrt(rd_norm);
    const RVector rp = b - apply_forward(s.x);
    const double dobj = b.dot(s.y);

    sol.primal_objective = pobj;
    sol.dual_objective = dobj;
    sol.gap = std::max(std::abs(pobj - dobj), std::abs(xz));
    sol.primal_infeasibility = rp.norm() / (1.0 + norm_b);
    sol.dual_infeasibility = rd_norm / (1.0 + norm_c);

    const double gap_scale = std::max(1.0, std::abs(dobj));
    if (sol.primal_infeasibility <= o_.feasibility_tolerance &&
        sol.dual_infeasibility <= o_.feasibility_tolerance && sol.gap <= o_.gap_tolerance * gap_scale) {
      sol.status = SolveStatus::optimal;
      break;
    }
    if (dobj > 1e8 * (1.0 + norm_c) && rd_norm <= 1e-6 * dobj) {
      sol.status = SolveStatus::unbounded;
      break;
    }
    if (-pobj > 1e8 * (1.0 + norm_b) && rp.norm() <= 1e-6 * -pobj) {
      sol.status = SolveStatus::infeasible;
      break;
    }

    bool ok = true;
    for (std::size_t k = 0; k < nb && ok; ++k) {
      w[k] = inverse_hpd(s.z[k]);
      ok = w[k].size() > 0 || p_.blocks[k].size == 0;
    }
    if (!ok) break;

    RMatrix schur_matrix = schur(s.x, w);
    Eigen::LLT<RMatrix> chol(schur_matrix);
    if (chol.info() != Eigen::Success) {
      const double shift = 1e-12 * std::max(1.0, schur_matrix.diagonal().cwiseAbs().maxCoeff());
      schur_matrix.diagonal().array() += shift;
      chol.compute(schur_matrix);
      if (chol.info() != Eigen::Success) break;
    }

    const double mu = xz / n_total_;
    auto direction = [&](double target_mu, bool corrector, RVector& dy) {
      for (std::size_t k = 0; k < nb; ++k) {
        t[k] = target_mu * w[k] - s.x[k] - s.x[k] * rd[k] * w[k];
        if (corrector) t[k] -= dx_pred[k] * dz_pred[k] * w[k];
      }
      dy = chol.solve(rp - apply_forward(t));
      for (std::size_t k = 0; k < nb; ++k) {
        const CMatrix aty = apply_adjoint(p_.blocks[k], dy);
        dz[k] = rd[k] - aty;
        dx[k] = hermitian_part(t[k] + s.x[k] * aty * w[k]);
      }
    };
    auto step_lengths = [&](double& ap, double& ad) {
      ap = kInfinity;
      ad = kInfinity;
      for (std::size_t k = 0; k < nb; ++k) {
        if (p_.blocks[k].size == 0) continue;
        ap = std::min(ap, max_step(s.x[k], dx[k]));
        ad = std::min(ad, max_step(s.z[k], dz[k]));
      }
    };

    RVector dy;
    direction(0.0, false, dy);
    double ap, ad;
    step_lengths(ap, ad);
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);
    double xz_aff = 0;
    for (std::size_t k = 0; k < nb; ++k)
      xz_aff += trace_product(CMatrix(s.x[k] + ap * dx[k]), CMatrix(s.z[k] + ad * dz[k]));
    const double sigma = std::clamp(std::pow(std::max(xz_aff, 0.0) / std::max(xz, 1e-300), 3.0), 0.0, 1.0);
    dx_pred = dx;
    dz_pred = dz;

    direction(sigma * mu, true, dy);
    step_lengths(ap, ad);
    ap = std::min(1.0, 0.95 * ap);
    ad = std::min(1.0, 0.95 * ad);
    if (!(ap > 1e-14) && !(ad > 1e-14)) break;
    // Progress has stopped at the limit of double precision.
    stalled = (ap < 1e-6 && ad < 1e-2) || (ad < 1e-6 && ap < 1e-2) ? stalled + 1 : 0;
    if (stalled >= 3) break;

    for (std::size_t k = 0; k < nb; ++k) {
      s.x[k] = hermitian_part(s.x[k] + ap * dx[k]);
      s.z[k] = hermitian_part(s.z[k] + ad * dz[k]);
    }
    s.y += ad * dy;
  }

  sol.iterations = it;
  sol.y = s.y;
  sol.primal = s.x;
  sol.slack.clear();
  for (std::size_t k = 0; k < nb; ++k)
    sol.slack.push_back(p_.blocks[k].constant - apply_adjoint(p_.blocks[k], s.y));
  return sol;
}

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  Solver solver(problem, options);
  return solver.run();
}

}  // namespace entmeas::sdp
