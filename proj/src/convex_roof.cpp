#include <algorithm>
#include <cmath>
#include <numbers>

#include "entmeas/random.hpp"
#include "entmeas/variational.hpp"

namespace entmeas {

namespace {

// Decompositions of rho are psi_k = sum_i U_ki sqrt(lambda_i) e_i for an
// isometry U (m x r); the ensemble average entropy is minimised over U.
class RoofObjective {
 public:
  RoofObjective(const CMatrix& rho, const Dims& dims) : da_(dims[0]), db_(dims[1]) {
    const auto eig = hermitian_eigen(rho);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
      if (eig.values[i] > tol::kEigenCutoff) kept.push_back(i);
    w_.resize(rho.rows(), static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c)
      w_.col(static_cast<Eigen::Index>(c)) = std::sqrt(eig.values[kept[c]]) * eig.vectors.col(kept[c]);
  }

  int rank() const { return static_cast<int>(w_.cols()); }

  /// Average entropy (bits) and, when requested, its Euclidean gradient in U.
  double evaluate(const CMatrix& u, CMatrix* gradient) const {
    const CMatrix psi = w_ * u.transpose();  // column k is psi_k (unnormalised)
    double total = 0;
    if (gradient) gradient->setZero(u.rows(), u.cols());
    for (Eigen::Index k = 0; k < psi.cols(); ++k) {
      const CVector v = psi.col(k);
      const double p = v.squaredNorm();
      if (p < 1e-300) continue;
      // Reshape to d_A x d_B; the reduced operator on A is M M^dag.
      const CMatrix mk = Eigen::Map<const CMatrix>(v.data(), db_, da_).transpose();
      const auto eig = hermitian_eigen(mk * mk.adjoint());
      double s = 0;
      RVector logs(eig.values.size());
      for (Eigen::Index i = 0; i < logs.size(); ++i) {
        const double x = eig.values[i];
        logs[i] = x > 1e-300 ? std::log(x) : 0.0;
        if (x > 1e-300) s -= x * logs[i];
      }
      total += s + p * std::log(p);
      if (gradient) {
        // d/d psi^* of the term is (ln p I - ln X_A) (x) I applied to psi.
        const CMatrix gamma =
            std::log(p) * CMatrix::Identity(da_, da_) - eig.vectors * logs.asDiagonal() * eig.vectors.adjoint();
        const CMatrix gm = gamma * mk;
        const CVector gv = Eigen::Map<const CVector>(CMatrix(gm.transpose()).data(), v.size());
        gradient->row(k) = 2.0 * (w_.adjoint() * gv).transpose();
      }
    }
    if (gradient) *gradient /= std::numbers::ln2;
    return total / std::numbers::ln2;
  }

 private:
  int da_;
  int db_;
  CMatrix w_;
};

// Orthonormalises the columns of a (thin QR with positive diagonal).
CMatrix retract(const CMatrix& a) {
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ() * CMatrix::Identity(a.rows(), a.cols());
  const CMatrix r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const Complex diag = r(j, j);
    if (std::abs(diag) > 0) q.col(j) *= diag / std::abs(diag);
  }
  return q;
}

struct RoofRun {
  double value = kInfinity;
  int iterations = 0;
  double gradient_norm = 0;
};

RoofRun descend(const RoofObjective& f, CMatrix u, int max_iterations) {
  RoofRun run;
  CMatrix g;
  double value = f.evaluate(u, &g);
  double step = 0.5;
  for (; run.iterations < max_iterations; ++run.iterations) {
    const CMatrix sym = (u.adjoint() * g + g.adjoint() * u) / 2.0;
    const CMatrix xi = g - u * sym;  // Riemannian gradient on the Stiefel manifold
    const double slope = xi.squaredNorm();
    run.gradient_norm = std::sqrt(slope);
    if (slope < 1e-18) break;
    bool moved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      const CMatrix trial = retract(u - step * xi);
      CMatrix trial_g;
      const double trial_value = f.evaluate(trial, &trial_g);
      if (trial_value <= value - 1e-4 * step * slope) {
        moved = value - trial_value > 1e-15;
        u = trial;
        g = trial_g;
        value = trial_value;
        break;
      }
    }
    if (!moved) break;
    step = std::min(step * 2.0, 10.0);
  }
  run.value = value;
  return run;
}

}  // namespace

MeasureResult eof_convex_roof(const DensityOperator& rho, const Cut& cut, std::optional<int> decomposition_size,
                              const SolverConfig& cfg) {
  cfg.validate();
  const DensityOperator bi = as_bipartite(rho, cut);
  if (bi.dimension() > 16) throw ArgumentError("eof_convex_roof: total dimension above 16");
  const RoofObjective f(bi.matrix(), bi.dims());
  const int r = f.rank();
  const int m = decomposition_size.value_or(r * r);
  if (m < r) throw ArgumentError("eof_convex_roof: decomposition size below rank(rho)");

  // Restart 0 starts from the eigen-decomposition; the rest are Haar random.
  const int restarts = cfg.restarts_or(10);
  std::vector<RoofRun> runs(static_cast<std::size_t>(restarts));
  for_each_index(cfg.execution, restarts, [&](int k) {
    CMatrix u;
    if (k == 0) {
      u = CMatrix::Identity(m, r);
    } else {
      Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(k));
      u = random_unitary(rng, m).leftCols(r);
    }
    runs[static_cast<std::size_t>(k)] = descend(f, u, cfg.max_iterations * 10);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].value < runs[best].value - 1e-12) best = k;

  MeasureResult out;
  out.status = Status::best_effort;
  out.value = std::max(0.0, runs[best].value);
  out.iterations = runs[best].iterations;
  out.gap = runs[best].gradient_norm;
  out.notes.push_back("upper bound from a decomposition of size " + std::to_string(m));
  return out;
}

}  // namespace entmeas
