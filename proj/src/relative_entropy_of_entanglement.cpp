#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "entmeas/closed_form.hpp"
#include "entmeas/variational.hpp"
#include "matrix_calculus.hpp"

namespace entmeas {

namespace {

constexpr double kFloor = 1e-15;
constexpr int kPairwiseSteps = 10;
constexpr int kBarrierSteps = 200;
constexpr int kPolishSteps = 12;
constexpr double kDropWeight = 1e-12;

class ReeObjective {
 public:
  explicit ReeObjective(const CMatrix& rho) : rho_(rho), neg_entropy_(-spectral_entropy(rho)) {}

  double value(const CMatrix& sigma) const {
    return neg_entropy_ + detail::cross_entropy(rho_, sigma, kFloor);
  }

  CMatrix gradient(const CMatrix& sigma) const {
    auto eig = hermitian_eigen(sigma);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) eig.values[i] = std::max(eig.values[i], kFloor);
    return hermitian_part(-detail::log_derivative(eig, rho_) / std::numbers::ln2);
  }

 private:
  CMatrix rho_;
  double neg_entropy_;
};

struct ActiveSet {
  std::vector<CMatrix> atoms;
  std::vector<double> weights;

  CMatrix combination() const {
    CMatrix out = CMatrix::Zero(atoms.front().rows(), atoms.front().cols());
    for (std::size_t i = 0; i < atoms.size(); ++i) out += weights[i] * atoms[i];
    return out;
  }

  void prune() {
    std::size_t k = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (weights[i] > kDropWeight) {
        atoms[k] = std::move(atoms[i]);
        weights[k++] = weights[i];
      }
    atoms.resize(k);
    weights.resize(k);
    double total = 0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
  }
};

// Moves weight from the worst active atom to the best one while that helps.
void pairwise_corrections(const ReeObjective& f, ActiveSet& set, CMatrix& sigma, double& value) {
  for (int step = 0; step < kPairwiseSteps && set.atoms.size() > 1; ++step) {
    const CMatrix g = f.gradient(sigma);
    std::size_t toward = 0, away = 0;
    std::vector<double> score(set.atoms.size());
    for (std::size_t i = 0; i < set.atoms.size(); ++i) {
      score[i] = detail::trace_product(g, set.atoms[i]);
      if (score[i] < score[toward]) toward = i;
      if (score[i] > score[away]) away = i;
    }
    if (score[away] - score[toward] <= 1e-12) return;
    const CMatrix direction = set.atoms[toward] - set.atoms[away];
    const double cap = set.weights[away];
    const double step_size =
        detail::golden_section([&](double t) { return f.value(sigma + t * direction); }, 0.0, cap);
    const CMatrix candidate = sigma + step_size * direction;
    const double candidate_value = f.value(candidate);
    if (step_size <= 0 || candidate_value >= value) return;
    set.weights[toward] += step_size;
    set.weights[away] -= step_size;
    sigma = candidate;
    value = candidate_value;
    set.prune();
  }
}


double sparse_trace(const CMatrix& g, const sdp::SparseHermitian& b) {
  double acc = 0;
  for (const auto& e : b.entries) acc += (g(e.col, e.row) * e.value).real();
  return acc;
}

CMatrix sparse_times_dense(const sdp::SparseHermitian& b, const CMatrix& v) {
  CMatrix out = CMatrix::Zero(v.rows(), v.cols());
  for (const auto& e : b.entries) out.row(e.row) += e.value * v.row(e.col);
  return out;
}

// Log-barrier path following for min -tr(rho ln sigma) over the interior of
// the PPT states, by damped Newton steps in a traceless Hermitian basis.
// Stops once the barrier bound 2 d mu on the Frank-Wolfe gap is below
// target_gap; returns nullopt if Newton stalls before that.
class BarrierPath {
 public:
  BarrierPath(const CMatrix& rho, const Dims& dims)
      : rho_(rho), dims_(dims), d_(static_cast<int>(rho.rows())) {
    sigma_.offset = CMatrix::Identity(d_, d_) / static_cast<double>(d_);
    sigma_.directions = traceless_hermitian_basis(d_);
    tau_.offset = sigma_.offset;
    for (const auto& b : sigma_.directions) tau_.directions.push_back(partial_transpose(b, dims_, kPartyB));
  }

  std::optional<CMatrix> follow(double target_gap, int max_steps, int& steps) {
    const auto n = static_cast<Eigen::Index>(sigma_.directions.size());
    RVector y = RVector::Zero(n);
    double mu = 1.0;
    int polish = 0;
    for (steps = 0; steps < max_steps; ++steps) {
      const bool last = 2.0 * d_ * mu <= target_gap;
      if (last && ++polish > kPolishSteps) return sigma_.evaluate(y);
      RVector g;
      RMatrix h;
      derivatives(y, mu, g, h);
      const Eigen::LDLT<RMatrix> ldlt(h);
      if (ldlt.info() != Eigen::Success) return last ? std::optional(sigma_.evaluate(y)) : std::nullopt;
      const RVector delta = -ldlt.solve(g);
      const double decrement = -g.dot(delta);
      if (!std::isfinite(decrement)) return last ? std::optional(sigma_.evaluate(y)) : std::nullopt;
      // The last centring is polished much further: stiff directions near
      // rank-deficient optima leave first-order residue that a loose
      // decrement test misses.
      if (decrement < (last ? 1e-22 : 1e-9)) {
        if (last) return sigma_.evaluate(y);
        mu *= 0.1;
        continue;
      }
      const double phi0 = barrier_value(y, mu);
      double alpha = 1.0;
      bool accepted = false;
      for (int k = 0; k < 60; ++k, alpha *= 0.5) {
        const RVector trial = y + alpha * delta;
        const double phi = barrier_value(trial, mu);
        if (phi <= phi0 - 0.25 * alpha * decrement) {
          y = trial;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Newton cannot improve further at this mu.
        if (last) return sigma_.evaluate(y);
        mu *= 0.1;
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr int kPartyB[] = {1};

  double barrier_value(const RVector& y, double mu) const {
    const auto es = hermitian_eigen(sigma_.evaluate(y));
    const auto et = hermitian_eigen(tau_.evaluate(y));
    if (es.values.minCoeff() <= 0 || et.values.minCoeff() <= 0) return kInfinity;
    const CMatrix rt = es.vectors.adjoint() * rho_ * es.vectors;
    double value = 0;
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
      value -= rt(i, i).real() * std::log(es.values[i]);
      value -= mu * (std::log(es.values[i]) + std::log(et.values[i]));
    }
    return value;
  }

  void derivatives(const RVector& y, double mu, RVector& g, RMatrix& h) const {
    const auto n = static_cast<Eigen::Index>(sigma_.directions.size());
    const auto es = hermitian_eigen(sigma_.evaluate(y));
    const auto et = hermitian_eigen(tau_.evaluate(y));
    const CMatrix& v = es.vectors;
    const RVector& lam = es.values;
    const CMatrix sigma_inv = v * lam.cwiseInverse().asDiagonal() * v.adjoint();
    const CMatrix tau_inv = et.vectors * et.values.cwiseInverse().asDiagonal() * et.vectors.adjoint();
    const CMatrix rt = v.adjoint() * rho_ * v;
    const CMatrix grad_f = -detail::log_derivative(es, rho_);

    std::vector<double> f2(static_cast<std::size_t>(d_ * d_ * d_));
    for (int i = 0; i < d_; ++i)
      for (int k = 0; k < d_; ++k)
        for (int j = 0; j < d_; ++j)
          f2[static_cast<std::size_t>((i * d_ + k) * d_ + j)] = detail::log_divided2(lam[i], lam[k], lam[j]);

    g.resize(n);
    h.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      const auto& b = sigma_.directions[static_cast<std::size_t>(a)];
      const auto& bt = tau_.directions[static_cast<std::size_t>(a)];
      g[a] = sparse_trace(grad_f, b) - mu * (sparse_trace(sigma_inv, b) + sparse_trace(tau_inv, bt));
      const CMatrix x = v.adjoint() * sparse_times_dense(b, v);
      CMatrix m = CMatrix::Zero(d_, d_);
      for (int i = 0; i < d_; ++i)
        for (int j = 0; j < d_; ++j) {
          const Complex r = rt(j, i);
          if (r == Complex(0)) continue;
          for (int k = 0; k < d_; ++k) {
            const Complex c = f2[static_cast<std::size_t>((i * d_ + k) * d_ + j)] * r;
            m(j, k) += c * x(i, k);
            m(k, i) += c * x(k, j);
          }
        }
      // The entropy term is -tr(rho D^2 ln sigma[X, Y]).
      const CMatrix entropy_row = -(v * m * v.adjoint());
      const CMatrix sigma_row = mu * sigma_inv * sparse_times_dense(b, sigma_inv);
      const CMatrix tau_row = mu * tau_inv * sparse_times_dense(bt, tau_inv);
      for (Eigen::Index c = 0; c < n; ++c) {
        const auto& bc = sigma_.directions[static_cast<std::size_t>(c)];
        h(a, c) = sparse_trace(entropy_row, bc) + sparse_trace(sigma_row, bc) +
                  sparse_trace(tau_row, tau_.directions[static_cast<std::size_t>(c)]);
      }
    }
    h = (h + h.transpose()) / 2.0;
  }

  CMatrix rho_;
  Dims dims_;
  int d_;
  AffineHermitian sigma_;
  AffineHermitian tau_;
};

}  // namespace

void SolverConfig::validate() const {
  if (max_iterations <= 0) throw ArgumentError("SolverConfig: max_iterations must be positive");
  if (!(gap_tolerance > 0)) throw ArgumentError("SolverConfig: gap_tolerance must be positive");
  if (restarts && *restarts <= 0) throw ArgumentError("SolverConfig: restarts must be positive");
}

MeasureResult relative_entropy_of_entanglement(const DensityOperator& rho, const Cut& cut, FreeSet set,
                                               const SolverConfig& cfg, FrankWolfeTrace* trace) {
  cfg.validate();
  const DensityOperator bi = as_bipartite(rho, cut);
  const Dims& dims = bi.dims();
  const int d = bi.dimension();
  if (d > 36) throw ArgumentError("relative_entropy_of_entanglement: total dimension above 36");

  MeasureResult out;
  out.status = Status::converged;
  if (!ppt_is_exact(dims))
    out.notes.push_back(set == FreeSet::ppt ? "PPT set is an outer relaxation of the separable set for these dims"
                                            : "outer relaxation: value is a lower bound on the separable-set value");

  // PPT inputs are their own closest state.
  if (hermitian_eigen(partial_transpose(bi, 1)).values.minCoeff() >= -tol::kPsd) {
    out.value = 0;
    out.witness_state = bi.matrix();
    if (trace) {
      trace->objective.push_back(0);
      trace->gap.push_back(0);
    }
    return out;
  }

  const ReeObjective f(bi.matrix());
  ActiveSet active;
  int barrier_steps = 0;
  const auto warm = BarrierPath(bi.matrix(), dims).follow(cfg.gap_tolerance / 10.0, kBarrierSteps, barrier_steps);
  active.atoms.push_back(warm ? detail::clean_state(*warm) : CMatrix::Identity(d, d) / static_cast<double>(d));
  active.weights.push_back(1.0);
  if (!warm) out.notes.push_back("barrier warm start failed; plain Frank-Wolfe from the maximally mixed state");
  CMatrix sigma = active.atoms.front();
  double value = f.value(sigma);

  sdp::Options lmo_options;
  lmo_options.gap_tolerance = 1e-9;
  bool converged = false;
  double gap = kInfinity;
  int it = 0;
  for (; it < cfg.max_iterations; ++it) {
    const CMatrix g = f.gradient(sigma);
    const auto lmo = minimize_linear(g, dims, ConeKind::separable_outer, lmo_options);
    gap = std::max(0.0, detail::trace_product(g, sigma) - lmo.lower_bound);
    if (trace) {
      trace->objective.push_back(value);
      trace->gap.push_back(gap);
    }
    if (gap <= cfg.gap_tolerance) {
      converged = true;
      break;
    }
    const CMatrix atom = detail::clean_state(lmo.argmin);
    const CMatrix direction = atom - sigma;
    const double step =
        detail::golden_section([&](double t) { return f.value(sigma + t * direction); }, 0.0, 1.0);
    const CMatrix candidate = sigma + step * direction;
    const double candidate_value = f.value(candidate);
    if (step > 0 && candidate_value < value) {
      for (double& w : active.weights) w *= 1.0 - step;
      active.atoms.push_back(atom);
      active.weights.push_back(step);
      active.prune();
      sigma = candidate;
      value = candidate_value;
    }
    pairwise_corrections(f, active, sigma, value);
  }

  out.iterations = barrier_steps + it;
  out.gap = gap;
  const CMatrix closest = hermitian_part(sigma);
  out.witness_state = closest;
  out.value = std::max(0.0, relative_entropy(bi.matrix(), closest));
  if (!std::isfinite(out.value)) out.value = value;
  if (!converged) {
    out.status = Status::best_effort;
    out.solver_converged = false;
    out.notes.push_back("iteration limit reached before the Frank-Wolfe gap tolerance");
  }
  return out;
}

MeasureResult relative_entropy_of_entanglement(const DensityOperator& rho, const Cut& cut, FreeSet set,
                                               const SolverConfig& cfg) {
  return relative_entropy_of_entanglement(rho, cut, set, cfg, nullptr);
}

double werner_regularized_ree(int d, double p) {
  if (d < 2) throw ArgumentError("werner_regularized_ree: d must be at least 2");
  if (!(p > 0.5 && p <= 1.0)) throw ArgumentError("werner_regularized_ree: p must lie in (1/2, 1]");
  const double breakpoint = (d + 2.0) / (2.0 * d);
  if (p <= breakpoint) return 1.0 - binary_entropy(p);
  const double tail = 1.0 - p == 0.0 ? 0.0 : (1.0 - p) * std::log2((d - 2.0) / (d + 2.0));
  return std::log2((d + 2.0) / d) + tail;
}

}  // namespace entmeas
