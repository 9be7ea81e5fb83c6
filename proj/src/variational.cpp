#include "entmeas/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "entmeas/random.hpp"
#include "matrix_calculus.hpp"

namespace entmeas {

namespace {

constexpr int kPartyB[] = {1};

void require_two_party(const Dims& dims, const CMatrix& h, const char* what) {
  if (dims.size() != 2) throw ArgumentError(std::string(what) + ": expected a two-party operator");
  if (total_dimension(dims) != h.rows() || h.rows() != h.cols())
    throw ArgumentError(std::string(what) + ": dims do not match the operator");
}

Status from_solver(sdp::SolveStatus s) {
  return s == sdp::SolveStatus::optimal ? Status::converged : Status::best_effort;
}

void note_relaxation(MeasureResult& r, const Dims& dims) {
  if (!ppt_is_exact(dims)) r.notes.push_back("outer relaxation: PPT replaces separable, value is a lower bound");
}

void note_solver(MeasureResult& r, sdp::SolveStatus s) {
  if (s != sdp::SolveStatus::optimal) {
    r.solver_converged = false;
    r.notes.push_back(std::string("sdp status: ") + sdp::to_string(s));
  }
}

}  // namespace

BaseNormResult base_norm(const CMatrix& h, const Dims& dims, ConeSpec x, ConeSpec y, const SolverConfig& cfg) {
  cfg.validate();
  require_two_party(dims, h, "base_norm");
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::kHermitian) throw ValidationError("hermitian", herm, "base_norm: h is not Hermitian");
  const int d = static_cast<int>(h.rows());

  // Q = b Delta ranges over Y, P = h + Q = a Omega must lie in X.
  AffineHermitian q;
  q.offset = CMatrix::Zero(d, d);
  q.directions = hermitian_basis(d);
  AffineHermitian p = q;
  p.offset = hermitian_part(h);
  const int m = static_cast<int>(q.directions.size());

  LmiBuilder builder(m);
  require_in_cone(builder, q, y.kind, dims);
  require_in_cone(builder, p, x.kind, dims);
  RVector objective = RVector::Zero(m);
  for (int i = 0; i < d; ++i) objective[i] = -1.0 / y.normalization;  // diagonal units carry the trace

  sdp::Options options;
  options.max_iterations = std::max(100, cfg.max_iterations);
  const auto sol = sdp::solve(std::move(builder).finish(std::move(objective)), options);
  if (sol.status == sdp::SolveStatus::infeasible || sol.status == sdp::SolveStatus::unbounded)
    throw InternalError(std::string("base_norm: decomposition problem reported ") + sdp::to_string(sol.status));

  BaseNormResult out;
  out.status = sol.status;
  out.iterations = sol.iterations;
  out.gap = sol.gap;
  const CMatrix qm = q.evaluate(sol.y);
  const CMatrix pm = p.evaluate(sol.y);
  out.b = std::max(0.0, qm.trace().real() / y.normalization);
  out.a = std::max(0.0, pm.trace().real() / x.normalization);
  if (out.b < tol::kEigenCutoff) out.b = 0;
  out.norm = out.a + out.b;
  out.omega = out.a > 0 ? CMatrix(pm / out.a) : CMatrix::Zero(d, d);
  out.delta = out.b > 0 ? CMatrix(qm / out.b) : CMatrix::Zero(d, d);
  return out;
}

MeasureResult robustness(const DensityOperator& rho, const Cut& cut, Noise noise, const SolverConfig& cfg) {
  const DensityOperator bi = as_bipartite(rho, cut);
  const auto target = ConeSpec::of(ConeKind::separable_outer);
  const auto noise_cone = ConeSpec::of(noise == Noise::global ? ConeKind::all_psd : ConeKind::separable_outer);
  const auto bn = base_norm(bi.matrix(), bi.dims(), target, noise_cone, cfg);
  MeasureResult r;
  r.value = bn.b;
  r.status = from_solver(bn.status);
  r.gap = bn.gap;
  r.iterations = bn.iterations;
  if (bn.b > 0) r.witness_state = bn.delta;
  note_relaxation(r, bi.dims());
  note_solver(r, bn.status);
  return r;
}

SeparableApproximation best_separable_approximation(const DensityOperator& rho, const Cut& cut,
                                                    const SolverConfig& cfg) {
  const DensityOperator bi = as_bipartite(rho, cut);
  if (bi.dimension() > 36) throw ArgumentError("best_separable_approximation: total dimension above 36");
  const auto bn = base_norm(bi.matrix(), bi.dims(), ConeSpec::of(ConeKind::separable_outer),
                            ConeSpec::of(ConeKind::negated_psd), cfg);
  SeparableApproximation out;
  out.weight = std::min(1.0, bn.b);
  out.separable_part = bn.a * bn.omega;
  out.remainder = bi.matrix() - out.separable_part;
  out.result.value = out.weight;
  out.result.status = from_solver(bn.status);
  out.result.gap = bn.gap;
  out.result.iterations = bn.iterations;
  out.result.witness_state = out.separable_part;
  note_relaxation(out.result, bi.dims());
  note_solver(out.result, bn.status);
  return out;
}

MeasureResult geometric_measure(const PureState& psi, const SolverConfig& cfg) {
  cfg.validate();
  if (psi.dimension() > 64) throw ArgumentError("geometric_measure: total dimension above 64");
  const Dims& dims = psi.dims();
  const auto parties = static_cast<int>(dims.size());
  const int total = psi.dimension();
  const CVector& amp = psi.amplitudes();
  std::vector<int> strides(dims.size(), 1);
  for (int k = parties - 2; k >= 0; --k)
    strides[static_cast<std::size_t>(k)] = strides[static_cast<std::size_t>(k) + 1] * dims[static_cast<std::size_t>(k) + 1];
  auto digit = [&](int index, int k) {
    return (index / strides[static_cast<std::size_t>(k)]) % dims[static_cast<std::size_t>(k)];
  };

  struct Run {
    double overlap = 0;
    int sweeps = 0;
    std::vector<CVector> factors;
  };
  const int restarts = cfg.restarts_or(50);
  std::vector<Run> runs(static_cast<std::size_t>(restarts));
  for_each_index(cfg.execution, restarts, [&](int r) {
    Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(r));
    Run run;
    for (int k = 0; k < parties; ++k) run.factors.push_back(random_complex_gaussian(rng, dims[static_cast<std::size_t>(k)]).normalized());
    double previous = -1;
    for (; run.sweeps < cfg.max_iterations; ++run.sweeps) {
      for (int k = 0; k < parties; ++k) {
        CVector c = CVector::Zero(dims[static_cast<std::size_t>(k)]);
        for (int idx = 0; idx < total; ++idx) {
          Complex w = amp[idx];
          for (int j = 0; j < parties; ++j)
            if (j != k) w *= std::conj(run.factors[static_cast<std::size_t>(j)][digit(idx, j)]);
          c[digit(idx, k)] += w;
        }
        const double norm = c.norm();
        if (norm > 0) run.factors[static_cast<std::size_t>(k)] = c / norm;
        run.overlap = norm * norm;
      }
      if (run.overlap - previous < 1e-12) break;
      previous = run.overlap;
    }
    runs[static_cast<std::size_t>(r)] = std::move(run);
  });

  // Lowest G (highest overlap) wins; near-ties keep the lowest restart index.
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].overlap > runs[best].overlap + 1e-12) best = r;
  int agreeing = 0;
  for (const auto& run : runs)
    if (runs[best].overlap - run.overlap <= 1e-9) ++agreeing;

  MeasureResult out;
  out.status = Status::best_effort;
  out.value = std::max(0.0, -std::log2(std::min(1.0, runs[best].overlap)));
  out.iterations = runs[best].sweeps;
  out.witness_vectors = runs[best].factors;
  out.notes.push_back("restarts " + std::to_string(restarts) + ", best overlap reached by " +
                      std::to_string(agreeing));
  out.notes.push_back("upper bound: overlap found is a lower bound on the maximal product overlap");
  return out;
}

namespace {

class RainsObjective {
 public:
  RainsObjective(const CMatrix& rho, const Dims& dims)
      : rho_(rho), dims_(dims), neg_entropy_(-spectral_entropy(rho)) {}

  double value(const CMatrix& sigma) const {
    return neg_entropy_ + detail::cross_entropy(rho_, sigma, 1e-15) +
           std::log2(trace_norm(partial_transpose(sigma, dims_, kPartyB)));
  }

  CMatrix gradient(const CMatrix& sigma) const {
    auto eig = hermitian_eigen(sigma);
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) eig.values[i] = std::max(eig.values[i], 1e-15);
    const CMatrix relative = -detail::log_derivative(eig, rho_);
    const auto pt = hermitian_eigen(partial_transpose(sigma, dims_, kPartyB));
    RVector sign(pt.values.size());
    for (Eigen::Index i = 0; i < sign.size(); ++i) sign[i] = pt.values[i] >= 0 ? 1.0 : -1.0;
    const double norm = pt.values.cwiseAbs().sum();
    const CMatrix sgn = pt.vectors * sign.asDiagonal() * pt.vectors.adjoint();
    return hermitian_part(relative + partial_transpose(sgn, dims_, kPartyB) / norm) / std::numbers::ln2;
  }

 private:
  CMatrix rho_;
  Dims dims_;
  double neg_entropy_;
};

CMatrix from_factor(const CMatrix& a) {
  const CMatrix s = a * a.adjoint();
  return hermitian_part(s / s.trace().real());
}

struct Descent {
  double value = kInfinity;
  CMatrix sigma;
  int iterations = 0;
};

// Gradient descent on sigma = A A^dag / tr(A A^dag) with Armijo backtracking.
Descent descend(const RainsObjective& f, CMatrix a, int max_iterations) {
  Descent out;
  CMatrix sigma = from_factor(a);
  double value = f.value(sigma);
  double step = 1.0;
  for (; out.iterations < max_iterations; ++out.iterations) {
    const CMatrix g = f.gradient(sigma);
    const double t = (a * a.adjoint()).trace().real();
    const double gs = detail::trace_product(g, sigma);
    const CMatrix grad = 2.0 * (g - gs * CMatrix::Identity(g.rows(), g.cols())) * a / t;
    const double slope = grad.squaredNorm();
    if (slope < 1e-20) break;
    bool moved = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      const CMatrix trial = a - step * grad;
      const CMatrix trial_sigma = from_factor(trial);
      const double trial_value = f.value(trial_sigma);
      if (trial_value <= value - 1e-4 * step * slope) {
        const double gain = value - trial_value;
        a = trial;
        sigma = trial_sigma;
        value = trial_value;
        moved = gain > 1e-13;
        break;
      }
    }
    if (!moved) break;
    step *= 2.0;
  }
  out.value = value;
  out.sigma = sigma;
  return out;
}

}  // namespace

MeasureResult rains_bound(const DensityOperator& rho, const Cut& cut, const SolverConfig& cfg) {
  cfg.validate();
  const DensityOperator bi = as_bipartite(rho, cut);
  const int d = bi.dimension();
  if (d > 16) throw ArgumentError("rains_bound: total dimension above 16");
  const RainsObjective f(bi.matrix(), bi.dims());

  // Seeds: rho itself, the closest PPT state, then random factors.
  const auto ree = relative_entropy_of_entanglement(bi, default_cut(), FreeSet::ppt, cfg);
  const CMatrix closest = *ree.witness_state;
  const CMatrix identity = CMatrix::Identity(d, d) / static_cast<double>(d);
  auto root = [](const CMatrix& m) { return spectral_map(m, [](double v) { return std::sqrt(std::max(v, 0.0)); }); };

  const int restarts = cfg.restarts_or(20);
  std::vector<Descent> runs(static_cast<std::size_t>(restarts) + 2);
  for_each_index(cfg.execution, restarts + 2, [&](int r) {
    CMatrix a;
    if (r == 0) {
      a = root((1.0 - 1e-6) * bi.matrix() + 1e-6 * identity);
    } else if (r == 1) {
      a = root((1.0 - 1e-9) * closest + 1e-9 * identity);
    } else {
      Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(r - 2));
      a = random_complex_gaussian(rng, d, d);
    }
    runs[static_cast<std::size_t>(r)] = descend(f, a, cfg.max_iterations);
  });

  // The unperturbed seeds are candidates too, so the result never exceeds
  // the relative entropy value at the closest PPT state.
  Descent best;
  best.value = f.value(closest);
  best.sigma = closest;
  const double at_rho = f.value(bi.matrix());
  if (at_rho < best.value - 1e-12) {
    best.value = at_rho;
    best.sigma = bi.matrix();
  }
  for (const auto& run : runs)
    if (run.value < best.value - 1e-12) best = run;

  MeasureResult out;
  out.status = Status::best_effort;
  out.value = std::max(0.0, best.value);
  out.iterations = best.iterations;
  out.witness_state = best.sigma;
  out.solver_converged = ree.solver_converged;
  out.notes.push_back("non-convex objective: multi-start local search, " + std::to_string(restarts) +
                      " random restarts");
  return out;
}

MeasureResult witness_violation(const DensityOperator& rho, const Cut& cut) {
  const DensityOperator bi = as_bipartite(rho, cut);
  const auto eig = hermitian_eigen(partial_transpose(bi, 1));
  MeasureResult out;
  out.status = Status::exact;
  if (eig.values[0] >= -tol::kPsd) {
    out.notes.push_back("PPT input: no partial-transpose witness");
    return out;
  }
  const CVector eta = eig.vectors.col(0);
  const CMatrix w = partial_transpose(CMatrix(eta * eta.adjoint()), bi.dims(), kPartyB);
  out.value = std::max(0.0, -detail::trace_product(w, bi.matrix()));
  out.witness_state = w;

  sdp::Options tight;
  tight.gap_tolerance = 1e-10;
  tight.max_iterations = 200;
  const auto check = minimize_linear(w, bi.dims(), ConeKind::separable_outer, tight);
  out.notes.push_back("min over PPT states of tr(W sigma) >= " + std::to_string(check.lower_bound));
  if (check.lower_bound < -1e-8) {
    out.solver_converged = false;
    out.notes.push_back("witness certificate weaker than -1e-8");
  }
  return out;
}

MeasureResult squashed_eval(const DensityOperator& rho_abe, const std::optional<DensityOperator>& target) {
  if (rho_abe.parties() != 3) throw ArgumentError("squashed_eval: expected a three-party operator A, B, E");
  if (target) {
    const int keep[] = {0, 1};
    const DensityOperator marginal = partial_trace(rho_abe, keep);
    if (marginal.dims() != target->dims())
      throw ArgumentError("squashed_eval: extension dims do not match the target");
    const double residual = (marginal.matrix() - target->matrix()).cwiseAbs().maxCoeff();
    if (residual > 1e-8)
      throw ValidationError("extension_marginal", residual, "squashed_eval: tr_E does not reproduce the target");
  }
  MeasureResult out;
  out.status = Status::best_effort;
  out.value = 0.5 * conditional_mutual_information(rho_abe);
  out.notes.push_back("upper bound from the supplied extension only");
  return out;
}

PureState antisymmetric_qutrit_extension() {
  CVector amp = CVector::Zero(27);
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  for (int p = 0; p < 6; ++p) {
    const double sign = p < 3 ? 1.0 : -1.0;
    amp[perms[p][0] * 9 + perms[p][1] * 3 + perms[p][2]] = sign / std::sqrt(6.0);
  }
  return PureState({3, 3, 3}, amp);
}

}  // namespace entmeas
