#pragma once

#include <cstdint>
#include <optional>

#include "entmeas/cones.hpp"
#include "entmeas/parallel.hpp"
#include "entmeas/state.hpp"

namespace entmeas {

struct SolverConfig {
  int max_iterations = 300;
  double gap_tolerance = 1e-6;
  /// Unset means the per-measure default (geometric 50, Rains 20, roof 10).
  std::optional<int> restarts;
  std::uint64_t seed = 0;
  Execution execution = Execution::parallel;

  void validate() const;
  int restarts_or(int fallback) const { return restarts.value_or(fallback); }
};

enum class FreeSet { ppt, separable_outer };

/// min_sigma S(rho || sigma) over PPT states by fully-corrective Frank-Wolfe.
/// witness_state holds the closest state found; gap is the Frank-Wolfe gap,
/// so value - gap is a certified lower bound.
MeasureResult relative_entropy_of_entanglement(const DensityOperator& rho, const Cut& cut = default_cut(),
                                               FreeSet set = FreeSet::ppt, const SolverConfig& cfg = {});

/// Per-iteration objective and Frank-Wolfe gap.
struct FrankWolfeTrace {
  std::vector<double> objective;
  std::vector<double> gap;
};

MeasureResult relative_entropy_of_entanglement(const DensityOperator& rho, const Cut& cut, FreeSet set,
                                               const SolverConfig& cfg, FrankWolfeTrace* trace);

/// Regularised relative entropy of entanglement of the d x d Werner state
/// p sigma_a + (1 - p) sigma_s, for p in (1/2, 1].
double werner_regularized_ree(int d, double p);

struct BaseNormResult {
  double a = 0;
  double b = 0;  // R_{X,Y}
  double norm = 0;
  CMatrix omega;  // normalised member of X (zero when a == 0)
  CMatrix delta;  // normalised member of Y (zero when b == 0)
  sdp::SolveStatus status = sdp::SolveStatus::max_iterations;
  double gap = 0;
  int iterations = 0;
};

/// h = a omega - b delta with omega in X, delta in Y, minimising b.
BaseNormResult base_norm(const CMatrix& h, const Dims& dims, ConeSpec x, ConeSpec y,
                         const SolverConfig& cfg = {});

enum class Noise { global, separable };

/// Minimal t with (rho + t sigma) / (1 + t) PPT; sigma any state (global) or
/// PPT (separable).
MeasureResult robustness(const DensityOperator& rho, const Cut& cut = default_cut(),
                         Noise noise = Noise::global, const SolverConfig& cfg = {});

struct SeparableApproximation {
  double weight = 0;  // tr(rho - A)
  CMatrix separable_part;
  CMatrix remainder;
  MeasureResult result;
};

/// Largest PPT A with 0 <= A <= rho.
SeparableApproximation best_separable_approximation(const DensityOperator& rho, const Cut& cut = default_cut(),
                                                    const SolverConfig& cfg = {});

/// Upper bound on the entanglement of formation from the best decomposition
/// of size m (default rank^2) found by Riemannian descent over isometries.
MeasureResult eof_convex_roof(const DensityOperator& rho, const Cut& cut = default_cut(),
                              std::optional<int> decomposition_size = std::nullopt,
                              const SolverConfig& cfg = {});

/// -log2 of the largest overlap with a product state found by alternating
/// maximisation; an upper bound on the true value.
MeasureResult geometric_measure(const PureState& psi, const SolverConfig& cfg = {});

/// min_sigma S(rho || sigma) + log2 ||sigma^{T_B}||_1 by multi-start descent.
MeasureResult rains_bound(const DensityOperator& rho, const Cut& cut = default_cut(), const SolverConfig& cfg = {});

/// Partial-transpose witness W = (|eta><eta|)^{T_B}; value is max(0, -tr(W rho))
/// and witness_state holds W (absent for PPT inputs).
MeasureResult witness_violation(const DensityOperator& rho, const Cut& cut = default_cut());

/// Half the conditional mutual information I(A;B|E) of a three-party
/// extension. With a target, tr_E must reproduce it within 1e-8.
MeasureResult squashed_eval(const DensityOperator& rho_abe,
                            const std::optional<DensityOperator>& target = std::nullopt);

/// Determinant state on three qutrits; its AB marginal is the antisymmetric
/// Werner state.
PureState antisymmetric_qutrit_extension();

}  // namespace entmeas
