#pragma once

#include <map>
#include <optional>
#include <utility>

#include "entmeas/state.hpp"

namespace entmeas {

/// Wootters concurrence max{0, l1 - l2 - l3 - l4} of a two-qubit state, where
/// l_i are the descending square roots of the spectrum of
/// rho (sy (x) sy) rho* (sy (x) sy), conjugation taken in the computational basis.
double concurrence(const DensityOperator& rho);

/// s((1 + sqrt(1 - C^2)) / 2) with s the binary entropy.
double eof_from_concurrence(double c);
double eof_two_qubit(const DensityOperator& rho);

/// (||rho^{T_A}||_1 - 1) / 2 across the cut.
double negativity(const DensityOperator& rho, const Cut& cut = default_cut());
/// log2 ||rho^{T_A}||_1 across the cut.
double log_negativity(const DensityOperator& rho, const Cut& cut = default_cut());

/// Tangle across a cut with a single qubit on one side. Pure states use
/// 4 det(rho_qubit); mixed two-qubit states use C^2. Mixed states with a
/// larger far side throw UnsupportedCase.
double tangle(const DensityOperator& rho, const Cut& cut = default_cut());

/// tau(A:BC) - tau(A:B) - tau(A:C) for a three-qubit pure state, clamped at 0.
double residual_tangle(const PureState& psi, int pivot = 0);

struct TangleReport {
  std::map<std::pair<int, int>, double> pairwise;
  std::map<int, double> one_to_rest;
  std::optional<double> residual;
  bool ckw_satisfied = true;
};

/// Pairwise tangles from the pivot, its one-to-rest tangle, and the
/// monogamy check sum_j tau(pivot:j) <= tau(pivot:rest) + 1e-9.
TangleReport ckw_check(const PureState& psi, int pivot = 0);

}  // namespace entmeas
