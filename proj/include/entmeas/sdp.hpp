#pragma once

#include <string>
#include <vector>

#include "entmeas/core.hpp"

namespace entmeas::sdp {

/// Hermitian matrix stored as its nonzero entries (both triangles).
struct SparseHermitian {
  struct Entry {
    int row;
    int col;
    Complex value;
  };
  std::vector<Entry> entries;

  bool empty() const { return entries.empty(); }
  void add(int row, int col, Complex value) { entries.push_back({row, col, value}); }
  CMatrix to_dense(int n) const;
  static SparseHermitian from_dense(const CMatrix& m, double drop = 0.0);
};

/// One linear matrix inequality  C - sum_i y_i A_i >= 0  of side `size`.
/// coefficients[i] may be empty when y_i does not enter this block.
struct LmiBlock {
  int size = 0;
  CMatrix constant;
  std::vector<SparseHermitian> coefficients;
};

/// maximize  b^T y   subject to   C_k - sum_i y_i A_{k,i} >= 0  for every block k.
///
/// The associated primal problem is
///   minimize sum_k <C_k, X_k>  s.t.  sum_k <A_{k,i}, X_k> = b_i,  X_k >= 0.
struct Problem {
  RVector objective;
  std::vector<LmiBlock> blocks;

  int variables() const { return static_cast<int>(objective.size()); }
};

enum class SolveStatus {
  optimal,
  /// The LMI system admits no y (primal-side certificate found).
  infeasible,
  /// b^T y is unbounded above on the LMI feasible set.
  unbounded,
  max_iterations,
};

const char* to_string(SolveStatus s);

struct Options {
  int max_iterations = 100;
  /// Absolute duality gap required for `optimal`.
  double gap_tolerance = 1e-7;
  /// Relative primal and dual residual required for `optimal`.
  double feasibility_tolerance = 1e-8;
};

struct Solution {
  SolveStatus status = SolveStatus::max_iterations;
  RVector y;
  std::vector<CMatrix> primal;  // X_k
  std::vector<CMatrix> slack;   // Z_k = C_k - sum_i y_i A_{k,i}
  double primal_objective = 0;  // <C, X>, an upper bound on b^T y at optimality
  double dual_objective = 0;    // b^T y
  double gap = 0;
  double primal_infeasibility = 0;
  double dual_infeasibility = 0;
  int iterations = 0;
};

/// Infeasible-start primal-dual path following with the HKM search
/// direction and Mehrotra predictor-corrector steps. Deterministic.
Solution solve(const Problem& problem, const Options& options = {});

/// sum_i y_i A_{k,i} for one block.
CMatrix apply_adjoint(const LmiBlock& block, const RVector& y);

}  // namespace entmeas::sdp
