#include "entmeas/closed_form.hpp"

#include <algorithm>
#include <cmath>

#include "entmeas/linalg.hpp"

namespace entmeas {

namespace {

void require_two_qubits(const DensityOperator& rho, const char* what) {
  if (rho.dims() != Dims{2, 2}) throw ArgumentError(std::string(what) + ": expected dims (2, 2)");
}

bool all_qubits(const Dims& dims) {
  return std::all_of(dims.begin(), dims.end(), [](int d) { return d == 2; });
}

CMatrix spin_flip() {
  CMatrix sy(2, 2);
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  return kron(sy, sy);
}

double qubit_tangle_pure(const CMatrix& reduced_qubit) {
  const double det = reduced_qubit.determinant().real();
  return std::clamp(4.0 * det, 0.0, 1.0);
}

}  // namespace

double concurrence(const DensityOperator& rho) {
  require_two_qubits(rho, "concurrence");
  static const CMatrix flip = spin_flip();
  // With rho = X X^dagger the square roots of the spectrum of rho rho~ are the
  // singular values of X^T flip X; this stays accurate at low rank.
  const auto eig = hermitian_eigen(rho.matrix());
  CMatrix x = eig.vectors;
  for (Eigen::Index i = 0; i < 4; ++i) x.col(i) *= std::sqrt(std::max(0.0, eig.values[i]));
  const CMatrix m = x.transpose() * flip * x;
  const RVector sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  std::vector<double> lambdas(sv.data(), sv.data() + sv.size());
  std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
  return std::clamp(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3], 0.0, 1.0);
}

double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

double eof_two_qubit(const DensityOperator& rho) { return eof_from_concurrence(concurrence(rho)); }

double negativity(const DensityOperator& rho, const Cut& cut) {
  const double n = (trace_norm(partial_transpose(rho, cut)) - 1.0) / 2.0;
  return std::abs(n) < tol::kEigenCutoff ? 0.0 : std::max(0.0, n);
}

double log_negativity(const DensityOperator& rho, const Cut& cut) {
  return std::log2(1.0 + 2.0 * negativity(rho, cut));
}

double tangle(const DensityOperator& rho, const Cut& cut) {
  const DensityOperator bi = as_bipartite(rho, cut);
  const int da = bi.dims()[0];
  const int db = bi.dims()[1];
  if (da != 2 && db != 2) throw ArgumentError("tangle: one side of the cut must be a single qubit");
  const bool pure = std::abs(rho.purity() - 1.0) <= 1e-9;
  if (pure) {
    const int qubit_side[] = {da == 2 ? 0 : 1};
    return qubit_tangle_pure(partial_trace(bi.matrix(), bi.dims(), qubit_side));
  }
  if (da == 2 && db == 2) {
    const double c = concurrence(bi);
    return c * c;
  }
  throw UnsupportedCase("tangle: mixed states are supported only for 2 (x) 2");
}

TangleReport ckw_check(const PureState& psi, int pivot) {
  if (!all_qubits(psi.dims()) || psi.parties() < 3)
    throw ArgumentError("ckw_check: expected a pure state of at least three qubits");
  if (pivot < 0 || pivot >= psi.parties()) throw ArgumentError("ckw_check: pivot out of range");
  const DensityOperator rho = DensityOperator::from_pure(psi);
  TangleReport report;
  for (int k = 0; k < psi.parties(); ++k) {
    const int keep[] = {k};
    report.one_to_rest[k] = qubit_tangle_pure(partial_trace(rho.matrix(), rho.dims(), keep));
  }
  double pairwise_sum = 0;
  for (int k = 0; k < psi.parties(); ++k) {
    if (k == pivot) continue;
    const int keep[] = {std::min(pivot, k), std::max(pivot, k)};
    const DensityOperator pair = partial_trace(rho, keep);
    const double c = concurrence(pair);
    report.pairwise[{pivot, k}] = c * c;
    pairwise_sum += c * c;
  }
  report.ckw_satisfied = pairwise_sum <= report.one_to_rest[pivot] + 1e-9;
  if (psi.parties() == 3) report.residual = std::max(0.0, report.one_to_rest[pivot] - pairwise_sum);
  return report;
}

double residual_tangle(const PureState& psi, int pivot) {
  if (psi.dims() != Dims{2, 2, 2}) throw ArgumentError("residual_tangle: expected dims (2, 2, 2)");
  const auto report = ckw_check(psi, pivot);
  double raw = report.one_to_rest.at(pivot);
  for (const auto& [pair, tau] : report.pairwise) raw -= tau;
  if (raw < -1e-9) throw InternalError("residual_tangle: monogamy violated beyond tolerance");
  return std::max(0.0, raw);
}

}  // namespace entmeas
