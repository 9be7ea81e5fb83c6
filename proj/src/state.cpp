#include "entmeas/state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace entmeas {

namespace {

std::string residual_message(const std::string& invariant, double residual, double tolerance) {
  std::ostringstream os;
  os.precision(6);
  os << "invariant '" << invariant << "' violated: residual " << residual << " exceeds tolerance "
     << tolerance;
  return os.str();
}

void validate_dims(const Dims& dims, Eigen::Index side) {
  if (dims.empty()) throw ValidationError("dims", 0, "invariant 'dims' violated: empty dims list");
  for (int d : dims)
    if (d < 2)
      throw ValidationError("dims", d,
                            "invariant 'dims' violated: subsystem dimension " + std::to_string(d) +
                                " is below 2");
  if (total_dimension(dims) != side)
    throw ValidationError("dims", static_cast<double>(side),
                          "invariant 'dims' violated: product of dims " +
                              std::to_string(total_dimension(dims)) + " != side " +
                              std::to_string(side));
}

}  // namespace

DensityOperator::DensityOperator(Dims dims, CMatrix data) : dims_(std::move(dims)) {
  if (data.rows() != data.cols())
    throw ValidationError("square", static_cast<double>(data.rows() - data.cols()),
                          "invariant 'square' violated: matrix is not square");
  validate_dims(dims_, data.rows());
  const double herm = (data - data.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol::kHermitian)
    throw ValidationError("hermitian", herm, residual_message("hermitian", herm, tol::kHermitian));
  data_ = hermitian_part(data);
  const double trace_residual = std::abs(data_.trace().real() - 1.0);
  if (trace_residual > tol::kTrace)
    throw ValidationError("unit_trace", trace_residual,
                          residual_message("unit_trace", trace_residual, tol::kTrace));
  const double min_eig = hermitian_eigen(data_).values.minCoeff();
  if (min_eig < -tol::kPsd)
    throw ValidationError("positive_semidefinite", -min_eig,
                          residual_message("positive_semidefinite", -min_eig, tol::kPsd));
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.dims(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(Dims dims) {
  const int d = total_dimension(dims);
  return DensityOperator(std::move(dims), CMatrix::Identity(d, d) / static_cast<double>(d));
}

double DensityOperator::purity() const { return (data_ * data_).trace().real(); }

PureState::PureState(Dims dims, CVector amplitudes)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  validate_dims(dims_, amplitudes_.size());
  const double residual = std::abs(amplitudes_.norm() - 1.0);
  if (residual > tol::kNorm)
    throw ValidationError("unit_norm", residual, residual_message("unit_norm", residual, tol::kNorm));
}

PureState PureState::normalized(Dims dims, CVector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw ArgumentError("cannot normalize a zero vector");
  return PureState(std::move(dims), amplitudes / n);
}

KrausSet::KrausSet(std::vector<CMatrix> operators, bool trace_preserving)
    : operators_(std::move(operators)), trace_preserving_(trace_preserving) {
  if (operators_.empty()) throw ArgumentError("Kraus set must contain at least one operator");
  const auto cols = operators_.front().cols();
  for (const auto& a : operators_)
    if (a.cols() != cols) throw ArgumentError("Kraus operators must share an input dimension");
  if (trace_preserving_) {
    const double r = completeness_residual();
    if (r > tol::kKraus)
      throw ValidationError("completeness", r, residual_message("completeness", r, tol::kKraus));
  }
}

double KrausSet::completeness_residual() const {
  const auto d = operators_.front().cols();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& a : operators_) sum += a.adjoint() * a;
  return (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

const char* to_string(Status s) {
  switch (s) {
    case Status::exact: return "exact";
    case Status::converged: return "converged";
    case Status::best_effort: return "best_effort";
  }
  return "unknown";
}

Cut default_cut() { return Cut{{0}}; }

namespace {

struct BipartiteLayout {
  std::vector<int> perm;
  int dim_a = 1;
  int dim_b = 1;
};

BipartiteLayout bipartite_layout(const Dims& dims, const Cut& cut) {
  const int n = static_cast<int>(dims.size());
  check_subsystem_set(cut.side_a, n, "cut");
  if (cut.side_a.empty() || static_cast<int>(cut.side_a.size()) == n)
    throw ArgumentError("cut: both sides of a bipartition must be nonempty");
  BipartiteLayout layout;
  std::vector<int> a = cut.side_a;
  std::sort(a.begin(), a.end());
  for (int k : a) {
    layout.perm.push_back(k);
    layout.dim_a *= dims[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < n; ++k)
    if (!std::binary_search(a.begin(), a.end(), k)) {
      layout.perm.push_back(k);
      layout.dim_b *= dims[static_cast<std::size_t>(k)];
    }
  return layout;
}

}  // namespace

DensityOperator as_bipartite(const DensityOperator& rho, const Cut& cut) {
  const auto layout = bipartite_layout(rho.dims(), cut);
  return DensityOperator({layout.dim_a, layout.dim_b},
                         permute_subsystems(rho.matrix(), rho.dims(), layout.perm));
}

PureState as_bipartite(const PureState& psi, const Cut& cut) {
  const auto layout = bipartite_layout(psi.dims(), cut);
  return PureState({layout.dim_a, layout.dim_b},
                   permute_subsystems(psi.amplitudes(), psi.dims(), layout.perm));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep) {
  std::vector<int> sorted(keep.begin(), keep.end());
  check_subsystem_set(sorted, rho.parties(), "partial_trace");
  if (sorted.empty()) throw ArgumentError("partial_trace: keep set must be nonempty");
  std::sort(sorted.begin(), sorted.end());
  Dims kept;
  for (int k : sorted) kept.push_back(rho.dims()[static_cast<std::size_t>(k)]);
  return DensityOperator(std::move(kept), partial_trace(rho.matrix(), rho.dims(), sorted));
}

CMatrix partial_transpose(const DensityOperator& rho, int party) {
  const int parties[] = {party};
  return partial_transpose(rho.matrix(), rho.dims(), parties);
}

CMatrix partial_transpose(const DensityOperator& rho, const Cut& cut) {
  return partial_transpose(rho.matrix(), rho.dims(), cut.side_a);
}

double spectral_entropy(const CMatrix& m) {
  const auto eig = hermitian_eigen(m);
  return shannon_entropy(eig.values);
}

double von_neumann_entropy(const DensityOperator& rho) { return spectral_entropy(rho.matrix()); }

double relative_entropy(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ArgumentError("relative_entropy: dimension mismatch");
  const auto r = hermitian_eigen(rho);
  const auto s = hermitian_eigen(sigma);
  // Weight of rho on each eigenvector of sigma.
  const RVector weight = (s.vectors.adjoint() * hermitian_part(rho) * s.vectors).diagonal().real();
  double cross = 0;
  for (Eigen::Index j = 0; j < s.values.size(); ++j) {
    if (s.values[j] < tol::kEigenCutoff) {
      if (weight[j] > tol::kEigenCutoff) return kInfinity;
      continue;
    }
    cross += weight[j] * std::log2(s.values[j]);
  }
  double self = 0;
  for (Eigen::Index i = 0; i < r.values.size(); ++i) self += xlog2x(r.values[i]);
  return std::max(0.0, self - cross);
}

double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

double mutual_information(const DensityOperator& rho_ab) {
  if (rho_ab.parties() != 2) throw ArgumentError("mutual_information: expected exactly two subsystems");
  const int a[] = {0};
  const int b[] = {1};
  const double value = spectral_entropy(partial_trace(rho_ab.matrix(), rho_ab.dims(), a)) +
                       spectral_entropy(partial_trace(rho_ab.matrix(), rho_ab.dims(), b)) -
                       von_neumann_entropy(rho_ab);
  return std::max(0.0, value);
}

double conditional_mutual_information(const DensityOperator& rho_abe) {
  if (rho_abe.parties() != 3)
    throw ArgumentError("conditional_mutual_information: expected subsystems A, B, E");
  const auto& m = rho_abe.matrix();
  const auto& dims = rho_abe.dims();
  const int ae[] = {0, 2};
  const int be[] = {1, 2};
  const int e[] = {2};
  const double value = spectral_entropy(partial_trace(m, dims, ae)) +
                       spectral_entropy(partial_trace(m, dims, be)) - spectral_entropy(m) -
                       spectral_entropy(partial_trace(m, dims, e));
  if (value < -1e-9)
    throw InternalError("strong subadditivity violated beyond tolerance: " + std::to_string(value));
  return std::max(0.0, value);
}

CMatrix apply_kraus_averaged(const KrausSet& kraus, const CMatrix& rho) {
  if (kraus.input_dimension() != rho.rows())
    throw ArgumentError("apply_kraus: operator input dimension does not match the state");
  const auto out_dim = kraus.operators().front().rows();
  CMatrix out = CMatrix::Zero(out_dim, out_dim);
  for (const auto& a : kraus.operators()) {
    if (a.rows() != out_dim)
      throw ArgumentError("apply_kraus: averaged mode needs a common output dimension");
    out += a * rho * a.adjoint();
  }
  return out;
}

DensityOperator apply_kraus_averaged(const KrausSet& kraus, const DensityOperator& rho) {
  CMatrix out = apply_kraus_averaged(kraus, rho.matrix());
  const double tr = out.trace().real();
  if (!kraus.trace_preserving()) {
    if (tr < tol::kDropOutcome) throw ArgumentError("apply_kraus: operation annihilates the state");
    out /= tr;
  }
  Dims dims = out.rows() == rho.dimension() ? rho.dims() : Dims{static_cast<int>(out.rows())};
  return DensityOperator(std::move(dims), out);
}

std::vector<KrausOutcome> apply_kraus_selective(const KrausSet& kraus, const DensityOperator& rho) {
  if (kraus.input_dimension() != rho.dimension())
    throw ArgumentError("apply_kraus: operator input dimension does not match the state");
  std::vector<KrausOutcome> outcomes;
  const auto& ops = kraus.operators();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    CMatrix out = ops[i] * rho.matrix() * ops[i].adjoint();
    const double p = out.trace().real();
    if (p < tol::kDropOutcome) continue;
    Dims dims = out.rows() == rho.dimension() ? rho.dims() : Dims{static_cast<int>(out.rows())};
    outcomes.push_back({static_cast<int>(i), p, DensityOperator(std::move(dims), out / p)});
  }
  return outcomes;
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityOperator(std::move(dims), kron(a.matrix(), b.matrix()));
}

PureState tensor(const PureState& a, const PureState& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return PureState(std::move(dims), kron(a.amplitudes(), b.amplitudes()));
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dimension() != b.dimension()) throw ArgumentError("fidelity: dimension mismatch");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const PureState& psi, const DensityOperator& rho) {
  if (psi.dimension() != rho.dimension()) throw ArgumentError("fidelity: dimension mismatch");
  return (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())(0, 0).real();
}

namespace states {

PureState maximally_entangled(int d) {
  if (d < 2) throw ArgumentError("maximally_entangled: d must be at least 2");
  CVector v = CVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v[i * d + i] = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState({d, d}, v);
}

PureState bell() { return maximally_entangled(2); }

PureState singlet() {
  CVector v = CVector::Zero(4);
  v[1] = 1.0 / std::sqrt(2.0);
  v[2] = -1.0 / std::sqrt(2.0);
  return PureState({2, 2}, v);
}

PureState ghz(int qubits) {
  if (qubits < 2) throw ArgumentError("ghz: need at least two qubits");
  const int d = 1 << qubits;
  CVector v = CVector::Zero(d);
  v[0] = v[d - 1] = 1.0 / std::sqrt(2.0);
  return PureState(Dims(static_cast<std::size_t>(qubits), 2), v);
}

PureState w(int qubits) {
  if (qubits < 2) throw ArgumentError("w: need at least two qubits");
  const int d = 1 << qubits;
  CVector v = CVector::Zero(d);
  for (int k = 0; k < qubits; ++k) v[1 << k] = 1.0 / std::sqrt(static_cast<double>(qubits));
  return PureState(Dims(static_cast<std::size_t>(qubits), 2), v);
}

PureState basis(Dims dims, int index) {
  const int d = total_dimension(dims);
  if (index < 0 || index >= d) throw ArgumentError("basis: index out of range");
  CVector v = CVector::Zero(d);
  v[index] = 1.0;
  return PureState(std::move(dims), v);
}

PureState two_qubit_schmidt(double alpha, double beta) {
  CVector v = CVector::Zero(4);
  v[0] = alpha;
  v[3] = beta;
  return PureState({2, 2}, v);
}

}  // namespace states

}  // namespace entmeas
