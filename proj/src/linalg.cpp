#include "entmeas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace entmeas {

CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

HermitianEigen hermitian_eigen(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) throw InternalError("Hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

RVector kron(const RVector& a, const RVector& b) {
  RVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

int total_dimension(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

void check_subsystem_set(std::span<const int> parties, int count, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(std::max(count, 0)), false);
  for (int p : parties) {
    if (p < 0 || p >= count)
      throw ArgumentError(std::string(what) + ": subsystem index " + std::to_string(p) +
                          " out of range [0, " + std::to_string(count) + ")");
    if (seen[static_cast<std::size_t>(p)])
      throw ArgumentError(std::string(what) + ": duplicate subsystem index " + std::to_string(p));
    seen[static_cast<std::size_t>(p)] = true;
  }
}

namespace {

std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    strides[static_cast<std::size_t>(k)] =
        strides[static_cast<std::size_t>(k) + 1] * dims[static_cast<std::size_t>(k) + 1];
  return strides;
}

// Maps each output flat index to its input flat index under the permutation.
std::vector<int> permutation_map(const Dims& dims, std::span<const int> perm) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw ArgumentError("permutation length does not match subsystem count");
  check_subsystem_set(perm, static_cast<int>(n), "permutation");
  const auto in_strides = strides_of(dims);
  Dims out_dims(n);
  for (std::size_t k = 0; k < n; ++k) out_dims[k] = dims[static_cast<std::size_t>(perm[k])];
  const int total = total_dimension(dims);
  std::vector<int> map(static_cast<std::size_t>(total));
  std::vector<int> digits(n, 0);
  for (int flat = 0; flat < total; ++flat) {
    int src = 0;
    for (std::size_t k = 0; k < n; ++k) src += digits[k] * in_strides[static_cast<std::size_t>(perm[k])];
    map[static_cast<std::size_t>(flat)] = src;
    for (int k = static_cast<int>(n) - 1; k >= 0; --k) {
      auto uk = static_cast<std::size_t>(k);
      if (++digits[uk] < out_dims[uk]) break;
      digits[uk] = 0;
    }
  }
  return map;
}

}  // namespace

CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  const auto n = static_cast<Eigen::Index>(map.size());
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out(i, j) = m(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
  return out;
}

CVector permute_subsystems(const CVector& v, const Dims& dims, std::span<const int> perm) {
  const auto map = permutation_map(dims, perm);
  CVector out(static_cast<Eigen::Index>(map.size()));
  for (std::size_t i = 0; i < map.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[map[i]];
  return out;
}

CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::span<const int> keep) {
  const int n = static_cast<int>(dims.size());
  check_subsystem_set(keep, n, "partial_trace");
  if (keep.empty()) throw ArgumentError("partial_trace: keep set must be nonempty");
  if (!std::is_sorted(keep.begin(), keep.end()))
    throw ArgumentError("partial_trace: keep set must be sorted");
  // Move kept factors to the front, then sum over the traced block diagonal.
  std::vector<int> perm(keep.begin(), keep.end());
  for (int k = 0; k < n; ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) perm.push_back(k);
  const CMatrix permuted = permute_subsystems(m, dims, perm);
  int kept_dim = 1;
  for (int k : keep) kept_dim *= dims[static_cast<std::size_t>(k)];
  const int traced_dim = total_dimension(dims) / kept_dim;
  CMatrix out = CMatrix::Zero(kept_dim, kept_dim);
  for (int i = 0; i < kept_dim; ++i)
    for (int j = 0; j < kept_dim; ++j) {
      Complex acc = 0;
      for (int e = 0; e < traced_dim; ++e) acc += permuted(i * traced_dim + e, j * traced_dim + e);
      out(i, j) = acc;
    }
  return out;
}

CMatrix partial_transpose(const CMatrix& m, const Dims& dims, std::span<const int> parties) {
  const int n = static_cast<int>(dims.size());
  check_subsystem_set(parties, n, "partial_transpose");
  const auto strides = strides_of(dims);
  const int total = total_dimension(dims);
  if (m.rows() != total || m.cols() != total)
    throw ArgumentError("partial_transpose: matrix side does not match dims");
  CMatrix out(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) {
      int ti = i, tj = j;
      for (int p : parties) {
        const auto up = static_cast<std::size_t>(p);
        const int di = (i / strides[up]) % dims[up];
        const int dj = (j / strides[up]) % dims[up];
        ti += (dj - di) * strides[up];
        tj += (di - dj) * strides[up];
      }
      out(ti, tj) = m(i, j);
    }
  return out;
}

double trace_norm(const CMatrix& m) {
  return hermitian_eigen(m).values.cwiseAbs().sum();
}

double xlog2x(double x) { return x < tol::kEigenCutoff ? 0.0 : x * std::log2(x); }

double shannon_entropy(std::span<const double> p) {
  double s = 0;
  for (double x : p) s -= xlog2x(x);
  return s;
}

double shannon_entropy(const RVector& p) {
  return shannon_entropy(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

}  // namespace entmeas
