#pragma once

#include <span>

#include "entmeas/core.hpp"

namespace entmeas {

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

/// Eigendecomposition of (m + m^†)/2.
HermitianEigen hermitian_eigen(const CMatrix& m);

CMatrix hermitian_part(const CMatrix& m);

/// Applies f to the spectrum of the Hermitian part of m.
template <class F>
CMatrix spectral_map(const CMatrix& m, F&& f) {
  const auto eig = hermitian_eigen(m);
  RVector mapped(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) mapped[i] = f(eig.values[i]);
  return eig.vectors * mapped.asDiagonal() * eig.vectors.adjoint();
}

CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);
RVector kron(const RVector& a, const RVector& b);

int total_dimension(const Dims& dims);

/// Reorders tensor factors: factor perm[k] of the input becomes factor k of
/// the output.
CMatrix permute_subsystems(const CMatrix& m, const Dims& dims, std::span<const int> perm);
CVector permute_subsystems(const CVector& v, const Dims& dims, std::span<const int> perm);

/// Traces out every subsystem not listed in keep (keep must be sorted).
CMatrix partial_trace(const CMatrix& m, const Dims& dims, std::span<const int> keep);

/// Transposes the listed subsystems in place of the tensor index.
CMatrix partial_transpose(const CMatrix& m, const Dims& dims, std::span<const int> parties);

double trace_norm(const CMatrix& m);

/// Shannon entropy in bits; entries below the eigenvalue cutoff count as 0.
double shannon_entropy(std::span<const double> p);
double shannon_entropy(const RVector& p);
double binary_entropy(double p);

/// x log2 x with the 0 log 0 = 0 convention below the eigenvalue cutoff.
double xlog2x(double x);

/// Throws ArgumentError unless every index is in [0, count) and unique.
void check_subsystem_set(std::span<const int> parties, int count, const char* what);

}  // namespace entmeas
