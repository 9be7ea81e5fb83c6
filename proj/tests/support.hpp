#pragma once

#include <cmath>

#include <doctest.h>

#include "entmeas/random.hpp"
#include "entmeas/state.hpp"

namespace entmeas::testing {

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline DensityOperator density(const PureState& psi) { return DensityOperator::from_pure(psi); }

/// A|00><00| + (1 - A)|11><11| + B(|00><11| + |11><00|).
inline DensityOperator bell_correlated(double a, double b) {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = a;
  m(3, 3) = 1.0 - a;
  m(0, 3) = b;
  m(3, 0) = b;
  return DensityOperator({2, 2}, m);
}

/// (1 - q) I/4 + q |psi2+><psi2+|.
inline DensityOperator isotropic_two_qubit(double q) {
  const CVector v = states::bell().amplitudes();
  return DensityOperator({2, 2}, (1.0 - q) * CMatrix::Identity(4, 4) / 4.0 + q * v * v.adjoint());
}

inline CMatrix local_unitary(Rng& rng, const Dims& dims) {
  CMatrix u = CMatrix::Identity(1, 1);
  for (int d : dims) u = kron(u, random_unitary(rng, d));
  return u;
}

inline DensityOperator conjugate(const DensityOperator& rho, const CMatrix& u) {
  return DensityOperator(rho.dims(), u * rho.matrix() * u.adjoint());
}

}  // namespace entmeas::testing
