#include "entmeas/random.hpp"

#include <array>

namespace entmeas {

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x9e3779b9u};
  return Rng(seq);
}

CVector random_complex_gaussian(Rng& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v[i] = Complex(re, im);
  }
  return v;
}

CMatrix random_complex_gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

PureState random_pure_state(Rng& rng, Dims dims) {
  const int d = total_dimension(dims);
  return PureState::normalized(std::move(dims), random_complex_gaussian(rng, d));
}

DensityOperator random_density(Rng& rng, Dims dims, int rank) {
  const int d = total_dimension(dims);
  if (rank <= 0 || rank > d) rank = d;
  const CMatrix g = random_complex_gaussian(rng, d, rank);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(std::move(dims), hermitian_part(rho));
}

CMatrix random_unitary(Rng& rng, int d) {
  const CMatrix g = random_complex_gaussian(rng, d, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(d, d);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    const Complex diag = r(i, i);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(i) *= diag / mag;
  }
  return q;
}

}  // namespace entmeas
