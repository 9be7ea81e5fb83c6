#pragma once

// Internal helpers shared by the variational solvers.

#include <algorithm>
#include <cmath>
#include <functional>

#include "entmeas/linalg.hpp"

namespace entmeas::detail {

inline bool nearly_equal(double a, double b) { return std::abs(a - b) <= 1e-10 * std::max(a, b); }

/// First divided difference of the natural log.
inline double log_divided(double a, double b) {
  return nearly_equal(a, b) ? 2.0 / (a + b) : (std::log(a) - std::log(b)) / (a - b);
}

/// Second divided difference of the natural log (symmetric in its arguments).
inline double log_divided2(double a, double b, double c) {
  double v[3] = {a, b, c};
  std::sort(v, v + 3);
  const auto [x, y, z] = v;
  if (nearly_equal(x, z)) return -2.0 / ((x + z) * (x + z));
  if (nearly_equal(x, y)) return (log_divided(z, x) - 2.0 / (x + y)) / (z - x);
  if (nearly_equal(y, z)) return (2.0 / (y + z) - log_divided(x, z)) / (z - x);
  return (log_divided(y, z) - log_divided(x, y)) / (z - x);
}

/// Frechet derivative of the natural log at sigma (given by its positive
/// spectrum), applied to x.
inline CMatrix log_derivative(const HermitianEigen& eig, const CMatrix& x) {
  const auto n = eig.values.size();
  const CMatrix xt = eig.vectors.adjoint() * x * eig.vectors;
  CMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = xt(i, j) * log_divided(eig.values[i], eig.values[j]);
  return eig.vectors * out * eig.vectors.adjoint();
}

/// -tr(rho log2 sigma) with the spectrum of sigma floored at `floor`.
inline double cross_entropy(const CMatrix& rho, const CMatrix& sigma, double floor) {
  const auto eig = hermitian_eigen(sigma);
  RVector logs(eig.values.size());
  for (Eigen::Index i = 0; i < logs.size(); ++i) logs[i] = std::log2(std::max(eig.values[i], floor));
  const CMatrix rt = eig.vectors.adjoint() * rho * eig.vectors;
  double acc = 0;
  for (Eigen::Index i = 0; i < logs.size(); ++i) acc -= rt(i, i).real() * logs[i];
  return acc;
}

/// Hermitian PSD projection with unit trace.
inline CMatrix clean_state(const CMatrix& m) {
  CMatrix out = spectral_map(m, [](double x) { return std::max(x, 0.0); });
  return out / out.trace().real();
}

/// Minimises a convex function on [lo, hi] by golden-section search; returns
/// the best point seen, including the endpoints.
inline double golden_section(const std::function<double(double)>& f, double lo, double hi, int iterations = 60) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double best_x = lo;
  double best_f = f(lo);
  const double f_hi = f(hi);
  if (f_hi < best_f) {
    best_f = f_hi;
    best_x = hi;
  }
  double a = lo, b = hi;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-13; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
    if (fc < best_f) {
      best_f = fc;
      best_x = c;
    }
    if (fd < best_f) {
      best_f = fd;
      best_x = d;
    }
  }
  return best_x;
}

inline double trace_product(const CMatrix& a, const CMatrix& b) {
  return (a.cwiseProduct(b.transpose())).sum().real();
}

}  // namespace entmeas::detail
