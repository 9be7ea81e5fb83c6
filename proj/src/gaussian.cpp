#include "entmeas/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "entmeas/linalg.hpp"
#include "entmeas/state_io.hpp"

namespace entmeas {

namespace {

void check_modes(std::span<const int> modes, int count, const char* what) {
  std::set<int> seen;
  for (int m : modes) {
    if (m < 0 || m >= count) throw ArgumentError(std::string(what) + ": mode index out of range");
    if (!seen.insert(m).second) throw ArgumentError(std::string(what) + ": repeated mode index");
  }
}

CovarianceMatrix::Check check_for(const CovarianceMatrix& gamma) {
  return gamma.satisfies_uncertainty() ? CovarianceMatrix::Check::physical
                                       : CovarianceMatrix::Check::symmetric_only;
}

void require_physical(const CovarianceMatrix& gamma, const char* what) {
  const double residual = gamma.uncertainty_residual();
  if (residual < -1e-9)
    throw ValidationError("uncertainty", -residual, std::string(what) + ": covariance violates gamma + i sigma >= 0");
}

}  // namespace

RMatrix symplectic_form(int modes) {
  RMatrix s = RMatrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    s(2 * k, 2 * k + 1) = 1.0;
    s(2 * k + 1, 2 * k) = -1.0;
  }
  return s;
}

CovarianceMatrix::CovarianceMatrix(RMatrix gamma, std::optional<RVector> first_moments, Check check)
    : gamma_(std::move(gamma)), first_moments_(std::move(first_moments)) {
  if (gamma_.rows() == 0 || gamma_.rows() != gamma_.cols() || gamma_.rows() % 2 != 0)
    throw ArgumentError("CovarianceMatrix: expected a nonempty 2n x 2n matrix");
  if (first_moments_ && first_moments_->size() != gamma_.rows())
    throw ArgumentError("CovarianceMatrix: first moments must have length 2n");
  const double asym = (gamma_ - gamma_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw ValidationError("symmetric", asym, "CovarianceMatrix: matrix is not symmetric");
  gamma_ = (gamma_ + gamma_.transpose()) / 2.0;
  if (check == Check::physical) require_physical(*this, "CovarianceMatrix");
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
  if (modes < 1) throw ArgumentError("CovarianceMatrix::vacuum: need at least one mode");
  return CovarianceMatrix(RMatrix::Identity(2 * modes, 2 * modes));
}

double CovarianceMatrix::uncertainty_residual() const {
  const CMatrix m = gamma_.cast<Complex>() + Complex(0, 1) * symplectic_form(modes()).cast<Complex>();
  return hermitian_eigen(m).values.minCoeff();
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& gamma) {
  const int n = gamma.modes();
  // sigma^{-1} = -sigma.
  const CMatrix m = Complex(0, 1) * (-symplectic_form(n) * gamma.matrix()).cast<Complex>();
  const Eigen::ComplexEigenSolver<CMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) throw InternalError("symplectic_eigenvalues: eigen-solver failed");
  std::vector<double> abs_values;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) abs_values.push_back(std::abs(solver.eigenvalues()[i]));
  std::sort(abs_values.begin(), abs_values.end(), std::greater<>());
  SymplecticSpectrum out;
  out.values.resize(n);
  for (int k = 0; k < n; ++k) {
    const double a = abs_values[static_cast<std::size_t>(2 * k)];
    const double b = abs_values[static_cast<std::size_t>(2 * k + 1)];
    if (std::abs(a - b) > 1e-9 * std::max(1.0, a))
      throw InternalError("symplectic_eigenvalues: eigenvalues of i sigma^-1 gamma are not paired");
    out.values[k] = (a + b) / 2.0;
  }
  return out;
}

double gaussian_entropy(const CovarianceMatrix& gamma) {
  require_physical(gamma, "gaussian_entropy");
  double s = 0;
  for (double mu : symplectic_eigenvalues(gamma).values) {
    if (mu - 1.0 < 1e-9) continue;
    const double plus = (mu + 1.0) / 2.0;
    const double minus = (mu - 1.0) / 2.0;
    s += plus * std::log2(plus) - minus * std::log2(minus);
  }
  return s;
}

CovarianceMatrix reduce_modes(const CovarianceMatrix& gamma, std::span<const int> keep) {
  if (keep.empty()) throw ArgumentError("reduce_modes: keep must be nonempty");
  check_modes(keep, gamma.modes(), "reduce_modes");
  const auto n = static_cast<Eigen::Index>(keep.size());
  RMatrix out(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < 2 * n; ++i)
    for (Eigen::Index j = 0; j < 2 * n; ++j)
      out(i, j) = gamma.matrix()(2 * keep[static_cast<std::size_t>(i / 2)] + i % 2,
                                 2 * keep[static_cast<std::size_t>(j / 2)] + j % 2);
  std::optional<RVector> moments;
  if (gamma.first_moments()) {
    moments = RVector(2 * n);
    for (Eigen::Index i = 0; i < 2 * n; ++i)
      (*moments)[i] = (*gamma.first_moments())[2 * keep[static_cast<std::size_t>(i / 2)] + i % 2];
  }
  return CovarianceMatrix(out, moments, check_for(gamma));
}

CovarianceMatrix partial_time_reversal(const CovarianceMatrix& gamma, std::span<const int> modes_b) {
  check_modes(modes_b, gamma.modes(), "partial_time_reversal");
  RVector flip = RVector::Ones(2 * gamma.modes());
  for (int m : modes_b) flip[2 * m + 1] = -1.0;
  const RMatrix out = flip.asDiagonal() * gamma.matrix() * flip.asDiagonal();
  std::optional<RVector> moments;
  if (gamma.first_moments()) moments = RVector(flip.cwiseProduct(*gamma.first_moments()));
  return CovarianceMatrix(out, moments, CovarianceMatrix::Check::symmetric_only);
}

double gaussian_log_negativity(const CovarianceMatrix& gamma, std::span<const int> modes_b) {
  require_physical(gamma, "gaussian_log_negativity");
  double en = 0;
  for (double mu : symplectic_eigenvalues(partial_time_reversal(gamma, modes_b)).values)
    if (mu < 1.0 - 1e-9) en -= std::log2(mu);
  return en;
}

bool gaussian_ppt_separable(const CovarianceMatrix& gamma, std::span<const int> modes_b) {
  if (gamma.modes() != 2 || modes_b.size() != 1)
    throw UnsupportedCase("gaussian_ppt_separable: exact only for one mode against one mode");
  require_physical(gamma, "gaussian_ppt_separable");
  return partial_time_reversal(gamma, modes_b).satisfies_uncertainty();
}

CovarianceMatrix apply_symplectic(const CovarianceMatrix& gamma, const RMatrix& s) {
  const int n = gamma.modes();
  if (s.rows() != 2 * n || s.cols() != 2 * n) throw ArgumentError("apply_symplectic: S must be 2n x 2n");
  const RMatrix sigma = symplectic_form(n);
  const double residual = (s * sigma * s.transpose() - sigma).cwiseAbs().maxCoeff();
  if (residual > 1e-9) throw ValidationError("symplectic", residual, "apply_symplectic: S sigma S^T != sigma");
  const double det = s.determinant();
  if (std::abs(det - 1.0) > 1e-9) throw ValidationError("unit_determinant", std::abs(det - 1.0), "apply_symplectic: det S != 1");
  std::optional<RVector> moments;
  if (gamma.first_moments()) moments = RVector(s * *gamma.first_moments());
  return CovarianceMatrix(s * gamma.matrix() * s.transpose(), moments, check_for(gamma));
}

CovarianceMatrix two_mode_squeezed(double r) {
  if (!(r >= 0)) throw ArgumentError("two_mode_squeezed: r must be nonnegative");
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  RMatrix g(4, 4);
  g << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return CovarianceMatrix(g);
}

CovarianceMatrix covariance_from_json_text(const std::string& text) {
  const auto j = parse_json_text(text);
  if (!j.is_object() || !j.contains("modes") || !j.contains("cov"))
    throw ArgumentError("covariance file needs \"modes\" and \"cov\"");
  const int n = j.at("modes").get<int>();
  if (n < 1) throw ArgumentError("covariance file: modes must be positive");
  const std::string ordering = j.value("ordering", std::string("xpxp"));
  if (ordering != "xpxp" && ordering != "xxpp") throw ArgumentError("covariance file: ordering must be xpxp or xxpp");
  const auto& cov = j.at("cov");
  if (!cov.is_array() || static_cast<int>(cov.size()) != 2 * n)
    throw ArgumentError("covariance file: cov must have 2 * modes rows");
  RMatrix g(2 * n, 2 * n);
  for (int r = 0; r < 2 * n; ++r) {
    const auto& row = cov[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != 2 * n)
      throw ArgumentError("covariance file: cov must be square");
    for (int c = 0; c < 2 * n; ++c) g(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  std::optional<RVector> mean;
  if (j.contains("mean")) {
    const auto& m = j.at("mean");
    if (!m.is_array() || static_cast<int>(m.size()) != 2 * n)
      throw ArgumentError("covariance file: mean must have length 2 * modes");
    mean = RVector(2 * n);
    for (int i = 0; i < 2 * n; ++i) (*mean)[i] = m[static_cast<std::size_t>(i)].get<double>();
  }
  if (ordering == "xxpp") {
    // new index 2k <- x_k at k, 2k + 1 <- p_k at n + k
    Eigen::VectorXi source(2 * n);
    for (int k = 0; k < n; ++k) {
      source[2 * k] = k;
      source[2 * k + 1] = n + k;
    }
    RMatrix permuted(2 * n, 2 * n);
    for (int r = 0; r < 2 * n; ++r)
      for (int c = 0; c < 2 * n; ++c) permuted(r, c) = g(source[r], source[c]);
    g = permuted;
    if (mean) {
      RVector pm(2 * n);
      for (int i = 0; i < 2 * n; ++i) pm[i] = (*mean)[source[i]];
      mean = pm;
    }
  }
  return CovarianceMatrix(g, mean);
}

CovarianceMatrix load_covariance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open file: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return covariance_from_json_text(buffer.str());
}

}  // namespace entmeas
