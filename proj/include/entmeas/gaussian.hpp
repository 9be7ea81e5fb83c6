#pragma once

#include <filesystem>
#include <optional>
#include <span>

#include "entmeas/core.hpp"

namespace entmeas {

/// Real symmetric 2n x 2n covariance matrix in x1, p1, ..., xn, pn order,
/// vacuum = identity.
class CovarianceMatrix {
 public:
  enum class Check {
    /// Symmetry and the uncertainty relation gamma + i sigma >= 0.
    physical,
    /// Symmetry only; used for partially time-reversed matrices.
    symmetric_only,
  };

  CovarianceMatrix(RMatrix gamma, std::optional<RVector> first_moments = std::nullopt,
                   Check check = Check::physical);

  static CovarianceMatrix vacuum(int modes);

  int modes() const { return static_cast<int>(gamma_.rows() / 2); }
  const RMatrix& matrix() const { return gamma_; }
  const std::optional<RVector>& first_moments() const { return first_moments_; }

  /// Minimum eigenvalue of gamma + i sigma.
  double uncertainty_residual() const;
  bool satisfies_uncertainty() const { return uncertainty_residual() >= -1e-9; }

 private:
  RMatrix gamma_;
  std::optional<RVector> first_moments_;
};

/// sigma = direct sum of [[0, 1], [-1, 0]].
RMatrix symplectic_form(int modes);

struct SymplecticSpectrum {
  RVector values;  // descending
};

/// |eig(i sigma^{-1} gamma)|, one value per +/- pair.
SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& gamma);

/// Von Neumann entropy in bits from the symplectic spectrum.
double gaussian_entropy(const CovarianceMatrix& gamma);

CovarianceMatrix reduce_modes(const CovarianceMatrix& gamma, std::span<const int> keep);

/// Flips the sign of the momenta of the listed modes; the result is only
/// checked for symmetry.
CovarianceMatrix partial_time_reversal(const CovarianceMatrix& gamma, std::span<const int> modes_b);

/// -sum log2 min(1, mu~) over the partially time-reversed spectrum.
double gaussian_log_negativity(const CovarianceMatrix& gamma, std::span<const int> modes_b);

/// Exact separability test for one mode against one mode.
bool gaussian_ppt_separable(const CovarianceMatrix& gamma, std::span<const int> modes_b);

/// S gamma S^T for a symplectic S (S sigma S^T = sigma and det S = 1 within 1e-9).
CovarianceMatrix apply_symplectic(const CovarianceMatrix& gamma, const RMatrix& s);

CovarianceMatrix two_mode_squeezed(double r);

/// Reads {"modes", "ordering": "xpxp" | "xxpp", "cov", "mean"?}; xxpp input
/// is permuted to xpxp.
CovarianceMatrix load_covariance(const std::filesystem::path& path);
CovarianceMatrix covariance_from_json_text(const std::string& text);

}  // namespace entmeas
