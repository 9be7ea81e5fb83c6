#pragma once

#include <map>
#include <string>

#include "entmeas/state.hpp"
#include "entmeas/variational.hpp"

namespace entmeas {

/// S(rho_AB) - S(rho_B) in bits; may be negative.
double conditional_entropy(const DensityOperator& rho, const Cut& cut = default_cut());

/// max{S(rho_B) - S(rho_AB), S(rho_A) - S(rho_AB), 0}.
double hashing_lower_bound(const DensityOperator& rho, const Cut& cut = default_cut());

/// Minimum eigenvalue of the partial transpose is at least -1e-10.
bool is_ppt(const DensityOperator& rho, const Cut& cut = default_cut());

/// p sigma_a + (1 - p) sigma_s on C^d (x) C^d with normalised projectors.
DensityOperator werner_state(int d, double p);

/// Projection onto the U (x) U invariant two-qubit states; keeps the singlet
/// fidelity F: F |psi-><psi-| + (1 - F) (1 - |psi-><psi-|) / 3.
DensityOperator uu_twirl_two_qubit(const DensityOperator& rho);

struct BoundsOptions {
  SolverConfig solver;
  bool skip_rains = false;
};

struct BoundsReport {
  std::map<std::string, double> lower;
  std::map<std::string, double> upper;
  /// Upper entries whose value is certified (best-effort entries excluded).
  std::map<std::string, bool> certified;
  bool ppt = false;
  /// Set to exactly 0 when the state is PPT.
  std::optional<double> distillable;
  std::map<std::string, std::string> notes;
};

/// Hashing, PPT test, log-negativity, relative entropy and (optionally)
/// the Rains bound. Throws InternalError if a lower entry exceeds a
/// certified upper entry by more than 1e-3.
BoundsReport bounds_report(const DensityOperator& rho, const Cut& cut = default_cut(),
                           const BoundsOptions& options = {});

}  // namespace entmeas
