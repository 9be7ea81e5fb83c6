#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entmeas/core.hpp"
#include "entmeas/linalg.hpp"

namespace entmeas {

class PureState;

/// A validated density operator over an ordered list of subsystems.
///
/// Construction checks every invariant (dims >= 2, Hermitian, unit trace,
/// PSD) and throws ValidationError naming the first violated one together
/// with its residual. The stored matrix is the Hermitian part of the input.
class DensityOperator {
 public:
  DensityOperator(Dims dims, CMatrix data);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(Dims dims);

  const Dims& dims() const { return dims_; }
  const CMatrix& matrix() const { return data_; }
  int dimension() const { return static_cast<int>(data_.rows()); }
  int parties() const { return static_cast<int>(dims_.size()); }

  /// tr rho^2; 1 for pure states.
  double purity() const;

 private:
  Dims dims_;
  CMatrix data_;
};

class PureState {
 public:
  PureState(Dims dims, CVector amplitudes);

  /// Rescales the vector to unit norm before validating; zero vectors throw.
  static PureState normalized(Dims dims, CVector amplitudes);

  const Dims& dims() const { return dims_; }
  const CVector& amplitudes() const { return amplitudes_; }
  int dimension() const { return static_cast<int>(amplitudes_.size()); }
  int parties() const { return static_cast<int>(dims_.size()); }

 private:
  Dims dims_;
  CVector amplitudes_;
};

/// Kraus operators of a (possibly measuring) quantum operation.
class KrausSet {
 public:
  KrausSet(std::vector<CMatrix> operators, bool trace_preserving);

  const std::vector<CMatrix>& operators() const { return operators_; }
  bool trace_preserving() const { return trace_preserving_; }
  int input_dimension() const { return static_cast<int>(operators_.front().cols()); }

  /// max-norm of sum_i A_i^dag A_i - 1.
  double completeness_residual() const;

 private:
  std::vector<CMatrix> operators_;
  bool trace_preserving_;
};

enum class Status { exact, converged, best_effort };

const char* to_string(Status s);

/// A computed quantity in bits together with how far it can be trusted.
struct MeasureResult {
  double value = 0;  // may be kInfinity
  Status status = Status::exact;
  double gap = 0;
  int iterations = 0;
  /// False when an iterative solver stopped before meeting its tolerance.
  bool solver_converged = true;
  std::vector<std::string> notes;
  std::optional<CMatrix> witness_state;
  std::optional<std::vector<CVector>> witness_vectors;
};

/// Side A of a bipartition, as subsystem indices; every other subsystem is B.
struct Cut {
  std::vector<int> side_a;
};

/// Default cut {0} : {1, ..., n-1}.
Cut default_cut();

/// Regroups a multipartite operator into the two-party operator (A, B) with
/// dims {d_A, d_B}. Factors keep their relative order within each side.
DensityOperator as_bipartite(const DensityOperator& rho, const Cut& cut);
PureState as_bipartite(const PureState& psi, const Cut& cut);

DensityOperator partial_trace(const DensityOperator& rho, std::span<const int> keep);

/// Partial transpose on one subsystem; output is Hermitian with unit trace
/// but not necessarily PSD.
CMatrix partial_transpose(const DensityOperator& rho, int party);
/// Partial transpose over every subsystem in side A of the cut.
CMatrix partial_transpose(const DensityOperator& rho, const Cut& cut);

double von_neumann_entropy(const DensityOperator& rho);
/// Entropy of an arbitrary Hermitian PSD operator (no trace check).
double spectral_entropy(const CMatrix& m);

/// S(rho || sigma) in bits, or kInfinity when supp(rho) is not inside
/// supp(sigma).
double relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);
double relative_entropy(const CMatrix& rho, const CMatrix& sigma);

double mutual_information(const DensityOperator& rho_ab);
/// I(A;B|E) for a three-party operator ordered A, B, E.
double conditional_mutual_information(const DensityOperator& rho_abe);

CMatrix apply_kraus_averaged(const KrausSet& kraus, const CMatrix& rho);
DensityOperator apply_kraus_averaged(const KrausSet& kraus, const DensityOperator& rho);

struct KrausOutcome {
  int index;
  double probability;
  DensityOperator state;
};

/// Post-measurement states for each outcome with probability at least
/// tol::kDropOutcome. Output dims are taken from the input when the operator
/// is square and collapse to a single factor otherwise.
std::vector<KrausOutcome> apply_kraus_selective(const KrausSet& kraus, const DensityOperator& rho);

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
PureState tensor(const PureState& a, const PureState& b);

/// |<a|b>|^2 for pure states; <psi|rho|psi> for mixed.
double fidelity(const PureState& a, const PureState& b);
double fidelity(const PureState& psi, const DensityOperator& rho);

namespace states {
/// (|00> + |11>)/sqrt(2).
PureState bell();
/// (1/sqrt d) sum_i |ii>.
PureState maximally_entangled(int d);
PureState singlet();
PureState ghz(int qubits);
PureState w(int qubits);
PureState basis(Dims dims, int index);
/// alpha|00> + beta|11> (not renormalized, must already be unit norm).
PureState two_qubit_schmidt(double alpha, double beta);
}  // namespace states

}  // namespace entmeas
