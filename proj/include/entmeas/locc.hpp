#pragma once

#include <optional>
#include <span>
#include <vector>

#include "entmeas/parallel.hpp"
#include "entmeas/state.hpp"

namespace entmeas {

/// psi = sum_i sqrt(coefficients[i]) |basis_a_i> |basis_b_i>.
struct SchmidtDecomposition {
  std::vector<double> coefficients;  // descending, each >= 1e-12, sum 1
  CMatrix basis_a;                   // d_A x n, orthonormal columns
  CMatrix basis_b;                   // d_B x n, orthonormal columns

  int schmidt_number() const { return static_cast<int>(coefficients.size()); }
  /// The state rebuilt from the decomposition, in (A, B) ordering.
  CVector reconstruct() const;
};

struct ConversionVerdict {
  bool deterministic = false;
  double probability = 0;
  /// 1-based index l minimising the tail-sum ratio.
  int limiting_index = 1;
};

SchmidtDecomposition schmidt(const PureState& psi, const Cut& cut);

/// Shannon entropy of the Schmidt coefficients, in bits.
double entropy_of_entanglement(const PureState& psi, const Cut& cut);

/// Checks normalisation (within 1e-9) and nonnegativity, then sorts
/// descending. Entries below 1e-12 become exact zeros.
std::vector<double> normalize_schmidt_vector(std::span<const double> coefficients);

/// True iff source is majorised by target, i.e. psi(source) -> psi(target)
/// is possible with certainty under LOCC.
bool majorization_convertible(std::span<const double> source, std::span<const double> target);

/// Optimal single-copy LOCC success probability: the minimum over l of the
/// ratio of tail sums  sum_{i>=l} source_i / sum_{i>=l} target_i.
ConversionVerdict optimal_conversion_probability(std::span<const double> source,
                                                 std::span<const double> target);

struct CatalysisOptions {
  int catalyst_rank = 2;
  /// Grid step is 1/grid_resolution on the catalyst simplex.
  int grid_resolution = 200;
  Execution execution = Execution::parallel;
};

struct CatalysisResult {
  /// Descending catalyst coefficients, when one was found and verified.
  std::optional<std::vector<double>> catalyst;
  /// exact when a verified catalyst is returned; best_effort for "none found".
  Status status = Status::best_effort;
  int candidates_checked = 0;
};

/// Grid search for a catalyst c with source (x) c majorised by target (x) c.
/// Candidates are scanned in ascending lexicographic order and the first
/// one that passes wins. Requires the direct conversion to be impossible.
CatalysisResult catalysis_search(std::span<const double> source, std::span<const double> target,
                                 const CatalysisOptions& options = {});

/// The two-outcome protocol taking (|00>+|11>)/sqrt2 to alpha|00>+beta|11>:
///   A0 = (alpha|0><0| + beta|1><1|) (x) 1
///   A1 = (beta|1><0| + alpha|0><1|) (x) (|1><0| + |0><1|)
KrausSet two_qubit_conversion_kraus(double alpha, double beta);

}  // namespace entmeas
