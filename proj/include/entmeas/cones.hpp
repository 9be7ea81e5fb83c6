#pragma once

#include <optional>
#include <vector>

#include "entmeas/sdp.hpp"
#include "entmeas/state.hpp"

namespace entmeas {

/// Orthonormal real basis of the d x d Hermitian matrices under <A, B> = tr(AB):
/// diagonal units followed by symmetric and antisymmetric off-diagonal pairs.
std::vector<sdp::SparseHermitian> hermitian_basis(int d);
/// Same, restricted to traceless matrices (generalised Gell-Mann diagonal).
std::vector<sdp::SparseHermitian> traceless_hermitian_basis(int d);

sdp::SparseHermitian partial_transpose(const sdp::SparseHermitian& m, const Dims& dims,
                                       std::span<const int> parties);

/// offset + sum_i y[first + i] * directions[i]
struct AffineHermitian {
  CMatrix offset;
  std::vector<sdp::SparseHermitian> directions;
  int first = 0;

  CMatrix evaluate(const RVector& y) const;
  /// tr(G * M) = constant + coefficients . y
  double trace_with_offset(const CMatrix& g) const;
  RVector trace_with_directions(const CMatrix& g) const;
};

/// Accumulates LMI blocks over a fixed number of real variables.
class LmiBuilder {
 public:
  explicit LmiBuilder(int variables) : variables_(variables) {}

  /// sign * M >= 0, or sign * M^{T_parties} >= 0 when parties is nonempty.
  void require_psd(const AffineHermitian& m, double sign = 1.0, const Dims& dims = {},
                   std::span<const int> transpose_parties = {});

  sdp::Problem finish(RVector objective) &&;

  int variables() const { return variables_; }

 private:
  int variables_;
  std::vector<sdp::LmiBlock> blocks_;
};

/// Operator cones for the base-norm family on two-party operators:
///   ppt_operators    A^{T_B} >= 0 (A itself need not be positive)
///   separable_outer  A >= 0 and A^{T_B} >= 0, the PPT relaxation of separable
///   all_psd          A >= 0
///   negated_psd      -A >= 0
/// `normalization` is the trace every normalised member carries: +1, or -1
/// for the negated PSD cone.
enum class ConeKind { ppt_operators, separable_outer, all_psd, negated_psd };

struct ConeSpec {
  ConeKind kind = ConeKind::ppt_operators;
  double normalization = 1.0;

  static ConeSpec of(ConeKind kind);
  bool uses_partial_transpose() const {
    return kind == ConeKind::ppt_operators || kind == ConeKind::separable_outer;
  }
};

const char* to_string(ConeKind kind);

/// Adds the LMIs expressing "m is in the cone" for a two-party operator.
void require_in_cone(LmiBuilder& builder, const AffineHermitian& m, ConeKind kind, const Dims& dims);

/// True when PPT coincides with separability for these two-party dims.
bool ppt_is_exact(const Dims& dims);

struct LinearMinimum {
  CMatrix argmin;          // exactly inside the cone (solver output mixed with I/d if needed)
  double value = 0;        // tr(G argmin)
  double lower_bound = 0;  // certified: every sigma in the cone has tr(G sigma) >= lower_bound
  sdp::SolveStatus status = sdp::SolveStatus::max_iterations;
  int iterations = 0;
};

/// min tr(G sigma) over unit-trace sigma in the cone on two-party dims
/// (separable_outer gives PPT states).
LinearMinimum minimize_linear(const CMatrix& g, const Dims& dims, ConeKind kind,
                              const sdp::Options& options = {});

}  // namespace entmeas
