#include "entmeas/bounds.hpp"

#include <algorithm>

#include "entmeas/closed_form.hpp"
#include "entmeas/linalg.hpp"

namespace entmeas {

namespace {

struct Marginals {
  double ab, a, b;
};

Marginals entropies(const DensityOperator& rho, const Cut& cut) {
  const DensityOperator bi = as_bipartite(rho, cut);
  const int keep_a[] = {0};
  const int keep_b[] = {1};
  return {von_neumann_entropy(bi), von_neumann_entropy(partial_trace(bi, keep_a)),
          von_neumann_entropy(partial_trace(bi, keep_b))};
}

CMatrix swap_operator(int d) {
  CMatrix f = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

}  // namespace

double conditional_entropy(const DensityOperator& rho, const Cut& cut) {
  const auto s = entropies(rho, cut);
  return s.ab - s.b;
}

double hashing_lower_bound(const DensityOperator& rho, const Cut& cut) {
  const auto s = entropies(rho, cut);
  return std::max({s.b - s.ab, s.a - s.ab, 0.0});
}

bool is_ppt(const DensityOperator& rho, const Cut& cut) {
  return hermitian_eigen(partial_transpose(rho, cut)).values.minCoeff() >= -tol::kPsd;
}

DensityOperator werner_state(int d, double p) {
  if (d < 2) throw ArgumentError("werner_state: d must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("werner_state: p must lie in [0, 1]");
  const CMatrix id = CMatrix::Identity(d * d, d * d);
  const CMatrix f = swap_operator(d);
  const double dim_a = d * (d - 1) / 2.0;
  const double dim_s = d * (d + 1) / 2.0;
  const CMatrix sigma_a = (id - f) / (2.0 * dim_a);
  const CMatrix sigma_s = (id + f) / (2.0 * dim_s);
  return DensityOperator({d, d}, p * sigma_a + (1.0 - p) * sigma_s);
}

DensityOperator uu_twirl_two_qubit(const DensityOperator& rho) {
  if (rho.dims() != Dims{2, 2}) throw ArgumentError("uu_twirl_two_qubit: expected dims (2, 2)");
  const CVector singlet = states::singlet().amplitudes();
  const CMatrix projector = singlet * singlet.adjoint();
  const double fidelity = std::clamp((singlet.adjoint() * rho.matrix() * singlet)(0, 0).real(), 0.0, 1.0);
  const CMatrix out = fidelity * projector + (1.0 - fidelity) * (CMatrix::Identity(4, 4) - projector) / 3.0;
  return DensityOperator({2, 2}, out);
}

BoundsReport bounds_report(const DensityOperator& rho, const Cut& cut, const BoundsOptions& options) {
  BoundsReport report;
  report.lower["hashing"] = hashing_lower_bound(rho, cut);
  report.ppt = is_ppt(rho, cut);

  report.upper["log_negativity"] = log_negativity(rho, cut);
  report.certified["log_negativity"] = true;
  report.notes["log_negativity"] = "exact";

  const auto ree = relative_entropy_of_entanglement(rho, cut, FreeSet::ppt, options.solver);
  report.upper["relative_entropy"] = ree.value;
  // Any feasible closest state gives a valid upper bound, converged or not.
  report.certified["relative_entropy"] = true;
  report.notes["relative_entropy"] = to_string(ree.status);

  if (!options.skip_rains) {
    const auto rains = rains_bound(rho, cut, options.solver);
    report.upper["rains"] = rains.value;
    report.certified["rains"] = false;
    report.notes["rains"] = to_string(rains.status);
  }

  if (report.ppt) {
    report.distillable = 0.0;
    report.lower["hashing"] = 0.0;
    report.notes["distillable"] = "PPT state: distillable entanglement is zero";
  }

  for (const auto& [lname, lvalue] : report.lower)
    for (const auto& [uname, uvalue] : report.upper)
      if (report.certified[uname] && lvalue > uvalue + 1e-3)
        throw InternalError("bounds_report: lower bound " + lname + " exceeds certified upper bound " + uname);
  return report;
}

}  // namespace entmeas
