#include "entmeas/cones.hpp"

#include <cmath>

#include "entmeas/linalg.hpp"

namespace entmeas {

namespace {

void add_offdiagonal(std::vector<sdp::SparseHermitian>& out, int d) {
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      sdp::SparseHermitian re;
      re.add(j, k, s);
      re.add(k, j, s);
      out.push_back(std::move(re));
      sdp::SparseHermitian im;
      im.add(j, k, Complex(0, -s));
      im.add(k, j, Complex(0, s));
      out.push_back(std::move(im));
    }
}

}  // namespace

std::vector<sdp::SparseHermitian> hermitian_basis(int d) {
  std::vector<sdp::SparseHermitian> out;
  for (int j = 0; j < d; ++j) {
    sdp::SparseHermitian e;
    e.add(j, j, 1.0);
    out.push_back(std::move(e));
  }
  add_offdiagonal(out, d);
  return out;
}

std::vector<sdp::SparseHermitian> traceless_hermitian_basis(int d) {
  std::vector<sdp::SparseHermitian> out;
  for (int l = 1; l < d; ++l) {
    const double s = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    sdp::SparseHermitian e;
    for (int j = 0; j < l; ++j) e.add(j, j, s);
    e.add(l, l, -l * s);
    out.push_back(std::move(e));
  }
  add_offdiagonal(out, d);
  return out;
}

sdp::SparseHermitian partial_transpose(const sdp::SparseHermitian& m, const Dims& dims,
                                       std::span<const int> parties) {
  std::vector<int> strides(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    strides[static_cast<std::size_t>(k)] =
        strides[static_cast<std::size_t>(k) + 1] * dims[static_cast<std::size_t>(k) + 1];
  sdp::SparseHermitian out;
  for (const auto& e : m.entries) {
    int ti = e.row, tj = e.col;
    for (int p : parties) {
      const auto up = static_cast<std::size_t>(p);
      const int di = (e.row / strides[up]) % dims[up];
      const int dj = (e.col / strides[up]) % dims[up];
      ti += (dj - di) * strides[up];
      tj += (di - dj) * strides[up];
    }
    out.add(ti, tj, e.value);
  }
  return out;
}

CMatrix AffineHermitian::evaluate(const RVector& y) const {
  CMatrix out = offset;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const double yi = y[first + static_cast<Eigen::Index>(i)];
    for (const auto& e : directions[i].entries) out(e.row, e.col) += yi * e.value;
  }
  return hermitian_part(out);
}

double AffineHermitian::trace_with_offset(const CMatrix& g) const {
  return (g.cwiseProduct(offset.transpose())).sum().real();
}

RVector AffineHermitian::trace_with_directions(const CMatrix& g) const {
  RVector out(static_cast<Eigen::Index>(directions.size()));
  for (std::size_t i = 0; i < directions.size(); ++i) {
    double acc = 0;
    for (const auto& e : directions[i].entries) acc += (g(e.col, e.row) * e.value).real();
    out[static_cast<Eigen::Index>(i)] = acc;
  }
  return out;
}

void LmiBuilder::require_psd(const AffineHermitian& m, double sign, const Dims& dims,
                             std::span<const int> transpose_parties) {
  const bool transpose = !transpose_parties.empty();
  const auto n = static_cast<int>(m.offset.rows());
  sdp::LmiBlock block;
  block.size = n;
  block.constant = sign * (transpose ? partial_transpose(m.offset, dims, transpose_parties) : m.offset);
  block.coefficients.assign(static_cast<std::size_t>(variables_), {});
  for (std::size_t i = 0; i < m.directions.size(); ++i) {
    sdp::SparseHermitian a = transpose ? partial_transpose(m.directions[i], dims, transpose_parties)
                                       : m.directions[i];
    // Block reads C - sum y_i A_i, so the coefficient is -sign * direction.
    for (auto& e : a.entries) e.value *= -sign;
    block.coefficients[static_cast<std::size_t>(m.first) + i] = std::move(a);
  }
  blocks_.push_back(std::move(block));
}

sdp::Problem LmiBuilder::finish(RVector objective) && {
  if (objective.size() != variables_) throw ArgumentError("LmiBuilder: objective length mismatch");
  sdp::Problem p;
  p.objective = std::move(objective);
  p.blocks = std::move(blocks_);
  return p;
}

ConeSpec ConeSpec::of(ConeKind kind) {
  return {kind, kind == ConeKind::negated_psd ? -1.0 : 1.0};
}

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::ppt_operators: return "ppt";
    case ConeKind::separable_outer: return "separable-outer";
    case ConeKind::all_psd: return "all-psd";
    case ConeKind::negated_psd: return "negated-psd";
  }
  return "unknown";
}

void require_in_cone(LmiBuilder& builder, const AffineHermitian& m, ConeKind kind, const Dims& dims) {
  static constexpr int kTransposeB[] = {1};
  switch (kind) {
    case ConeKind::ppt_operators:
      builder.require_psd(m, 1.0, dims, kTransposeB);
      break;
    case ConeKind::separable_outer:
      builder.require_psd(m);
      builder.require_psd(m, 1.0, dims, kTransposeB);
      break;
    case ConeKind::all_psd:
      builder.require_psd(m);
      break;
    case ConeKind::negated_psd:
      builder.require_psd(m, -1.0);
      break;
  }
}

bool ppt_is_exact(const Dims& dims) {
  if (dims.size() != 2) return false;
  const int lo = std::min(dims[0], dims[1]);
  const int hi = std::max(dims[0], dims[1]);
  return lo == 2 && hi <= 3;
}

namespace {

constexpr int kPartyB[] = {1};

double min_eigenvalue(const CMatrix& m) { return hermitian_eigen(m).values.minCoeff(); }

// Smallest eps with (1 - eps) m + eps I/d >= 0.
double mixing_needed(const CMatrix& m, int d) {
  const double lo = min_eigenvalue(m);
  if (lo >= 0) return 0;
  return -lo * d / (1.0 - lo * d);
}

// Mixes an approximate solver output with I/d until it is exactly inside the
// cone, so callers can rely on feasibility.
CMatrix repair(const CMatrix& sigma, const Dims& dims, ConeKind kind) {
  const auto d = static_cast<int>(sigma.rows());
  double eps = 0;
  if (kind != ConeKind::ppt_operators) eps = std::max(eps, mixing_needed(sigma, d));
  if (kind == ConeKind::ppt_operators || kind == ConeKind::separable_outer)
    eps = std::max(eps, mixing_needed(partial_transpose(sigma, dims, kPartyB), d));
  if (eps == 0) return sigma;
  eps = std::min(1.0, eps * (1.0 + 1e-9));
  return (1.0 - eps) * sigma + eps * CMatrix::Identity(d, d) / static_cast<double>(d);
}

// Valid for any solver output: for sigma in the cone and X >= 0,
// tr(G sigma) >= tr((G - X^{T_B}) sigma) >= lambda_min(G - X^{T_B}).
double certified_lower_bound(const CMatrix& g, const Dims& dims, ConeKind kind, const sdp::Solution& sol) {
  switch (kind) {
    case ConeKind::all_psd:
      return min_eigenvalue(g);
    case ConeKind::ppt_operators:
      return min_eigenvalue(partial_transpose(g, dims, kPartyB));
    case ConeKind::separable_outer: {
      const CMatrix x = spectral_map(sol.primal.at(1), [](double v) { return std::max(v, 0.0); });
      return min_eigenvalue(g - partial_transpose(x, dims, kPartyB));
    }
    case ConeKind::negated_psd:
      break;
  }
  throw InternalError("certified_lower_bound: cone holds no states");
}

}  // namespace

LinearMinimum minimize_linear(const CMatrix& g, const Dims& dims, ConeKind kind,
                              const sdp::Options& options) {
  if (dims.size() != 2) throw ArgumentError("minimize_linear: expected a two-party operator");
  if (kind == ConeKind::negated_psd) throw ArgumentError("minimize_linear: cone holds no states");
  const int d = total_dimension(dims);
  AffineHermitian sigma;
  sigma.offset = CMatrix::Identity(d, d) / static_cast<double>(d);
  sigma.directions = traceless_hermitian_basis(d);
  const int m = static_cast<int>(sigma.directions.size());
  LmiBuilder builder(m);
  require_in_cone(builder, sigma, kind, dims);
  const CMatrix gh = hermitian_part(g);
  const RVector coeffs = sigma.trace_with_directions(gh);
  const auto solution = sdp::solve(std::move(builder).finish(-coeffs), options);

  LinearMinimum out;
  out.status = solution.status;
  out.iterations = solution.iterations;
  out.argmin = repair(sigma.evaluate(solution.y), dims, kind);
  out.value = (gh.cwiseProduct(out.argmin.transpose())).sum().real();
  out.lower_bound = std::min(out.value, certified_lower_bound(gh, dims, kind, solution));
  return out;
}

}  // namespace entmeas
