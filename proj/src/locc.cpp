#include "entmeas/locc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "entmeas/linalg.hpp"

namespace entmeas {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kZeroCoefficient = 1e-12;
constexpr double kPartialSumTolerance = 1e-12;

void pad_to(std::vector<double>& v, std::size_t n) { v.resize(std::max(v.size(), n), 0.0); }

std::vector<double> tensor(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a)
    for (double y : b) out.push_back(x * y);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool majorized_sorted(const std::vector<double>& source, const std::vector<double>& target) {
  double s = 0, t = 0;
  const std::size_t n = std::max(source.size(), target.size());
  for (std::size_t l = 0; l < n; ++l) {
    s += l < source.size() ? source[l] : 0.0;
    t += l < target.size() ? target[l] : 0.0;
    if (s > t + kPartialSumTolerance) return false;
  }
  return true;
}

}  // namespace

CVector SchmidtDecomposition::reconstruct() const {
  CVector out = CVector::Zero(basis_a.rows() * basis_b.rows());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out += std::sqrt(coefficients[i]) * kron(CVector(basis_a.col(k)), CVector(basis_b.col(k)));
  }
  return out;
}

SchmidtDecomposition schmidt(const PureState& psi, const Cut& cut) {
  const PureState bi = as_bipartite(psi, cut);
  const int da = bi.dims()[0];
  const int db = bi.dims()[1];
  // Row-major reshape: amplitude index a*db + b -> matrix entry (a, b).
  CMatrix amp(da, db);
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b) amp(a, b) = bi.amplitudes()[a * db + b];
  Eigen::JacobiSVD<CMatrix> svd(amp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  SchmidtDecomposition out;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double c = s[i] * s[i];
    if (c >= kZeroCoefficient) {
      out.coefficients.push_back(c);
      kept.push_back(i);
    }
  }
  const double total = std::accumulate(out.coefficients.begin(), out.coefficients.end(), 0.0);
  for (double& c : out.coefficients) c /= total;
  out.basis_a.resize(da, static_cast<Eigen::Index>(kept.size()));
  out.basis_b.resize(db, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    out.basis_a.col(static_cast<Eigen::Index>(k)) = svd.matrixU().col(kept[k]);
    // amp = U S V^dag, so the B factor of each term is conj(V column).
    out.basis_b.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(kept[k]).conjugate();
  }
  return out;
}

double entropy_of_entanglement(const PureState& psi, const Cut& cut) {
  const auto sd = schmidt(psi, cut);
  return shannon_entropy(sd.coefficients);
}

std::vector<double> normalize_schmidt_vector(std::span<const double> coefficients) {
  if (coefficients.empty()) throw ArgumentError("Schmidt vector must be nonempty");
  std::vector<double> out(coefficients.begin(), coefficients.end());
  double sum = 0;
  for (double& c : out) {
    if (!std::isfinite(c) || c < -kZeroCoefficient)
      throw ArgumentError("Schmidt coefficients must be nonnegative, got " + std::to_string(c));
    if (c < kZeroCoefficient) c = 0.0;
    sum += c;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw ArgumentError("Schmidt coefficients must sum to 1 (sum = " + std::to_string(sum) + ")");
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool majorization_convertible(std::span<const double> source, std::span<const double> target) {
  auto s = normalize_schmidt_vector(source);
  auto t = normalize_schmidt_vector(target);
  const auto n = std::max(s.size(), t.size());
  pad_to(s, n);
  pad_to(t, n);
  return majorized_sorted(s, t);
}

ConversionVerdict optimal_conversion_probability(std::span<const double> source,
                                                 std::span<const double> target) {
  auto s = normalize_schmidt_vector(source);
  auto t = normalize_schmidt_vector(target);
  const auto n = std::max(s.size(), t.size());
  pad_to(s, n);
  pad_to(t, n);

  ConversionVerdict verdict;
  verdict.deterministic = majorized_sorted(s, t);
  double best = 1.0;
  int best_index = 1;
  double tail_s = 0, tail_t = 0;
  std::vector<double> ratio(n, 1.0);
  for (std::size_t k = n; k-- > 0;) {
    tail_s += s[k];
    tail_t += t[k];
    // Tails are exact zeros beyond the Schmidt number: a zero target tail
    // imposes no constraint, a zero source tail forces p = 0.
    ratio[k] = tail_t <= 0.0 ? kInfinity : tail_s / tail_t;
  }
  for (std::size_t k = 0; k < n; ++k)
    if (ratio[k] < best) {
      best = ratio[k];
      best_index = static_cast<int>(k) + 1;
    }
  // deterministic <=> probability == 1, even at the tolerance edge.
  verdict.probability = verdict.deterministic ? 1.0 : std::min(best, std::nextafter(1.0, 0.0));
  verdict.limiting_index = best_index;
  return verdict;
}

namespace {

// Partitions of `total` into exactly `parts` positive integers, each listed
// in descending order.
void enumerate_compositions(int total, int parts, int max_part, std::vector<int>& prefix,
                            std::vector<std::vector<int>>& out) {
  if (parts == 1) {
    if (total >= 1 && total <= max_part) {
      prefix.push_back(total);
      out.push_back(prefix);
      prefix.pop_back();
    }
    return;
  }
  // The leading part must be at least ceil(total / parts).
  const int lo = (total + parts - 1) / parts;
  for (int first = lo; first <= std::min(max_part, total - (parts - 1)); ++first) {
    prefix.push_back(first);
    enumerate_compositions(total - first, parts - 1, first, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

CatalysisResult catalysis_search(std::span<const double> source, std::span<const double> target,
                                 const CatalysisOptions& options) {
  if (options.catalyst_rank != 2 && options.catalyst_rank != 3)
    throw ArgumentError("catalysis_search: catalyst rank bound must be 2 or 3");
  if (options.grid_resolution < 10)
    throw ArgumentError("catalysis_search: grid resolution must be at least 10");
  const auto s = normalize_schmidt_vector(source);
  const auto t = normalize_schmidt_vector(target);
  if (majorization_convertible(s, t))
    throw ArgumentError("catalysis_search: conversion is already possible without a catalyst");

  const int n = options.grid_resolution;
  std::vector<std::vector<int>> grid;
  for (int rank = 2; rank <= options.catalyst_rank; ++rank) {
    std::vector<int> prefix;
    enumerate_compositions(n, rank, n - 1, prefix, grid);
  }
  std::vector<std::vector<double>> candidates;
  candidates.reserve(grid.size());
  for (const auto& g : grid) {
    std::vector<double> c;
    for (int x : g) c.push_back(static_cast<double>(x) / n);
    candidates.push_back(std::move(c));
  }
  std::sort(candidates.begin(), candidates.end());

  const int count = static_cast<int>(candidates.size());
  CatalysisResult result;
  if (options.execution == Execution::serial) {
    for (int i = 0; i < count; ++i) {
      ++result.candidates_checked;
      const auto& c = candidates[static_cast<std::size_t>(i)];
      if (majorized_sorted(tensor(s, c), tensor(t, c))) {
        result.catalyst = c;
        break;
      }
    }
  } else {
    std::vector<char> passes(static_cast<std::size_t>(count), 0);
    for_each_index(Execution::parallel, count, [&](int i) {
      const auto& c = candidates[static_cast<std::size_t>(i)];
      passes[static_cast<std::size_t>(i)] = majorized_sorted(tensor(s, c), tensor(t, c)) ? 1 : 0;
    });
    const auto it = std::find(passes.begin(), passes.end(), 1);
    result.candidates_checked = it == passes.end() ? count : static_cast<int>(it - passes.begin()) + 1;
    if (it != passes.end()) result.catalyst = candidates[static_cast<std::size_t>(it - passes.begin())];
  }
  if (result.catalyst) {
    const auto& c = *result.catalyst;
    if (!majorization_convertible(tensor(s, c), tensor(t, c)))
      throw InternalError("catalysis_search: returned catalyst failed re-verification");
    result.status = Status::exact;
  }
  return result;
}

KrausSet two_qubit_conversion_kraus(double alpha, double beta) {
  if (alpha < 0 || beta < 0) throw ArgumentError("two_qubit_conversion_kraus: amplitudes must be nonnegative");
  if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-9)
    throw ArgumentError("two_qubit_conversion_kraus: alpha^2 + beta^2 must equal 1");
  CMatrix local0 = CMatrix::Zero(2, 2);
  local0(0, 0) = alpha;
  local0(1, 1) = beta;
  CMatrix local1 = CMatrix::Zero(2, 2);
  local1(1, 0) = beta;
  local1(0, 1) = alpha;
  CMatrix flip = CMatrix::Zero(2, 2);
  flip(1, 0) = 1.0;
  flip(0, 1) = 1.0;
  return KrausSet({kron(local0, CMatrix::Identity(2, 2)), kron(local1, flip)}, true);
}

}  // namespace entmeas
