#include <doctest.h>

#include "entmeas/closed_form.hpp"
#include "entmeas/cones.hpp"
#include "entmeas/variational.hpp"
#include "support.hpp"

using namespace entmeas;
using namespace entmeas::testing;

namespace {

sdp::LmiBlock scalar_block(double c, double a) {
  sdp::LmiBlock block;
  block.size = 1;
  block.constant = CMatrix::Constant(1, 1, c);
  sdp::SparseHermitian coefficient;
  if (a != 0) coefficient.add(0, 0, a);
  block.coefficients = {coefficient};
  return block;
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("trivial feasibility lands on the maximally mixed state") {
  // sigma = I/d + sum_i y_i B_i over a traceless basis, sigma >= 0, no objective.
  for (int d : {2, 3, 4}) {
    AffineHermitian sigma;
    sigma.offset = CMatrix::Identity(d, d) / d;
    sigma.directions = traceless_hermitian_basis(d);
    const int n = static_cast<int>(sigma.directions.size());
    LmiBuilder builder(n);
    builder.require_psd(sigma);
    const auto sol = sdp::solve(std::move(builder).finish(RVector::Zero(n)));
    REQUIRE(sol.status == sdp::SolveStatus::optimal);
    const CMatrix x = sigma.evaluate(sol.y);
    CHECK(std::abs(x.trace().real() - 1.0) < 1e-12);
    CHECK(max_abs(x - CMatrix::Identity(d, d) / d) < 1e-6);
  }
}

TEST_CASE("scalar problems report distinct statuses") {
  sdp::Problem bounded;
  bounded.objective = RVector::Ones(1);
  bounded.blocks = {scalar_block(2.0, 1.0)};  // 2 - y >= 0
  auto sol = sdp::solve(bounded);
  CHECK(sol.status == sdp::SolveStatus::optimal);
  CHECK(sol.dual_objective == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(sol.gap <= 1e-7);

  sdp::Problem unbounded;
  unbounded.objective = RVector::Ones(1);
  unbounded.blocks = {scalar_block(1.0, -1.0)};  // 1 + y >= 0
  CHECK(sdp::solve(unbounded).status == sdp::SolveStatus::unbounded);

  sdp::Problem infeasible;
  infeasible.objective = RVector::Ones(1);
  infeasible.blocks = {scalar_block(-1.0, 1.0), scalar_block(-1.0, -1.0)};  // y <= -1 and y >= 1
  CHECK(sdp::solve(infeasible).status == sdp::SolveStatus::infeasible);

  sdp::Options tight;
  tight.max_iterations = 1;
  CHECK(sdp::solve(bounded, tight).status == sdp::SolveStatus::max_iterations);
}

TEST_CASE("linear minimisation over PPT states matches vertex enumeration on diagonal costs") {
  Rng rng = make_stream(40, 0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    CMatrix g = CMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) g(i, i) = u(rng);
    // Vertices of the diagonal product states are the basis projectors.
    const double brute = g.diagonal().real().minCoeff();
    const auto lm = minimize_linear(g, {2, 2}, ConeKind::separable_outer);
    CHECK(lm.status == sdp::SolveStatus::optimal);
    CHECK(lm.value == doctest::Approx(brute).epsilon(1e-6));
    CHECK(lm.lower_bound <= brute + 1e-12);
    CHECK(lm.lower_bound >= brute - 1e-6);
  }
}

TEST_CASE("linear minimisation certificates hold on random costs") {
  Rng rng = make_stream(41, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix g = hermitian_part(random_complex_gaussian(rng, 6, 6));
    for (auto kind : {ConeKind::separable_outer, ConeKind::all_psd}) {
      const auto lm = minimize_linear(g, {2, 3}, kind);
      // The argmin is an exact member of the cone.
      CHECK(std::abs(lm.argmin.trace().real() - 1.0) < 1e-10);
      CHECK(hermitian_eigen(lm.argmin).values.minCoeff() >= -1e-12);
      if (kind == ConeKind::separable_outer) {
        const int b[] = {1};
        CHECK(hermitian_eigen(partial_transpose(lm.argmin, {2, 3}, b)).values.minCoeff() >= -1e-12);
      } else {
        CHECK(lm.value == doctest::Approx(hermitian_eigen(g).values[0]).epsilon(1e-6));
      }
      CHECK(lm.lower_bound <= lm.value + 1e-12);
      CHECK(lm.value - lm.lower_bound < 1e-6);
    }
  }
}

TEST_CASE("global robustness of the Bell state") {
  // Noise along the isotropic line: rho_t = (psi + t I/4) / (1 + t) is PPT iff
  // t >= 2, but the optimal global noise is (I - psi)/3 type and gives t = 1.
  const auto bell = density(states::bell());
  const auto r = robustness(bell, default_cut(), Noise::global);
  CHECK(r.status == Status::converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));

  double brute = kInfinity;
  const CVector v = states::bell().amplitudes();
  const CMatrix psi = v * v.adjoint();
  // One-parameter family of Bell-diagonal noise sigma(s) = s I/4 + (1 - s)(I - psi)/3.
  for (int k = 0; k <= 1000; ++k) {
    const double s = k / 1000.0;
    const CMatrix sigma = s * CMatrix::Identity(4, 4) / 4.0 + (1 - s) * (CMatrix::Identity(4, 4) - psi) / 3.0;
    double lo = 0, hi = 10;
    for (int it = 0; it < 60; ++it) {
      const double t = (lo + hi) / 2;
      const CMatrix mixed = (psi + t * sigma) / (1 + t);
      const int b[] = {1};
      if (hermitian_eigen(partial_transpose(mixed, {2, 2}, b)).values[0] >= -1e-12) hi = t; else lo = t;
    }
    brute = std::min(brute, hi);
  }
  CHECK(brute == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(r.value - brute) < 1e-5);
}

TEST_CASE("base norm examples") {
  const auto bell = density(states::bell());
  const auto ppt = ConeSpec::of(ConeKind::ppt_operators);

  auto bn = base_norm(bell.matrix(), {2, 2}, ppt, ppt);
  CHECK(bn.b == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(bn.norm == doctest::Approx(2.0).epsilon(1e-6));
  // h = a Omega - b Delta is reproduced.
  CHECK(max_abs(bn.a * bn.omega - bn.b * bn.delta - bell.matrix()) < 1e-6);

  const auto mixed = DensityOperator::maximally_mixed({2, 2});
  bn = base_norm(mixed.matrix(), {2, 2}, ppt, ppt);
  CHECK(bn.b < 1e-6);
  CHECK(bn.norm == doctest::Approx(1.0).epsilon(1e-6));

  bn = base_norm(bell.matrix(), {2, 2}, ConeSpec::of(ConeKind::separable_outer), ConeSpec::of(ConeKind::all_psd));
  CHECK(bn.b == doctest::Approx(robustness(bell, default_cut(), Noise::global).value).epsilon(1e-6));

  CMatrix not_hermitian = bell.matrix();
  not_hermitian(0, 1) = 0.3;
  CHECK_THROWS_AS(base_norm(not_hermitian, {2, 2}, ppt, ppt), ValidationError);
}

TEST_CASE("base norm over PPT operators equals the negativity") {
  Rng rng = make_stream(42, 0);
  const auto ppt = ConeSpec::of(ConeKind::ppt_operators);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(rng, {2, 2}, 1 + trial % 4);
    CHECK(std::abs(base_norm(rho.matrix(), {2, 2}, ppt, ppt).b - negativity(rho)) <= 1e-6);
  }
}

TEST_CASE("PPT cone is exact on the small dims only") {
  CHECK(ppt_is_exact({2, 2}));
  CHECK(ppt_is_exact({2, 3}));
  CHECK(ppt_is_exact({3, 2}));
  CHECK_FALSE(ppt_is_exact({3, 3}));
  CHECK_FALSE(ppt_is_exact({2, 4}));
}

TEST_CASE("separable cone is closed under random local channels") {
  Rng rng = make_stream(43, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_density(rng, {2});
    const auto b = random_density(rng, {2});
    const auto sigma = tensor(a, b);
    const CMatrix u = random_unitary(rng, 4);
    // Local channel on A with two Kraus operators from an isometry 2 -> 4.
    const CMatrix k0 = kron(CMatrix(u.block(0, 0, 2, 2)), CMatrix(CMatrix::Identity(2, 2)));
    const CMatrix k1 = kron(CMatrix(u.block(2, 0, 2, 2)), CMatrix(CMatrix::Identity(2, 2)));
    const CMatrix out = k0 * sigma.matrix() * k0.adjoint() + k1 * sigma.matrix() * k1.adjoint();
    const int pb[] = {1};
    CHECK(hermitian_eigen(out).values.minCoeff() >= -1e-12);
    CHECK(hermitian_eigen(partial_transpose(out, {2, 2}, pb)).values.minCoeff() >= -1e-12);
  }
}

}  // TEST_SUITE
