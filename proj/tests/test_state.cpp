#include <doctest.h>

#include "entmeas/state_io.hpp"
#include "support.hpp"

using namespace entmeas;
using namespace entmeas::testing;

TEST_SUITE("qstate-core") {

TEST_CASE("density operator construction enforces invariants") {
  CMatrix m = CMatrix::Identity(4, 4) / 4.0;
  CHECK_NOTHROW(DensityOperator({2, 2}, m));

  CMatrix bad_trace = m * 1.01;
  try {
    DensityOperator({2, 2}, bad_trace);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "unit_trace");
    CHECK(e.residual() == doctest::Approx(0.01));
  }

  CMatrix non_hermitian = m;
  non_hermitian(0, 1) = Complex(0, 1e-3);
  try {
    DensityOperator({2, 2}, non_hermitian);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "hermitian");
  }

  CMatrix negative = CMatrix::Zero(4, 4);
  negative(0, 0) = 1.2;
  negative(1, 1) = -0.2;
  try {
    DensityOperator({2, 2}, negative);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.invariant() == "positive_semidefinite");
    CHECK(e.residual() == doctest::Approx(0.2));
  }

  CHECK_THROWS_AS(DensityOperator({1, 4}, m), ValidationError);
  CHECK_THROWS_AS(DensityOperator({2, 3}, m), ValidationError);
  CHECK_THROWS_AS(PureState({2}, CVector::Ones(2)), ValidationError);
}

TEST_CASE("partial trace examples") {
  const auto bell = density(states::bell());
  const int keep_a[] = {0};
  const auto rho_a = partial_trace(bell, keep_a);
  CHECK(max_abs(rho_a.matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-12);

  Rng rng = make_stream(1, 0);
  const auto a = random_density(rng, {3});
  const auto b = random_density(rng, {2});
  CHECK(max_abs(partial_trace(tensor(a, b), keep_a).matrix() - a.matrix()) < 1e-12);

  const auto w = density(states::w(3));
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 2.0 / 3.0;
  expected(1, 1) = 1.0 / 3.0;
  CHECK(max_abs(partial_trace(w, keep_a).matrix() - expected) < 1e-12);

  const int bad[] = {3};
  CHECK_THROWS_AS(partial_trace(w, bad), ArgumentError);
}

TEST_CASE("partial trace of a tensor embedding recovers the factor") {
  Rng rng = make_stream(2, 0);
  for (int da = 2; da <= 3; ++da)
    for (int db = 2; db <= 3; ++db) {
      const auto a = random_density(rng, {da});
      const auto b = random_density(rng, {db});
      const int keep_a[] = {0};
      const int keep_b[] = {1};
      CHECK(max_abs(partial_trace(tensor(a, b), keep_a).matrix() - a.matrix()) < 1e-12);
      CHECK(max_abs(partial_trace(tensor(a, b), keep_b).matrix() - b.matrix()) < 1e-12);
    }
}

TEST_CASE("partial transpose examples") {
  CMatrix diag = CMatrix::Zero(4, 4);
  diag.diagonal() << 0.1, 0.2, 0.3, 0.4;
  const DensityOperator sep({2, 2}, diag);
  CHECK(max_abs(partial_transpose(sep, 1) - diag) < 1e-15);

  const auto bell = density(states::bell());
  const RVector spectrum = hermitian_eigen(partial_transpose(bell, 1)).values;
  CHECK(spectrum[0] == doctest::Approx(-0.5));
  CHECK(spectrum[1] == doctest::Approx(0.5));
  CHECK(spectrum[3] == doctest::Approx(0.5));

  Rng rng = make_stream(3, 0);
  const auto rho = random_density(rng, {2, 3});
  const int b[] = {1};
  const CMatrix twice = partial_transpose(partial_transpose(rho, 1), rho.dims(), b);
  CHECK(max_abs(twice - rho.matrix()) < 1e-14);
}

TEST_CASE("partial transpose spectrum does not depend on the transposed party") {
  Rng rng = make_stream(4, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(rng, {2, 3});
    const RVector a = hermitian_eigen(partial_transpose(rho, 0)).values;
    const RVector b = hermitian_eigen(partial_transpose(rho, 1)).values;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("von Neumann entropy examples") {
  CHECK(von_neumann_entropy(density(states::ghz(3))) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(von_neumann_entropy(DensityOperator::maximally_mixed({4})) == doctest::Approx(2.0));
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.8;
  m(1, 1) = 0.2;
  CHECK(von_neumann_entropy(DensityOperator({2}, m)) == doctest::Approx(0.7219280948873623).epsilon(1e-12));
}

TEST_CASE("relative entropy examples") {
  Rng rng = make_stream(5, 0);
  const auto rho = random_density(rng, {2, 2});
  CHECK(std::abs(relative_entropy(rho, rho)) < 1e-10);
  CHECK(relative_entropy(density(states::bell()), DensityOperator::maximally_mixed({2, 2})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  const auto zero = density(states::basis({2}, 0));
  const auto one = density(states::basis({2}, 1));
  CHECK(std::isinf(relative_entropy(zero, one)));
  CHECK_THROWS_AS(relative_entropy(zero, rho), ArgumentError);
}

TEST_CASE("relative entropy is nonnegative and vanishes only on equal states") {
  Rng rng = make_stream(6, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = random_density(rng, {2, 2});
    const auto sigma = random_density(rng, {2, 2});
    const double s = relative_entropy(rho, sigma);
    CHECK(s >= 0.0);
    if (s < 1e-12) CHECK(trace_norm(rho.matrix() - sigma.matrix()) <= 1e-8);
  }
}

TEST_CASE("trace norm examples") {
  Rng rng = make_stream(7, 0);
  CHECK(trace_norm(random_density(rng, {3}).matrix()) == doctest::Approx(1.0));
  CHECK(trace_norm(partial_transpose(density(states::bell()), 1)) == doctest::Approx(2.0));
  CHECK(trace_norm(CMatrix::Zero(3, 3)) == 0.0);
}

TEST_CASE("mutual information examples and cross-check") {
  Rng rng = make_stream(8, 0);
  const auto product = tensor(random_density(rng, {2}), random_density(rng, {3}));
  CHECK(std::abs(mutual_information(product)) < 1e-10);
  CHECK(mutual_information(density(states::bell())) == doctest::Approx(2.0));
  CMatrix classical = CMatrix::Zero(4, 4);
  classical(0, 0) = 0.5;
  classical(3, 3) = 0.5;
  CHECK(mutual_information(DensityOperator({2, 2}, classical)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(mutual_information(density(states::ghz(3))), ArgumentError);

  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(rng, {2, 3});
    const int keep_a[] = {0};
    const int keep_b[] = {1};
    const auto marginals = tensor(partial_trace(rho, keep_a), partial_trace(rho, keep_b));
    CHECK(std::abs(mutual_information(rho) - relative_entropy(rho, marginals)) < 1e-8);
  }
}

TEST_CASE("conditional mutual information examples") {
  Rng rng = make_stream(9, 0);
  const auto e0 = density(states::basis({2}, 0));
  const auto rho = random_density(rng, {2, 2});
  CHECK(conditional_mutual_information(tensor(rho, e0)) == doctest::Approx(mutual_information(rho)).epsilon(1e-10));
  CHECK(conditional_mutual_information(tensor(density(states::bell()), e0)) == doctest::Approx(2.0));
  CHECK(conditional_mutual_information(density(states::ghz(3))) == doctest::Approx(1.0));
  CHECK_THROWS_AS(conditional_mutual_information(rho), ArgumentError);
  for (int trial = 0; trial < 20; ++trial)
    CHECK(conditional_mutual_information(random_density(rng, {2, 2, 2})) >= 0.0);
}

TEST_CASE("Kraus application") {
  Rng rng = make_stream(10, 0);
  const auto rho = random_density(rng, {2, 2});
  const KrausSet identity({CMatrix::Identity(4, 4)}, true);
  CHECK(max_abs(apply_kraus_averaged(identity, rho).matrix() - rho.matrix()) < 1e-14);

  CMatrix p0 = CMatrix::Zero(2, 2);
  CMatrix p1 = CMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  const KrausSet dephase({p0, p1}, true);
  CVector plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto out = apply_kraus_averaged(dephase, density(PureState({2}, plus)));
  CHECK(max_abs(out.matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-14);

  const auto outcomes = apply_kraus_selective(dephase, density(states::basis({2}, 0)));
  REQUIRE(outcomes.size() == 1);
  CHECK(outcomes[0].probability == doctest::Approx(1.0));

  CHECK_THROWS_AS(KrausSet({p0}, true), ValidationError);
  CHECK_THROWS_AS(apply_kraus_averaged(dephase, rho), ArgumentError);
}

TEST_CASE("averaged Kraus maps preserve trace") {
  Rng rng = make_stream(11, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix u = random_unitary(rng, 8);
    // Two Kraus operators from the top half of a random isometry 4 -> 8.
    const CMatrix a0 = u.block(0, 0, 4, 4);
    const CMatrix a1 = u.block(4, 0, 4, 4);
    const KrausSet k({a0, a1}, true);
    const auto rho = random_density(rng, {2, 2});
    CHECK(std::abs(apply_kraus_averaged(k, rho).matrix().trace().real() - 1.0) < 1e-9);
  }
}

TEST_CASE("state files round-trip and report parse positions") {
  Rng rng = make_stream(12, 0);
  const auto rho = random_density(rng, {2, 3});
  const auto back = to_density(state_from_json(parse_json_text(to_json(rho).dump())));
  CHECK(max_abs(back.matrix() - rho.matrix()) < 1e-15);

  const auto psi = random_pure_state(rng, {2, 2});
  const auto pure_back = std::get<PureState>(state_from_json(parse_json_text(to_json(psi).dump())));
  CHECK((pure_back.amplitudes() - psi.amplitudes()).norm() < 1e-15);

  try {
    parse_json_text("{\"dims\": [2, 2],\n  \"matrix\": [1, 2,]\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }

  CHECK_THROWS_AS(state_from_json(parse_json_text("{\"matrix\": []}")), ArgumentError);
}

}  // TEST_SUITE
