#include <doctest.h>

#include "entmeas/bounds.hpp"
#include "entmeas/closed_form.hpp"
#include "support.hpp"

using namespace entmeas;
using namespace entmeas::testing;

TEST_SUITE("bounds") {

TEST_CASE("conditional entropy examples") {
  CHECK(conditional_entropy(density(states::bell())) == doctest::Approx(-1.0));
  CHECK(conditional_entropy(DensityOperator::maximally_mixed({2, 2})) == doctest::Approx(1.0));
  CHECK(std::abs(conditional_entropy(density(states::basis({2, 2}, 1)))) < 1e-12);
}

TEST_CASE("hashing bound examples") {
  CHECK(hashing_lower_bound(density(states::bell())) == doctest::Approx(1.0));
  CHECK(hashing_lower_bound(DensityOperator::maximally_mixed({2, 3})) == 0.0);
  CHECK(hashing_lower_bound(bell_correlated(0.5, 0.3)) == doctest::Approx(1.0 - binary_entropy(0.8)).epsilon(1e-12));
  CHECK(hashing_lower_bound(bell_correlated(0.5, 0.3)) == doctest::Approx(0.2780719051126377).epsilon(1e-12));
}

TEST_CASE("PPT test examples") {
  CHECK(is_ppt(DensityOperator::maximally_mixed({2, 2})));
  CHECK_FALSE(is_ppt(density(states::bell())));
  CHECK(is_ppt(isotropic_two_qubit(1.0 / 3.0)));
  CHECK_FALSE(is_ppt(isotropic_two_qubit(1.0 / 3.0 + 1e-6)));
}

TEST_CASE("Werner state examples") {
  const auto singlet = states::singlet().amplitudes();
  CHECK(max_abs(werner_state(2, 1.0).matrix() - singlet * singlet.adjoint()) < 1e-14);

  const auto sym = werner_state(3, 0.0);
  CHECK(std::abs(sym.matrix().trace().real() - 1.0) < 1e-14);
  const RVector spectrum = hermitian_eigen(sym.matrix()).values;
  int rank = 0;
  for (Eigen::Index i = 0; i < spectrum.size(); ++i) rank += spectrum[i] > 1e-12;
  CHECK(rank == 6);

  const auto anti = werner_state(3, 1.0);
  CHECK(max_abs(anti.matrix() * anti.matrix() * 3.0 - anti.matrix()) < 1e-14);

  CHECK_THROWS_AS(werner_state(1, 0.5), ArgumentError);
  CHECK_THROWS_AS(werner_state(3, 1.5), ArgumentError);
}

TEST_CASE("Werner states are U x U invariant and cross PPT once") {
  Rng rng = make_stream(60, 0);
  for (int d = 2; d <= 4; ++d) {
    const auto rho = werner_state(d, 0.7);
    const CMatrix u = random_unitary(rng, d);
    const CMatrix uu = kron(u, u);
    CHECK(max_abs(uu * rho.matrix() * uu.adjoint() - rho.matrix()) < 1e-9);

    int flips = 0;
    bool previous = true;
    for (int k = 0; k <= 200; ++k) {
      const bool ppt = is_ppt(werner_state(d, k / 200.0));
      if (ppt != previous) ++flips;
      previous = ppt;
    }
    CHECK(flips == 1);
  }
}

TEST_CASE("UU twirl") {
  const auto singlet = density(states::singlet());
  CHECK(max_abs(uu_twirl_two_qubit(singlet).matrix() - singlet.matrix()) < 1e-14);
  const auto mixed = DensityOperator::maximally_mixed({2, 2});
  CHECK(max_abs(uu_twirl_two_qubit(mixed).matrix() - mixed.matrix()) < 1e-14);

  const auto twirled = uu_twirl_two_qubit(density(states::basis({2, 2}, 0)));
  const CMatrix p = singlet.matrix();
  CHECK(max_abs(twirled.matrix() - (CMatrix::Identity(4, 4) - p) / 3.0) < 1e-14);

  Rng rng = make_stream(61, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(rng, {2, 2});
    const auto t = uu_twirl_two_qubit(rho);
    CHECK(max_abs(uu_twirl_two_qubit(t).matrix() - t.matrix()) < 1e-12);
    CHECK(std::abs(t.matrix().trace().real() - 1.0) < 1e-12);
    CHECK(log_negativity(t) <= log_negativity(rho) + 1e-9);
    const CMatrix u = random_unitary(rng, 2);
    const CMatrix uu = kron(u, u);
    CHECK(max_abs(uu * t.matrix() * uu.adjoint() - t.matrix()) < 1e-9);
    CHECK(fidelity(states::singlet(), t) == doctest::Approx(fidelity(states::singlet(), rho)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(uu_twirl_two_qubit(DensityOperator::maximally_mixed({2, 3})), ArgumentError);
}

TEST_CASE("bounds report examples") {
  auto report = bounds_report(density(states::bell()));
  CHECK(report.lower.at("hashing") == doctest::Approx(1.0));
  CHECK(report.upper.at("log_negativity") == doctest::Approx(1.0));
  CHECK(report.upper.at("relative_entropy") == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_FALSE(report.ppt);
  CHECK_FALSE(report.distillable.has_value());

  BoundsOptions skip;
  skip.skip_rains = true;
  report = bounds_report(isotropic_two_qubit(0.2), default_cut(), skip);
  CHECK(report.ppt);
  REQUIRE(report.distillable.has_value());
  CHECK(*report.distillable == 0.0);
  CHECK(report.upper.count("rains") == 0);

  report = bounds_report(DensityOperator::maximally_mixed({2, 2}));
  for (const auto& [name, value] : report.lower) CHECK(value == 0.0);
  for (const auto& [name, value] : report.upper) CHECK(std::abs(value) < 1e-6);
}

TEST_CASE("hashing sits below the log-negativity on random states") {
  Rng rng = make_stream(62, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = random_density(rng, {2, 2}, 1 + trial % 4);
    CHECK(hashing_lower_bound(rho) <= log_negativity(rho) + 1e-6);
  }
}

}  // TEST_SUITE
