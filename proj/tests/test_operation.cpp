#include <doctest.h>

#include "qcoex/operation.hpp"
#include "test_support.hpp"

using namespace qcoex;

namespace {

CMatrix diag(std::initializer_list<double> entries) {
  CMatrix m(entries.size(), entries.size());
  std::size_t i = 0;
  for (double v : entries) m(i, i) = v, ++i;
  return m;
}

CMatrix max_entangled_choi(std::size_t d) {
  CMatrix psi(d * d, 1);
  for (std::size_t j = 0; j < d; ++j) psi(j * d + j, 0) = 1.0 / std::sqrt(double(d));
  return psi * psi.adjoint();
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("from_kraus identity gives the maximally entangled Choi operator") {
  for (std::size_t d : {2u, 3u}) {
    const auto op = Operation::from_kraus({CMatrix::identity(d)});
    CHECK(frobenius_distance(op.choi(), max_entangled_choi(d)) < 1e-14);
    CHECK(op.is_channel());
  }
}

TEST_CASE("from_kraus zero gives the null operation") {
  const auto op = Operation::from_kraus({CMatrix(2, 2)});
  CHECK(op.is_null());
  CHECK(op.kraus_rank() == 0);
}

TEST_CASE("split Kraus set {X/sqrt2, X/sqrt2} matches the single-operator Choi") {
  testing::Rng rng(21);
  const CMatrix x = testing::random_operation(rng, 3, 1).to_kraus()[0];
  const CMatrix half = x * complexd(1.0 / std::sqrt(2.0), 0.0);
  const auto split = Operation::from_kraus({half, half});
  const auto single = Operation::from_kraus({x});
  CHECK(frobenius_distance(split.choi(), single.choi()) < 1e-13);
}

TEST_CASE("from_kraus rejects trace-bound violations and mixed dimensions") {
  CHECK_THROWS_AS(
      Operation::from_kraus({CMatrix::identity(2) * complexd(std::sqrt(2.0), 0.0)}),
      TraceBoundViolated);
  CHECK_THROWS_AS(Operation::from_kraus({CMatrix::identity(2), CMatrix::identity(3)}),
                  DimensionMismatch);
}

TEST_CASE("to_kraus of the maximally entangled Choi is the identity up to phase") {
  const auto op = Operation::from_choi(2, max_entangled_choi(2));
  const auto kraus = op.to_kraus();
  REQUIRE(kraus.size() == 1);
  const auto lambda = [&] {
    complexd top = kraus[0](0, 0);
    return top;
  }();
  CHECK(std::abs(std::abs(lambda) - 1.0) < 1e-10);
  CHECK(frobenius_distance(kraus[0], CMatrix::identity(2) * lambda) < 1e-10);
}

TEST_CASE("to_kraus is minimal and reproduces the Choi operator") {
  testing::Rng rng(22);
  for (std::size_t d : {2u, 3u}) {
    for (std::size_t k = 1; k <= d; ++k) {
      const auto op = testing::random_operation(rng, d, k);
      const auto kraus = op.to_kraus();
      CHECK(kraus.size() == op.kraus_rank());
      CHECK(kraus.size() <= k);
      const auto rebuilt = Operation::from_kraus(kraus);
      CHECK(frobenius_distance(rebuilt.choi(), op.choi()) < 1e-10);
    }
  }
}

TEST_CASE("to_kraus discards redundant input operators") {
  testing::Rng rng(23);
  const CMatrix x = testing::random_operation(rng, 2, 1, 0.8).to_kraus()[0];
  const CMatrix half = x * complexd(1.0 / std::sqrt(2.0), 0.0);
  const auto redundant = Operation::from_kraus({half, half});
  CHECK(redundant.kraus_rank() == 1);
  CHECK(redundant.to_kraus().size() == 1);
}

TEST_CASE("preparator Kraus rank is rank(xi) * rank(A)") {
  testing::Rng rng(24);
  const Effect a(2, diag({0.7, 0.3}));
  const DensityState xi(2, diag({0.5, 0.5}));
  const auto op = preparator(a, xi);
  CHECK(op.kraus_rank() == 4);
  CHECK(op.to_kraus().size() == 4);
}

TEST_CASE("induced effect of Luders and preparator operations") {
  testing::Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + (trial % 2);
    const Effect a = testing::random_effect(rng, d);
    const DensityState xi = testing::random_state(rng, d);
    CHECK(frobenius_distance(luders(a).induced_effect().matrix(), a.matrix()) < 1e-10);
    CHECK(frobenius_distance(preparator(a, xi).induced_effect().matrix(), a.matrix()) <
          1e-10);
  }
  CHECK(null_operation(3).induced_effect().matrix().frobenius_norm() < 1e-14);
}

TEST_CASE("apply on named operations") {
  testing::Rng rng(26);

  SUBCASE("identity channel returns the input state") {
    const DensityState rho = testing::random_state(rng, 2);
    const auto res = identity_operation(2).apply(rho);
    CHECK(res.probability == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(res.conditional.has_value());
    CHECK(frobenius_distance(res.conditional->matrix(), rho.matrix()) < 1e-12);
  }

  SUBCASE("orthogonal Luders projection gives zero probability") {
    const auto op = luders(Effect(2, diag({1.0, 0.0})));
    const auto res = op.apply(DensityState(2, diag({0.0, 1.0})));
    CHECK(std::abs(res.probability) < 1e-12);
    CHECK_FALSE(res.conditional.has_value());
  }

  SUBCASE("preparator with A = I/2 outputs xi with probability one half") {
    const DensityState xi = testing::random_state(rng, 2);
    const auto op = preparator(Effect(2, diag({0.5, 0.5})), xi);
    const DensityState rho = testing::random_state(rng, 2);
    const auto res = op.apply(rho);
    CHECK(res.probability == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(res.conditional.has_value());
    CHECK(frobenius_distance(res.conditional->matrix(), xi.matrix()) < 1e-10);
  }

  SUBCASE("Pauli-X channel flips the basis state") {
    const auto op = unitary_channel(pauli_x());
    const auto res = op.apply(DensityState(2, diag({1.0, 0.0})));
    CHECK(res.probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(frobenius_distance(res.conditional->matrix(), diag({0.0, 1.0})) < 1e-12);
  }

  SUBCASE("probability equals tr[rho A] for random instances") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto op = testing::random_operation(rng, 3, 2);
      const DensityState rho = testing::random_state(rng, 3);
      const auto res = op.apply(rho);
      const double expected =
          (op.induced_effect().matrix() * rho.matrix()).trace().real();
      CHECK(res.probability == doctest::Approx(expected).epsilon(1e-10));
      CHECK(res.probability >= -1e-10);
      CHECK(res.probability <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("luders constructors") {
  CHECK(frobenius_distance(luders(Effect(2, CMatrix::identity(2))).choi(),
                           max_entangled_choi(2)) < 1e-14);
  CHECK(luders(Effect(2, CMatrix(2, 2))).is_null());

  testing::Rng rng(27);
  const Effect p = testing::rank1_projection(rng, 2);
  const CMatrix lp = p.matrix() * complexd(0.4, 0.0);
  CHECK(frobenius_distance(luders(Effect(2, lp)).choi(),
                           preparator(Effect(2, lp), DensityState(2, p.matrix())).choi()) <
        1e-12);
  const Effect a = testing::random_effect(rng, 3);
  CHECK(luders(a).choi().trace().real() ==
        doctest::Approx(a.matrix().trace().real() / 3.0).epsilon(1e-12));
  CHECK(luders(a).kraus_rank() == 1);
}

TEST_CASE("preparator Choi operator in the fixed ordering") {
  const Effect a(2, diag({0.6, 0.2}));
  const DensityState xi(2, diag({0.5, 0.5}));
  CHECK(frobenius_distance(preparator(a, xi).choi(), diag({0.15, 0.05, 0.15, 0.05})) <
        1e-14);

  testing::Rng rng(28);
  const DensityState xi2 = testing::random_state(rng, 2);
  const auto constant = preparator(Effect(2, CMatrix::identity(2)), xi2);
  CHECK(constant.is_channel());
  const auto res = constant.apply(testing::random_state(rng, 2));
  CHECK(frobenius_distance(res.conditional->matrix(), xi2.matrix()) < 1e-10);

  CHECK(preparator(Effect(2, CMatrix(2, 2)), xi2).is_null());
}

TEST_CASE("unitary_channel") {
  CHECK(frobenius_distance(unitary_channel(CMatrix::identity(2)).choi(),
                           max_entangled_choi(2)) < 1e-14);
  testing::Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix u = testing::random_unitary(rng, 3);
    const auto op = unitary_channel(u);
    CHECK(op.is_channel());
    CHECK(op.kraus_rank() == 1);
    CHECK(frobenius_distance(op.induced_effect().matrix(), CMatrix::identity(3)) < 1e-10);
  }
  CHECK_THROWS_AS(unitary_channel(diag({0.5, 1.0})), NotUnitary);
}

TEST_CASE("scale") {
  testing::Rng rng(30);
  const auto op = testing::random_operation(rng, 2, 2);
  CHECK(frobenius_distance(scale(op, 1.0).choi(), op.choi()) == 0.0);
  CHECK(scale(op, 0.0).is_null());
  CHECK(frobenius_distance(scale(op, 0.5).induced_effect().matrix(),
                           op.induced_effect().matrix() * complexd(0.5, 0.0)) < 1e-12);
  CHECK_THROWS_AS(scale(op, 1.5), OutOfRange);
  CHECK_THROWS_AS(scale(op, -0.1), OutOfRange);
}

TEST_CASE("round trip from_kraus(to_kraus(op)) preserves the Choi operator") {
  testing::Rng rng(31);
  for (std::size_t d : {2u, 3u}) {
    for (int trial = 0; trial < 25; ++trial) {
      const auto op = testing::random_operation(rng, d, 1 + (trial % 3));
      const auto rebuilt = Operation::from_kraus(op.to_kraus());
      CHECK(frobenius_distance(rebuilt.choi(), op.choi()) < 1e-9);
    }
  }
}

TEST_CASE("unitary remixing of a Kraus set leaves the Choi operator fixed") {
  testing::Rng rng(32);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 2 + (trial % 2);
    const std::size_t k = 2 + (trial % 2);
    const auto op = testing::random_operation(rng, d, k);
    const auto kraus = op.to_kraus();
    const std::size_t r = kraus.size();
    const CMatrix u = testing::random_unitary(rng, r);
    std::vector<CMatrix> mixed(r, CMatrix(d, d));
    for (std::size_t l = 0; l < r; ++l)
      for (std::size_t m = 0; m < r; ++m) mixed[l] = mixed[l] + kraus[m] * u(l, m);
    CHECK(frobenius_distance(Operation::from_kraus(mixed).choi(), op.choi()) < 1e-10);
  }
}

TEST_CASE("validating constructors reject invalid inputs") {
  CHECK_THROWS_AS(Effect(2, diag({1.2, 0.0})), InvalidEffect);
  CHECK_THROWS_AS(Effect(2, diag({-0.2, 0.5})), InvalidEffect);
  CHECK_THROWS_AS(DensityState(2, diag({0.9, 0.3})), InvalidState);
  CHECK_THROWS_AS(DensityState(2, diag({1.5, -0.5})), InvalidState);
  CHECK_THROWS_AS(Operation::from_choi(2, diag({1.0, 0.0, 0.0, -0.5})), InvalidOperation);
  CHECK_THROWS_AS(Operation::from_choi(2, CMatrix::identity(4)), TraceBoundViolated);
}

TEST_CASE("instrument normalization") {
  testing::Rng rng(33);
  const Effect a = testing::random_effect(rng, 2);
  const CMatrix complement = hermitize(CMatrix::identity(2) - a.matrix());
  const Instrument inst(
      2, {{"a", luders(a)}, {"rest", luders(Effect(2, complement))}});
  CHECK(frobenius_distance(partial_trace_first(inst.total_choi(), 2) * complexd(2.0, 0.0),
                           CMatrix::identity(2)) < 1e-10);

  CHECK_THROWS_AS(Instrument(2, {{"only", scale(identity_operation(2), 0.5)}}),
                  InvalidInstrument);
}
