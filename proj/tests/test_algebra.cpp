#include <doctest.h>

#include "test_helpers.hpp"
#include "tracelab/algebra.hpp"
#include "tracelab/harness.hpp"
#include "tracelab/rng.hpp"

using namespace tracelab;
using namespace tracelab::testing;

TEST_CASE("make_algebra computes tau(1) from dims and weights") {
  CHECK(make_algebra({{1, 1.0}})->trace_identity() == doctest::Approx(1.0));
  CHECK(make_algebra({{2, 1.0}})->trace_identity() == doctest::Approx(2.0));
  CHECK(make_algebra({{1, 2.0}, {2, 0.5}})->trace_identity() == doctest::Approx(3.0));
}

TEST_CASE("make_algebra rejects bad block lists") {
  CHECK_THROWS_AS(make_algebra({}), EmptyAlgebra);
  CHECK_THROWS_AS(make_algebra({{0, 1.0}}), ZeroDimension);
  CHECK_THROWS_AS(make_algebra({{2, 0.0}}), NonpositiveWeight);
  CHECK_THROWS_AS(make_algebra({{2, -1.0}}), NonpositiveWeight);
}

TEST_CASE("element arithmetic is blockwise matrix arithmetic") {
  const auto a = scalar_algebra();
  const auto x = scalar_el(a, {2.0, 0.0});
  const auto y = scalar_el(a, {3.0, 0.0});
  CHECK((x * y).block(0)(0, 0) == Complex(6.0, 0.0));

  const auto zero = AlgebraElement::zero(a);
  CHECK(operator_norm((x + zero) - x) == 0.0);

  // adjoint is an antihomomorphism, checked blockwise on a 2x2 pair
  const auto b = make_algebra({{2, 1.0}});
  CounterRng rng(7);
  const auto u = random_element(b, rng);
  const auto v = random_element(b, rng);
  CHECK(operator_norm((u * v).adjoint() - v.adjoint() * u.adjoint()) < 1e-12);
}

TEST_CASE("arithmetic across different block structures is rejected") {
  const auto a = make_algebra({{2, 1.0}});
  const auto b = make_algebra({{2, 0.5}});
  const auto c = make_algebra({{3, 1.0}});
  CHECK_THROWS_AS(AlgebraElement::identity(a) + AlgebraElement::identity(b), AlgebraMismatch);
  CHECK_THROWS_AS(AlgebraElement::identity(a) * AlgebraElement::identity(c), AlgebraMismatch);
}

TEST_CASE("trace weights block traces") {
  const auto a = make_algebra({{1, 2.0}, {2, 0.5}});
  std::vector<Matrix> data = {Matrix::Constant(1, 1, Complex(3.0, 0.0)), Matrix::Identity(2, 2)};
  const AlgebraElement x(a, std::move(data));
  CHECK(trace(x).real() == doctest::Approx(7.0));
  CHECK(trace(x).imag() == doctest::Approx(0.0));
  CHECK(trace(AlgebraElement::zero(a)) == Complex(0.0, 0.0));
}

TEST_CASE("trace is unitarily invariant (100 random trials)") {
  const auto a = make_algebra({{3, 0.7}, {2, 1.3}});
  for (int t = 0; t < 100; ++t) {
    CounterRng rng(derive_trial_seed(42, "unitary-invariance", t));
    const auto x = random_element(a, rng);
    const auto u = random_unitary_contraction(a, rng, IsometryKind::Unitary);
    const Complex lhs = trace(u * x * u.adjoint());
    const Complex rhs = trace(x);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("operator norm: identity, nilpotent shift, top singular value") {
  const auto a = make_algebra({{2, 1.0}});
  CHECK(operator_norm(AlgebraElement::identity(a)) == doctest::Approx(1.0));
  CHECK(operator_norm(block_el(a, 2, {0, 2, 0, 0})) == doctest::Approx(2.0));

  const auto b = make_algebra({{4, 0.5}, {3, 2.0}});
  for (int t = 0; t < 50; ++t) {
    CounterRng rng(derive_trial_seed(9, "opnorm-mu0", t));
    const auto x = random_element(b, rng);
    const auto mu = singular_values(x);
    CHECK(rel_gap(operator_norm(x), mu.value_at(0.0)) < 1e-10);
  }
}

TEST_CASE("trace linearity, faithfulness and the tracial property") {
  const auto a = make_algebra({{3, 1.2}, {2, 0.4}});
  for (int t = 0; t < 100; ++t) {
    CounterRng rng(derive_trial_seed(13, "trace-props", t));
    const auto x = random_element(a, rng);
    const auto y = random_element(a, rng);
    const Complex ca(rng.next_gaussian(), rng.next_gaussian());
    const Complex cb(rng.next_gaussian(), rng.next_gaussian());

    const Complex lin = trace(ca * x + cb * y) - (ca * trace(x) + cb * trace(y));
    CHECK(std::abs(lin) <=
          1e-12 * std::max(1.0, std::abs(trace(x)) + std::abs(trace(y))));

    const Complex gram = trace(x.adjoint() * x);
    CHECK(gram.real() >= 0.0);
    const double norm = operator_norm(x);
    // faithfulness: nonzero x stays clearly above the zero threshold
    CHECK(gram.real() > 1e-12 * a->trace_identity() * norm * norm);

    const Complex comm = trace(x * y) - trace(y * x);
    CHECK(std::abs(comm) <= 1e-10 * std::max(1.0, std::abs(trace(x * y))));
  }
  // faithfulness at zero
  CHECK(trace(AlgebraElement::zero(a).adjoint() * AlgebraElement::zero(a)) == Complex(0.0, 0.0));
}

TEST_CASE("elements reject non-finite entries and wrong shapes") {
  const auto a = make_algebra({{2, 1.0}});
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(AlgebraElement(a, {bad}), NumericError);
  CHECK_THROWS_AS(AlgebraElement(a, {Matrix::Zero(3, 3)}), AlgebraMismatch);
  CHECK_THROWS_AS(AlgebraElement(a, std::vector<Matrix>{}), AlgebraMismatch);
}
