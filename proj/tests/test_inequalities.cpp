#include <cmath>

#include <doctest.h>

#include "test_helpers.hpp"
#include "tracelab/harness.hpp"
#include "tracelab/inequalities.hpp"
#include "tracelab/rng.hpp"

using namespace tracelab;
using namespace tracelab::testing;

namespace {

const Tolerance kTol{};

TrialContext ctx() { return {}; }

WeightVector sum_one(std::vector<double> a) { return {std::move(a), ConstraintMode::SumOne}; }

double side(const InequalityReport& r, std::size_t i) { return r.sides.at(i).value; }

}  // namespace

TEST_CASE("judge mechanics: slack, margins, degenerate sides, flips") {
  auto r = judge("t", {{"a", 1.0}, {"b", 2.0}}, {Relation::LE}, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.margin == doctest::Approx(1.0));

  r = judge("t", {{"a", 2.0}, {"b", 1.0}}, {Relation::LE}, kTol, ctx());
  CHECK(r.verdict == Verdict::Violation);
  CHECK(r.margin == doctest::Approx(-1.0));

  r = judge("t", {{"a", 1.0}, {"b", 1.0 + 1e-12}}, {Relation::EQ}, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);

  r = judge("t", {{"a", std::numeric_limits<double>::quiet_NaN()}, {"b", 1.0}}, {Relation::LE},
            kTol, ctx());
  CHECK(r.verdict == Verdict::Degenerate);

  const auto passing = judge("t", {{"a", 1.0}, {"b", 2.0}}, {Relation::LE}, kTol, ctx());
  const auto flipped = judge_flipped(passing, kTol);
  REQUIRE(flipped.has_value());
  CHECK(flipped->verdict == Verdict::Violation);
  const auto eq_only = judge("t", {{"a", 1.0}, {"b", 1.0}}, {Relation::EQ}, kTol, ctx());
  CHECK(!judge_flipped(eq_only, kTol).has_value());
}

TEST_CASE("fk lemma: scalar oracles, equality at linear f, error paths") {
  const auto a = scalar_algebra();
  const auto xs = scalar_tuple(a, {1.0, 3.0});
  const auto w = sum_one({0.5, 0.5});

  auto r = check_fk(ScalarFunction::power(2), xs, &w, 1, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(side(r, 0) == doctest::Approx(4.0));
  CHECK(side(r, 1) == doctest::Approx(5.0));
  CHECK(r.margin == doctest::Approx(1.0));

  r = check_fk(ScalarFunction::power(1), xs, &w, 1, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(std::abs(side(r, 0) - side(r, 1)) < 1e-12);

  const auto xs12 = scalar_tuple(a, {1.0, 2.0});
  r = check_fk(ScalarFunction::power(2), xs12, nullptr, 3, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(side(r, 0) == doctest::Approx(9.0));
  CHECK(side(r, 1) == doctest::Approx(5.0));

  CHECK_THROWS_AS(check_fk(ScalarFunction::log_one_plus(), xs, &w, 1, kTol, ctx()),
                  WrongConvexityClass);
  CHECK_THROWS_AS(check_fk(ScalarFunction::power(3), xs, &w, 2, kTol, ctx()),
                  WrongConvexityClass);
  const auto neg = scalar_tuple(a, {-1.0, 2.0});
  CHECK_THROWS_AS(check_fk(ScalarFunction::power(2), neg, &w, 3, kTol, ctx()), NotPositive);
  CHECK_THROWS_AS(check_fk(ScalarFunction::power(2), xs, nullptr, 1, kTol, ctx()),
                  WeightConstraintViolated);
  CHECK_THROWS_AS(check_fk(ScalarFunction::power(2), xs, &w, 5, kTol, ctx()), ConfigError);
}

TEST_CASE("fk holds over random positive tuples in all four variants") {
  const auto alg = make_algebra({{3, 0.8}, {2, 1.3}});
  const FunctionSpec convex[] = {ScalarFunction::power(2), ScalarFunction::power(3),
                                 FunctionSpec(ScalarFunction::exp_square_minus_one(), true)};
  const FunctionSpec concave[] = {ScalarFunction::power(0.5), ScalarFunction::log_one_plus(),
                                  FunctionSpec(ScalarFunction::log_one_plus(), true)};
  for (int t = 0; t < 100; ++t) {
    CounterRng rng(derive_trial_seed(31, "fk-random", t));
    const int n = rng.uniform_int(1, 4);
    std::vector<AlgebraElement> xs;
    for (int i = 0; i < n; ++i) xs.push_back(random_positive(alg, rng, true));
    const auto w = random_weights(n, ConstraintMode::SumOne, rng);
    Tolerance tol;
    tol.rtol = 1e-7;
    for (const auto& f : convex) {
      CHECK(check_fk(f, xs, &w, 1, tol, ctx()).verdict == Verdict::Pass);
      CHECK(check_fk(f, xs, nullptr, 3, tol, ctx()).verdict == Verdict::Pass);
    }
    for (const auto& f : concave) {
      CHECK(check_fk(f, xs, &w, 2, tol, ctx()).verdict == Verdict::Pass);
      CHECK(check_fk(f, xs, nullptr, 4, tol, ctx()).verdict == Verdict::Pass);
    }
  }
}

TEST_CASE("weighted clarkson: scalar oracle, t^2 collapse, duplicate tuple") {
  const auto a = scalar_algebra();
  const auto xs = scalar_tuple(a, {1.0, 3.0});
  const auto w = sum_one({0.5, 0.5});

  auto r = check_weighted_clarkson("mt1", ScalarFunction::power(4), xs, w, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(side(r, 0) == doctest::Approx(17.0));
  CHECK(side(r, 1) == doctest::Approx(41.0));
  CHECK(r.relations[0] == Relation::LE);

  r = check_weighted_clarkson("mt1", ScalarFunction::power(2), xs, w, kTol, ctx());
  CHECK(r.relations[0] == Relation::EQ);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(std::abs(side(r, 0) - side(r, 1)) <= 1e-10 * std::max(1.0, side(r, 1)));

  const auto same = scalar_tuple(a, {2.0, 2.0});
  r = check_weighted_clarkson("mt2", ScalarFunction::power(1), same, w, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(std::abs(side(r, 0) - side(r, 1)) < 1e-12);
}

TEST_CASE("clarkson p-norm chain: frozen pairs and the p=2 parallelogram") {
  const auto a = scalar_algebra();
  const auto x = scalar_el(a, {1.0, 0.0});
  const auto y = scalar_el(a, {2.0, 0.0});

  auto r = check_clarkson_pnorm(x, y, 4.0, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(side(r, 0) == doctest::Approx(34.0));
  CHECK(side(r, 1) == doctest::Approx(82.0));
  CHECK(side(r, 2) == doctest::Approx(136.0));

  // x = y at p = 3: upper end is tight
  auto req = check_clarkson_pnorm(x, x, 3.0, kTol, ctx());
  CHECK(req.verdict == Verdict::Pass);
  CHECK(side(req, 1) == doctest::Approx(side(req, 2)));

  const auto alg = make_algebra({{3, 0.7}, {2, 1.6}});
  for (int t = 0; t < 60; ++t) {
    CounterRng rng(derive_trial_seed(32, "clarkson-p2", t));
    const auto u = random_element(alg, rng);
    const auto v = random_element(alg, rng);
    const auto rp = check_clarkson_pnorm(u, v, 2.0, kTol, ctx());
    CHECK(rp.verdict == Verdict::Pass);
    const double scale = std::max({1.0, side(rp, 0), side(rp, 1)});
    CHECK(std::abs(side(rp, 0) - side(rp, 1)) <= 1e-10 * scale);
    CHECK(std::abs(side(rp, 1) - side(rp, 2)) <= 1e-10 * scale);
  }
  CHECK_THROWS_AS(check_clarkson_pnorm(x, y, 0.0, kTol, ctx()), NonpositiveP);
}

TEST_CASE("bk chain matches the pair chain at n=2 and holds for tuples") {
  const auto a = scalar_algebra();
  const auto xs = scalar_tuple(a, {1.0, 2.0});
  const auto pair = check_clarkson_pnorm(xs[0], xs[1], 4.0, kTol, ctx());
  const auto tuple = check_bk_pnorm(xs, 4.0, kTol, ctx());
  for (int i = 0; i < 3; ++i) CHECK(rel_gap(side(pair, i), side(tuple, i)) < 1e-12);

  const auto alg = make_algebra({{2, 1.0}, {2, 0.5}});
  for (double p : {0.5, 1.0, 3.0}) {
    for (int t = 0; t < 40; ++t) {
      CounterRng rng(derive_trial_seed(33, "bk-rand", t));
      const int n = rng.uniform_int(2, 5);
      std::vector<AlgebraElement> tup;
      for (int i = 0; i < n; ++i) tup.push_back(random_element(alg, rng));
      CHECK(check_bk_pnorm(tup, p, kTol, ctx()).verdict == Verdict::Pass);
    }
  }
}

TEST_CASE("roots refinement: the hand-checked scalar chain (20.5, 25, 41)") {
  const auto a = scalar_algebra();
  const auto xs = scalar_tuple(a, {1.0, 2.0});

  auto r = check_roots_refinement("tr1", ScalarFunction::power(4), xs, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(std::abs(side(r, 0) - 20.5) < 1e-12);
  CHECK(std::abs(side(r, 1) - 25.0) < 1e-12);
  CHECK(std::abs(side(r, 2) - 41.0) < 1e-12);

  r = check_roots_refinement("tr1", ScalarFunction::power(2), xs, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  for (int i = 0; i + 1 < 3; ++i)
    CHECK(std::abs(side(r, i) - side(r, i + 1)) <=
          1e-10 * std::max({1.0, side(r, i), side(r, i + 1)}));

  const auto single = scalar_tuple(a, {1.5});
  r = check_roots_refinement("tr1", ScalarFunction::power(4), single, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(side(r, 0) == doctest::Approx(side(r, 2)));

  const auto rs = check_schatten_refinement(xs, 4.0, kTol, ctx());
  CHECK(rs.verdict == Verdict::Pass);
  CHECK(std::abs(side(rs, 0) - 20.5) < 1e-12);
  CHECK(std::abs(side(rs, 1) - 25.0) < 1e-12);
  CHECK(std::abs(side(rs, 2) - 41.0) < 1e-12);

  const auto r2 = check_schatten_refinement(xs, 2.0, kTol, ctx());
  CHECK(r2.verdict == Verdict::Pass);
  CHECK(std::abs(side(r2, 0) - side(r2, 2)) < 1e-10 * std::max(1.0, side(r2, 0)));
}

TEST_CASE("roots refinement holds on random tuples in both directions") {
  const auto alg = make_algebra({{3, 1.1}, {2, 0.5}});
  for (int t = 0; t < 80; ++t) {
    CounterRng rng(derive_trial_seed(34, "tr-rand", t));
    const int n = rng.uniform_int(2, 5);
    std::vector<AlgebraElement> xs;
    for (int i = 0; i < n; ++i) xs.push_back(random_element(alg, rng));
    CHECK(check_roots_refinement("tr1", ScalarFunction::power(3), xs, kTol, ctx()).verdict ==
          Verdict::Pass);
    CHECK(check_roots_refinement("tr2", ScalarFunction::power(1.5), xs, kTol, ctx()).verdict ==
          Verdict::Pass);
    CHECK(check_roots_refinement("tr2", ScalarFunction::log_one_plus(), xs, kTol, ctx()).verdict ==
          Verdict::Pass);
  }
}

TEST_CASE("the literal log refinement is a recorded-violation probe") {
  const auto alg = make_algebra({{2, 1.0}});
  int violations = 0;
  for (int t = 0; t < 30; ++t) {
    CounterRng rng(derive_trial_seed(35, "cor34-lit", t));
    std::vector<AlgebraElement> xs;
    for (int i = 0; i < 3; ++i) xs.push_back(random_element(alg, rng));
    const auto r = check_log_refinement_literal(xs, kTol, ctx());
    REQUIRE(r.sides.size() == 3);
    if (r.verdict == Verdict::Violation) ++violations;
  }
  CHECK(violations > 0);
}

TEST_CASE("tl probes: the alpha=(4,4) scalar instance") {
  const auto a = scalar_algebra();
  const auto xs = scalar_tuple(a, {1.0, 2.0});
  const auto ys = scalar_tuple(a, {0.0, 0.0});
  const WeightVector w{{4.0, 4.0}, ConstraintMode::SumInvSqrtPairsOne};

  // phi = t^2 is Both: the literal statement demands equality, 40 != 10.
  auto lit = check_tl_literal(ScalarFunction::power(2), xs, ys, w, kTol, ctx());
  CHECK(side(lit, 0) == doctest::Approx(40.0));
  CHECK(side(lit, 1) == doctest::Approx(10.0));
  CHECK(lit.relations[0] == Relation::EQ);
  CHECK(lit.verdict == Verdict::Violation);

  // convex reading (phi = t^4) holds on this instance
  auto convex = check_tl_literal(ScalarFunction::power(4), xs, ys, w, kTol, ctx());
  CHECK(convex.relations[0] == Relation::GE);
  CHECK(convex.verdict == Verdict::Pass);

  // proof chain: Jensen and superadditivity steps pass, the substitution
  // equality is the failing link (40 vs 10).
  const auto chain = check_tl_proof_chain(ScalarFunction::power(2), xs, ys, w, kTol, ctx());
  REQUIRE(chain.size() == 3);
  CHECK(chain[0].sides[0].label == "fk1.sum");
  CHECK(chain[0].verdict == Verdict::Pass);
  CHECK(chain[1].sides[0].label == "mo1-subst.lhs");
  CHECK(chain[1].verdict == Verdict::Violation);
  CHECK(side(chain[1], 0) == doctest::Approx(40.0));
  CHECK(side(chain[1], 1) == doctest::Approx(10.0));
  CHECK(chain[2].sides[0].label == "fk3.combined");
  CHECK(chain[2].verdict == Verdict::Pass);

  // xs = ys kills the last term; the checker still reports computed sides
  auto same = check_tl_literal(ScalarFunction::power(4), xs, xs, w, kTol, ctx());
  CHECK(same.sides.size() == 2);
}

TEST_CASE("tl1: frozen scalar sides (136, 82) and the MO2 collapse at t^2") {
  const auto a = scalar_algebra();
  const auto xs = scalar_tuple(a, {1.0, 2.0});
  const WeightVector w{{2.0, 2.0}, ConstraintMode::SumInverseOne};

  auto r = check_tl1(ScalarFunction::power(4), xs, w, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(std::abs(side(r, 0) - 136.0) < 1e-12);
  CHECK(std::abs(side(r, 1) - 82.0) < 1e-12);
  CHECK(r.relations[0] == Relation::GE);

  const auto equal = scalar_tuple(a, {1.0, 1.0});
  r = check_tl1(ScalarFunction::power(4), equal, w, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(side(r, 0) == doctest::Approx(16.0));
  CHECK(side(r, 1) == doctest::Approx(16.0));

  r = check_tl1(ScalarFunction::power(2), xs, w, kTol, ctx());
  CHECK(r.relations[0] == Relation::EQ);
  CHECK(r.verdict == Verdict::Pass);

  CHECK_THROWS_AS(check_tl1(ScalarFunction::power(4), xs,
                            WeightVector{{1.0, 3.0}, ConstraintMode::SumInverseOne}, kTol, ctx()),
                  WeightConstraintViolated);
}

TEST_CASE("cor4.3: p-norm parallelogram in both directions") {
  const auto a = scalar_algebra();
  const auto xs = scalar_tuple(a, {1.0, 2.0});
  const WeightVector w{{2.0, 2.0}, ConstraintMode::SumInverseOne};

  auto r = check_pnorm_parallelogram(xs, w, 4.0, kTol, ctx());
  CHECK(r.verdict == Verdict::Pass);
  CHECK(std::abs(side(r, 0) - 136.0) < 1e-12);
  CHECK(std::abs(side(r, 1) - 82.0) < 1e-12);

  r = check_pnorm_parallelogram(xs, w, 2.0, kTol, ctx());
  CHECK(r.relations[0] == Relation::EQ);
  CHECK(r.verdict == Verdict::Pass);

  const auto alg = make_algebra({{2, 0.9}, {3, 1.2}});
  for (double p : {1.0, 1.5}) {
    for (int t = 0; t < 50; ++t) {
      CounterRng rng(derive_trial_seed(36, "cor43-rev", t));
      const int n = rng.uniform_int(2, 5);
      std::vector<AlgebraElement> tup;
      for (int i = 0; i < n; ++i) tup.push_back(random_element(alg, rng));
      const auto wr = random_weights(n, ConstraintMode::SumInverseOne, rng);
      const auto rr = check_pnorm_parallelogram(tup, wr, p, kTol, ctx());
      CHECK(rr.relations[0] == Relation::LE);
      CHECK(rr.verdict == Verdict::Pass);
    }
  }
}

TEST_CASE("degenerate verdicts when a side overflows") {
  // expsq beyond the guard: the side becomes non-finite, never a Pass
  const auto a = scalar_algebra();
  const auto big = scalar_tuple(a, {25.0, 30.0});
  const auto w = sum_one({0.5, 0.5});
  const auto r =
      check_weighted_clarkson("mt1", ScalarFunction::exp_square_minus_one(), big, w, kTol, ctx());
  CHECK(r.verdict == Verdict::Degenerate);
}
