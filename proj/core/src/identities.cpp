#include "tracelab/identities.hpp"

#include <cmath>
#include <numbers>

namespace tracelab {

namespace {

AlgebraElement abs_squared(const AlgebraElement& z) { return z.adjoint() * z; }

double norm_sum(ElementSpan xs) {
  double s = 0.0;
  for (const AlgebraElement& x : xs) s += operator_norm(x);
  return s;
}

void require_nonempty(ElementSpan xs) {
  if (xs.empty()) throw AlgebraMismatch("identity needs at least one element");
}

void require_matching_weights(ElementSpan xs, const WeightVector& w) {
  if (xs.size() != w.alphas.size())
    throw WeightConstraintViolated("weight count does not match the tuple size");
}

}  // namespace

const char* to_string(ConstraintMode m) {
  switch (m) {
    case ConstraintMode::SumOne: return "SumOne";
    case ConstraintMode::SumInverseOne: return "SumInverseOne";
    case ConstraintMode::SumInvSqrtPairsOne: return "SumInvSqrtPairsOne";
    case ConstraintMode::None: return "None";
  }
  return "?";
}

void WeightVector::validate() const {
  if (alphas.empty()) throw WeightConstraintViolated("weight vector is empty");
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw WeightConstraintViolated("weights must be finite and > 0");
  }
  constexpr double kTol = 1e-12;
  double sum = 0.0;
  switch (mode) {
    case ConstraintMode::SumOne:
      for (double a : alphas) sum += a;
      if (std::abs(sum - 1.0) > kTol)
        throw WeightConstraintViolated("sum of alphas must equal 1");
      break;
    case ConstraintMode::SumInverseOne:
      for (double a : alphas) sum += 1.0 / a;
      if (std::abs(sum - 1.0) > kTol)
        throw WeightConstraintViolated("sum of 1/alpha must equal 1");
      break;
    case ConstraintMode::SumInvSqrtPairsOne: {
      double inv_sqrt = 0.0;
      for (double a : alphas) inv_sqrt += 1.0 / std::sqrt(a);
      // sum_{i,j} (a_i a_j)^(-1/2) = (sum_j a_j^(-1/2))^2
      if (std::abs(inv_sqrt * inv_sqrt - 1.0) > kTol)
        throw WeightConstraintViolated("sum over pairs of (alpha_i alpha_j)^(-1/2) must equal 1");
      break;
    }
    case ConstraintMode::None: break;
  }
}

UnityRoots::UnityRoots(int n) : n_(n) {
  if (n < 1) throw NumericError("roots of unity need n >= 1");
  omegas_.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    omegas_.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / n));
  for (const Complex& w : omegas_) {
    if (std::abs(std::abs(w) - 1.0) > 1e-14) throw NumericError("root of unity off the circle");
  }
  if (n >= 2) {
    Complex sum(0.0, 0.0);
    for (const Complex& w : omegas_) sum += w;
    if (std::abs(sum) > 1e-12) throw NumericError("roots of unity do not sum to zero");
  }
}

Complex UnityRoots::power(int j, int k) const {
  const long long r = (static_cast<long long>(j) * k) % n_;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n_);
}

IdentitySides id1_sides(ElementSpan xs, const WeightVector& w) {
  require_nonempty(xs);
  require_matching_weights(xs, w);
  if (w.mode != ConstraintMode::SumOne)
    throw WeightConstraintViolated("(ID1) needs a SumOne weight vector");
  w.validate();

  const auto& algebra = xs[0].algebra();
  AlgebraElement mix = AlgebraElement::zero(algebra);
  for (std::size_t j = 0; j < xs.size(); ++j) mix = mix + w.alphas[j] * xs[j];

  AlgebraElement lhs = abs_squared(mix);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    for (std::size_t k = j + 1; k < xs.size(); ++k)
      lhs = lhs + (w.alphas[j] * w.alphas[k]) * abs_squared(xs[j] - xs[k]);
  }

  AlgebraElement rhs = AlgebraElement::zero(algebra);
  for (std::size_t j = 0; j < xs.size(); ++j) rhs = rhs + w.alphas[j] * abs_squared(xs[j]);

  const double s = norm_sum(xs);
  return {std::move(lhs), std::move(rhs), s * s};
}

IdentitySides ibk_sides(ElementSpan xs) {
  require_nonempty(xs);
  const int n = static_cast<int>(xs.size());
  const UnityRoots roots(n);
  const auto& algebra = xs[0].algebra();

  AlgebraElement lhs = AlgebraElement::zero(algebra);
  for (int k = 0; k < n; ++k) {
    AlgebraElement mixed = AlgebraElement::zero(algebra);
    for (int j = 0; j < n; ++j) mixed = mixed + roots.power(j, k) * xs[j];
    lhs = lhs + abs_squared(mixed);
  }
  lhs = (1.0 / n) * lhs;

  AlgebraElement rhs = AlgebraElement::zero(algebra);
  for (const AlgebraElement& x : xs) rhs = rhs + abs_squared(x);

  const double s = norm_sum(xs);
  return {std::move(lhs), std::move(rhs), s * s};
}

IdentitySides mo1_sides(ElementSpan xs, ElementSpan ys, const WeightVector& w) {
  require_nonempty(xs);
  if (xs.size() != ys.size()) throw AlgebraMismatch("(MO1) needs |xs| = |ys|");
  require_matching_weights(xs, w);
  w.validate();  // any positive alphas; the identity is purely algebraic

  const std::size_t n = xs.size();
  const auto& a = w.alphas;
  const auto& algebra = xs[0].algebra();

  auto ratio = [&](std::size_t i, std::size_t j) { return std::sqrt(a[i] / a[j]); };

  AlgebraElement lhs = AlgebraElement::zero(algebra);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      lhs = lhs + abs_squared(ratio(i, j) * xs[i] - ratio(j, i) * xs[j]);
      lhs = lhs + abs_squared(ratio(i, j) * ys[i] - ratio(j, i) * ys[j]);
    }
  }

  AlgebraElement rhs = AlgebraElement::zero(algebra);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      rhs = rhs + abs_squared(ratio(i, j) * xs[i] - ratio(j, i) * ys[j]);
  }
  AlgebraElement diff_sum = AlgebraElement::zero(algebra);
  for (std::size_t i = 0; i < n; ++i) diff_sum = diff_sum + (xs[i] - ys[i]);
  rhs = rhs - abs_squared(diff_sum);

  double max_coef = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) max_coef = std::max(max_coef, a[i] / a[j]);
  }
  const double s = norm_sum(xs) + norm_sum(ys);
  return {std::move(lhs), std::move(rhs), s * s * max_coef};
}

IdentitySides mo2_sides(ElementSpan xs, const WeightVector& w) {
  require_nonempty(xs);
  require_matching_weights(xs, w);
  if (w.mode != ConstraintMode::SumInverseOne)
    throw WeightConstraintViolated("(MO2) needs a SumInverseOne weight vector");
  w.validate();

  const std::size_t n = xs.size();
  const auto& a = w.alphas;
  const auto& algebra = xs[0].algebra();

  auto ratio = [&](std::size_t i, std::size_t j) { return std::sqrt(a[i] / a[j]); };

  AlgebraElement lhs = AlgebraElement::zero(algebra);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j)
      lhs = lhs + abs_squared(ratio(i, j) * xs[i] - ratio(j, i) * xs[j]);
  }

  AlgebraElement rhs = AlgebraElement::zero(algebra);
  for (std::size_t i = 0; i < n; ++i) rhs = rhs + a[i] * abs_squared(xs[i]);
  AlgebraElement sum = AlgebraElement::zero(algebra);
  for (const AlgebraElement& x : xs) sum = sum + x;
  rhs = rhs - abs_squared(sum);

  double max_coef = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    max_coef = std::max(max_coef, a[i]);
    for (std::size_t j = 0; j < n; ++j) max_coef = std::max(max_coef, a[i] / a[j]);
  }
  const double s = norm_sum(xs);
  return {std::move(lhs), std::move(rhs), s * s * max_coef};
}

double residual_id1(ElementSpan xs, const WeightVector& w) {
  const IdentitySides s = id1_sides(xs, w);
  return operator_norm(s.lhs - s.rhs);
}

double residual_ibk(ElementSpan xs) {
  const IdentitySides s = ibk_sides(xs);
  return operator_norm(s.lhs - s.rhs);
}

double residual_mo1(ElementSpan xs, ElementSpan ys, const WeightVector& w) {
  const IdentitySides s = mo1_sides(xs, ys, w);
  return operator_norm(s.lhs - s.rhs);
}

double residual_mo2(ElementSpan xs, const WeightVector& w) {
  const IdentitySides s = mo2_sides(xs, w);
  return operator_norm(s.lhs - s.rhs);
}

double perturbed_residual(const IdentitySides& sides, double eps) {
  AlgebraElement diff = sides.lhs - sides.rhs;
  std::vector<Matrix> data(diff.blocks().begin(), diff.blocks().end());
  data[0](0, 0) += eps;
  return operator_norm(AlgebraElement(diff.algebra(), std::move(data)));
}

bool identity_needs_ys(const std::string& id) { return id == "mo1"; }

ConstraintMode identity_constraint(const std::string& id) {
  if (id == "id1") return ConstraintMode::SumOne;
  if (id == "ibk") return ConstraintMode::None;
  if (id == "mo1") return ConstraintMode::None;
  if (id == "mo2") return ConstraintMode::SumInverseOne;
  throw UnknownClaimId("unknown identity id '" + id + "'");
}

IdentitySides identity_sides(const std::string& id, ElementSpan xs, ElementSpan ys,
                             const WeightVector& w) {
  if (id == "id1") return id1_sides(xs, w);
  if (id == "ibk") return ibk_sides(xs);
  if (id == "mo1") return mo1_sides(xs, ys, w);
  if (id == "mo2") return mo2_sides(xs, w);
  throw UnknownClaimId("unknown identity id '" + id + "'");
}

}  // namespace tracelab
