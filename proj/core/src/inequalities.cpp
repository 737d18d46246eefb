#include "tracelab/inequalities.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "tracelab/spectral.hpp"

namespace tracelab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// tau(phi(|z|)). DomainOverflow becomes NaN so the judge can mark the
// trial Degenerate instead of aborting the campaign.
double tau_phi(const FunctionSpec& f, const AlgebraElement& z) {
  try {
    return trace_function_spectral(f, z);
  } catch (const DomainOverflow&) {
    return kNaN;
  }
}

double tau_power(const AlgebraElement& z, double p) {
  return tau_phi(ScalarFunction::power(p), z);
}

void require_positive(const AlgebraElement& x) {
  const double norm = operator_norm(x);
  if (operator_norm(x - x.adjoint()) > 1e-12 * norm)
    throw NotPositive("operand is not self-adjoint");
  for (const Matrix& m : x.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + Matrix(m.adjoint())),
                                                 Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed");
    const double window = static_cast<double>(m.rows()) * 1e-12 * norm;
    if (solver.eigenvalues().minCoeff() < -window)
      throw NotPositive("operand has a negative eigenvalue");
  }
}

Relation psi_relation(PsiClass c, Relation convex_rel) {
  switch (c) {
    case PsiClass::ConvexPsi: return convex_rel;
    case PsiClass::ConcavePsi: return convex_rel == Relation::LE ? Relation::GE : Relation::LE;
    case PsiClass::Both: return Relation::EQ;
    case PsiClass::Neither: break;
  }
  throw WrongConvexityClass("function has no psi classification");
}

Relation p_relation(double p, Relation above_two_rel) {
  if (!(p > 0.0) || !std::isfinite(p)) throw NonpositiveP("p must be finite and > 0");
  if (p == 2.0) return Relation::EQ;
  if (p > 2.0) return above_two_rel;
  return above_two_rel == Relation::LE ? Relation::GE : Relation::LE;
}

// Mixed sums sum_j omega_j^k x_j for k = 0..n-1.
std::vector<AlgebraElement> mixed_sums(ElementSpan xs) {
  const int n = static_cast<int>(xs.size());
  const UnityRoots roots(n);
  std::vector<AlgebraElement> mixed;
  mixed.reserve(xs.size());
  for (int k = 0; k < n; ++k) {
    AlgebraElement m = AlgebraElement::zero(xs[0].algebra());
    for (int j = 0; j < n; ++j) m = m + roots.power(j, k) * xs[j];
    mixed.push_back(std::move(m));
  }
  return mixed;
}

void require_tuple(ElementSpan xs) {
  if (xs.empty()) throw AlgebraMismatch("checker needs at least one element");
}

}  // namespace

InequalityReport check_fk(const FunctionSpec& f, ElementSpan xs, const WeightVector* w,
                          int variant, const Tolerance& tol, TrialContext ctx) {
  if (variant < 1 || variant > 4) throw ConfigError("fk variant must be 1..4");
  require_tuple(xs);
  const bool weighted = variant == 1 || variant == 2;
  const bool needs_convex = variant == 1 || variant == 3;
  const Curvature curv = f.curvature();
  if (needs_convex && curv == Curvature::Concave)
    throw WrongConvexityClass("fk" + std::to_string(variant) + " needs a convex f");
  if (!needs_convex && curv == Curvature::Convex)
    throw WrongConvexityClass("fk" + std::to_string(variant) + " needs a concave f");
  for (const AlgebraElement& x : xs) require_positive(x);

  const auto& algebra = xs[0].algebra();
  AlgebraElement combined_arg = AlgebraElement::zero(algebra);
  double sum_traces = 0.0;
  if (weighted) {
    if (w == nullptr) throw WeightConstraintViolated("fk1/fk2 need a SumOne weight vector");
    if (w->mode != ConstraintMode::SumOne)
      throw WeightConstraintViolated("fk1/fk2 need a SumOne weight vector");
    if (w->alphas.size() != xs.size())
      throw WeightConstraintViolated("weight count does not match the tuple size");
    w->validate();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      combined_arg = combined_arg + w->alphas[j] * xs[j];
      sum_traces += w->alphas[j] * tau_phi(f, xs[j]);
    }
  } else {
    for (const AlgebraElement& x : xs) {
      combined_arg = combined_arg + x;
      sum_traces += tau_phi(f, x);
    }
  }
  const double combined = tau_phi(f, combined_arg);

  Relation rel;
  if (curv == Curvature::Linear) {
    rel = Relation::EQ;
  } else if (variant == 1 || variant == 4) {
    rel = Relation::LE;  // combined <= sum
  } else {
    rel = Relation::GE;  // combined >= sum (fk2, fk3)
  }
  return judge("fk" + std::to_string(variant),
               {{"combined", combined}, {"sum", sum_traces}}, {rel}, tol, std::move(ctx));
}

InequalityReport check_weighted_clarkson(std::string claim, const ScalarFunction& phi,
                                         ElementSpan xs, const WeightVector& w,
                                         const Tolerance& tol, TrialContext ctx) {
  require_tuple(xs);
  if (w.mode != ConstraintMode::SumOne)
    throw WeightConstraintViolated("weighted clarkson needs a SumOne weight vector");
  if (w.alphas.size() != xs.size())
    throw WeightConstraintViolated("weight count does not match the tuple size");
  w.validate();

  AlgebraElement mix = AlgebraElement::zero(xs[0].algebra());
  for (std::size_t j = 0; j < xs.size(); ++j) mix = mix + w.alphas[j] * xs[j];

  double lhs = tau_phi(phi, mix);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    for (std::size_t k = j + 1; k < xs.size(); ++k) {
      const double c = std::sqrt(w.alphas[j] * w.alphas[k]);
      lhs += tau_phi(phi, c * (xs[j] - xs[k]));
    }
  }
  double rhs = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) rhs += w.alphas[j] * tau_phi(phi, xs[j]);

  const Relation rel = psi_relation(phi.psi_class(), Relation::LE);
  return judge(std::move(claim), {{"lhs", lhs}, {"rhs", rhs}}, {rel}, tol, std::move(ctx));
}

InequalityReport check_clarkson_pnorm(const AlgebraElement& x, const AlgebraElement& y,
                                      double p, const Tolerance& tol, TrialContext ctx) {
  const Relation rel = p_relation(p, Relation::LE);
  const double sum = tau_power(x, p) + tau_power(y, p);
  const double mixed = tau_power(x + y, p) + tau_power(x - y, p);
  return judge("clarkson-p",
               {{"twice_sum", 2.0 * sum},
                {"mixed", mixed},
                {"pow_sum", std::pow(2.0, p - 1.0) * sum}},
               {rel, rel}, tol, std::move(ctx));
}

InequalityReport check_bk_pnorm(ElementSpan xs, double p, const Tolerance& tol,
                                TrialContext ctx) {
  require_tuple(xs);
  const Relation rel = p_relation(p, Relation::LE);
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (const AlgebraElement& x : xs) sum += tau_power(x, p);
  double mixed = 0.0;
  for (const AlgebraElement& m : mixed_sums(xs)) mixed += tau_power(m, p);
  return judge("bk-p",
               {{"n_sum", n * sum}, {"mixed_sum", mixed}, {"npow_sum", std::pow(n, p - 1.0) * sum}},
               {rel, rel}, tol, std::move(ctx));
}

InequalityReport check_roots_refinement(std::string claim, const ScalarFunction& phi,
                                        ElementSpan xs, const Tolerance& tol,
                                        TrialContext ctx) {
  require_tuple(xs);
  const double n = static_cast<double>(xs.size());
  const auto mixed = mixed_sums(xs);

  double scaled_sum = 0.0;
  double mean_sum = 0.0;
  for (const AlgebraElement& m : mixed) {
    scaled_sum += tau_phi(phi, (1.0 / std::sqrt(n)) * m);
    mean_sum += tau_phi(phi, m);
  }
  mean_sum /= n;

  AlgebraElement sq = AlgebraElement::zero(xs[0].algebra());
  for (const AlgebraElement& x : xs) sq = sq + x.adjoint() * x;
  const AlgebraElement root = apply_scalar_function(ScalarFunction::power(0.5), sq);
  const double quad = tau_phi(phi, root);

  const Relation rel = psi_relation(phi.psi_class(), Relation::LE);
  return judge(std::move(claim),
               {{"scaled_sum", scaled_sum}, {"quad_mean", quad}, {"mean_sum", mean_sum}},
               {rel, rel}, tol, std::move(ctx));
}

InequalityReport check_log_refinement_literal(ElementSpan xs, const Tolerance& tol,
                                              TrialContext ctx) {
  require_tuple(xs);
  const ScalarFunction log1p = ScalarFunction::log_one_plus();
  const double n = static_cast<double>(xs.size());
  const auto mixed = mixed_sums(xs);

  double left = 0.0;
  double right = 0.0;
  for (const AlgebraElement& m : mixed) {
    left += tau_phi(log1p, m);
    right += tau_phi(log1p, (1.0 / n) * m);
  }
  left /= n;
  right /= n;

  // Printed middle term: tau(log((sum_j |x_j|)^(1/2) + 1)).
  AlgebraElement abs_sum = AlgebraElement::zero(xs[0].algebra());
  for (const AlgebraElement& x : xs) abs_sum = abs_sum + abs_op(x);
  const AlgebraElement root = apply_scalar_function(ScalarFunction::power(0.5), abs_sum);
  const double middle = tau_phi(log1p, root);

  return judge("cor3.4-literal",
               {{"mean_sum", left}, {"middle_literal", middle}, {"scaled_mean_literal", right}},
               {Relation::LE, Relation::LE}, tol, std::move(ctx));
}

InequalityReport check_schatten_refinement(ElementSpan xs, double p, const Tolerance& tol,
                                           TrialContext ctx) {
  require_tuple(xs);
  const Relation rel = p_relation(p, Relation::LE);
  const double n = static_cast<double>(xs.size());

  double mixed = 0.0;
  for (const AlgebraElement& m : mixed_sums(xs)) mixed += tau_power(m, p);

  AlgebraElement sq = AlgebraElement::zero(xs[0].algebra());
  for (const AlgebraElement& x : xs) sq = sq + x.adjoint() * x;
  const double middle = tau_power(apply_scalar_function(ScalarFunction::power(0.5), sq), p);

  return judge("cor3.5",
               {{"scaled_sum", std::pow(n, -0.5 * p) * mixed},
                {"quad_mean", middle},
                {"mean_sum", mixed / n}},
               {rel, rel}, tol, std::move(ctx));
}

namespace {

void require_tl_inputs(ElementSpan xs, ElementSpan ys, const WeightVector& w) {
  require_tuple(xs);
  if (xs.size() != ys.size()) throw AlgebraMismatch("probe needs |xs| = |ys|");
  if (w.mode != ConstraintMode::SumInvSqrtPairsOne)
    throw WeightConstraintViolated("probe needs a SumInvSqrtPairsOne weight vector");
  if (w.alphas.size() != xs.size())
    throw WeightConstraintViolated("weight count does not match the tuple size");
  w.validate();
}

struct TlParts {
  std::vector<AlgebraElement> cross;       // |a_i x_i - a_j y_j|^2, all ordered pairs
  std::vector<double> cross_coef;          // (a_i a_j)^(-1/2)
  std::vector<AlgebraElement> pair_terms;  // pairwise x terms then y terms then |sum(x-y)|^2
};

TlParts tl_parts(ElementSpan xs, ElementSpan ys, const WeightVector& w) {
  const std::size_t n = xs.size();
  const auto& a = w.alphas;
  const auto& algebra = xs[0].algebra();
  auto ratio = [&](std::size_t i, std::size_t j) { return std::sqrt(a[i] / a[j]); };

  TlParts parts;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const AlgebraElement d = a[i] * xs[i] - a[j] * ys[j];
      parts.cross.push_back(d.adjoint() * d);
      parts.cross_coef.push_back(1.0 / std::sqrt(a[i] * a[j]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const AlgebraElement d = ratio(i, j) * xs[i] - ratio(j, i) * xs[j];
      parts.pair_terms.push_back(d.adjoint() * d);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const AlgebraElement d = ratio(i, j) * ys[i] - ratio(j, i) * ys[j];
      parts.pair_terms.push_back(d.adjoint() * d);
    }
  }
  AlgebraElement diff_sum = AlgebraElement::zero(algebra);
  for (std::size_t i = 0; i < n; ++i) diff_sum = diff_sum + (xs[i] - ys[i]);
  parts.pair_terms.push_back(diff_sum.adjoint() * diff_sum);
  return parts;
}

}  // namespace

InequalityReport check_tl_literal(const ScalarFunction& phi, ElementSpan xs, ElementSpan ys,
                                  const WeightVector& w, const Tolerance& tol,
                                  TrialContext ctx) {
  require_tl_inputs(xs, ys, w);
  const std::size_t n = xs.size();
  const auto& a = w.alphas;
  auto ratio = [&](std::size_t i, std::size_t j) { return std::sqrt(a[i] / a[j]); };

  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      lhs += tau_phi(phi, a[i] * xs[i] - a[j] * ys[j]) / std::sqrt(a[i] * a[j]);
  }

  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      rhs += tau_phi(phi, ratio(i, j) * xs[i] - ratio(j, i) * xs[j]);
      rhs += tau_phi(phi, ratio(i, j) * ys[i] - ratio(j, i) * ys[j]);
    }
  }
  AlgebraElement diff_sum = AlgebraElement::zero(xs[0].algebra());
  for (std::size_t i = 0; i < n; ++i) diff_sum = diff_sum + (xs[i] - ys[i]);
  rhs += tau_phi(phi, diff_sum);

  const Relation rel = psi_relation(phi.psi_class(), Relation::GE);
  return judge("tl-literal", {{"lhs", lhs}, {"rhs", rhs}}, {rel}, tol, std::move(ctx));
}

std::vector<InequalityReport> check_tl_proof_chain(const ScalarFunction& phi, ElementSpan xs,
                                                   ElementSpan ys, const WeightVector& w,
                                                   const Tolerance& tol, TrialContext ctx) {
  require_tl_inputs(xs, ys, w);
  const PsiClass cls = phi.psi_class();
  if (cls == PsiClass::Neither) throw WrongConvexityClass("function has no psi classification");
  const bool concave = cls == PsiClass::ConcavePsi;  // Both uses the convex orientation
  const FunctionSpec psi(phi, true);
  const TlParts parts = tl_parts(xs, ys, w);
  const auto& algebra = xs[0].algebra();

  // Step 1: the weighted Jensen application over the cross terms.
  double weighted_sum = 0.0;
  AlgebraElement cross_mix = AlgebraElement::zero(algebra);
  for (std::size_t i = 0; i < parts.cross.size(); ++i) {
    weighted_sum += parts.cross_coef[i] * tau_phi(psi, parts.cross[i]);
    cross_mix = cross_mix + parts.cross_coef[i] * parts.cross[i];
  }
  const double mixed = tau_phi(psi, cross_mix);
  const char* jensen = concave ? "fk2" : "fk1";
  std::vector<InequalityReport> reports;
  reports.push_back(judge("tl-chain",
                          {{std::string(jensen) + ".sum", weighted_sum},
                           {std::string(jensen) + ".combined", mixed}},
                          {concave ? Relation::LE : Relation::GE}, tol, ctx));

  // Step 2: the claimed substitution equality between the mixed cross sum
  // and the pairwise decomposition.
  AlgebraElement pair_sum = AlgebraElement::zero(algebra);
  for (const AlgebraElement& t : parts.pair_terms) pair_sum = pair_sum + t;
  const double pair_mixed = tau_phi(psi, pair_sum);
  reports.push_back(judge("tl-chain",
                          {{"mo1-subst.lhs", mixed}, {"mo1-subst.rhs", pair_mixed}},
                          {Relation::EQ}, tol, ctx));

  // Step 3: the superadditivity split of the pairwise decomposition.
  double split_sum = 0.0;
  for (const AlgebraElement& t : parts.pair_terms) split_sum += tau_phi(psi, t);
  const char* split = concave ? "fk4" : "fk3";
  reports.push_back(judge("tl-chain",
                          {{std::string(split) + ".combined", pair_mixed},
                           {std::string(split) + ".sum", split_sum}},
                          {concave ? Relation::LE : Relation::GE}, tol, std::move(ctx)));
  return reports;
}

InequalityReport check_tl1(const ScalarFunction& phi, ElementSpan xs, const WeightVector& w,
                           const Tolerance& tol, TrialContext ctx) {
  require_tuple(xs);
  if (w.mode != ConstraintMode::SumInverseOne)
    throw WeightConstraintViolated("tl1 needs a SumInverseOne weight vector");
  if (w.alphas.size() != xs.size())
    throw WeightConstraintViolated("weight count does not match the tuple size");
  w.validate();

  const std::size_t n = xs.size();
  const auto& a = w.alphas;
  auto ratio = [&](std::size_t i, std::size_t j) { return std::sqrt(a[i] / a[j]); };

  double lhs = 0.0;
  for (std::size_t j = 0; j < n; ++j) lhs += tau_phi(phi, a[j] * xs[j]) / a[j];

  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j)
      rhs += tau_phi(phi, ratio(i, j) * xs[i] - ratio(j, i) * xs[j]);
  }
  AlgebraElement sum = AlgebraElement::zero(xs[0].algebra());
  for (const AlgebraElement& x : xs) sum = sum + x;
  rhs += tau_phi(phi, sum);

  const Relation rel = psi_relation(phi.psi_class(), Relation::GE);
  return judge("tl1", {{"lhs", lhs}, {"rhs", rhs}}, {rel}, tol, std::move(ctx));
}

InequalityReport check_pnorm_parallelogram(ElementSpan xs, const WeightVector& w, double p,
                                           const Tolerance& tol, TrialContext ctx) {
  require_tuple(xs);
  if (w.mode != ConstraintMode::SumInverseOne)
    throw WeightConstraintViolated("cor4.3 needs a SumInverseOne weight vector");
  if (w.alphas.size() != xs.size())
    throw WeightConstraintViolated("weight count does not match the tuple size");
  w.validate();
  const Relation rel = p_relation(p, Relation::GE);

  const std::size_t n = xs.size();
  const auto& a = w.alphas;
  auto ratio = [&](std::size_t i, std::size_t j) { return std::sqrt(a[i] / a[j]); };

  double lhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) lhs += std::pow(a[i], p - 1.0) * tau_power(xs[i], p);

  double rhs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j)
      rhs += tau_power(ratio(i, j) * xs[i] - ratio(j, i) * xs[j], p);
  }
  AlgebraElement sum = AlgebraElement::zero(xs[0].algebra());
  for (const AlgebraElement& x : xs) sum = sum + x;
  rhs += tau_power(sum, p);

  return judge("cor4.3", {{"lhs", lhs}, {"rhs", rhs}}, {rel}, tol, std::move(ctx));
}

}  // namespace tracelab
