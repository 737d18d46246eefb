#pragma once

// Checkers for every inequality in scope. Each evaluates its sides
// numerically, judges the relation chain under the scale-aware tolerance
// and reports Pass / Violation / Degenerate; nothing is assumed. Direction
// dispatch is a pure function of the psi-classification (or of p vs. 2),
// with the Both class collapsing the chain to equalities.

#include <span>
#include <string>
#include <vector>

#include "tracelab/algebra.hpp"
#include "tracelab/functions.hpp"
#include "tracelab/identities.hpp"
#include "tracelab/report.hpp"

namespace tracelab {

/// Lemma variants: 1 = weighted Jensen (f convex), 2 = weighted Jensen
/// reversed (f concave), 3 = superadditivity (f convex, unweighted),
/// 4 = subadditivity (f concave, unweighted). Variants 3/4 ignore w;
/// xs must be positive semidefinite.
InequalityReport check_fk(const FunctionSpec& f, ElementSpan xs, const WeightVector* w,
                          int variant, const Tolerance& tol, TrialContext ctx);

/// Weighted n-tuple trace inequality (claims "mt1"/"mt2"): tau phi of the
/// weighted mix plus the pairwise difference terms against the weighted sum
/// of tau phi(|x_j|), direction by psi class.
InequalityReport check_weighted_clarkson(std::string claim, const ScalarFunction& phi,
                                         ElementSpan xs, const WeightVector& w,
                                         const Tolerance& tol, TrialContext ctx);

/// Classical two-sided pair chain (claim "clarkson-p"):
/// 2[tau|x|^p + tau|y|^p]  vs  tau|x+y|^p + tau|x-y|^p  vs  2^(p-1)[...].
InequalityReport check_clarkson_pnorm(const AlgebraElement& x, const AlgebraElement& y,
                                      double p, const Tolerance& tol, TrialContext ctx);

/// Classical n-tuple roots-of-unity chain (claim "bk-p"):
/// n * sum_j tau|x_j|^p  vs  sum_k tau|sum_j w_j^k x_j|^p  vs  n^(p-1) * sum_j.
InequalityReport check_bk_pnorm(ElementSpan xs, double p, const Tolerance& tol,
                                TrialContext ctx);

/// Roots-of-unity refinement chain (claims "tr1"/"tr2" and the fixed-function
/// instantiations "cor3.3" @ expsq, "cor3.4" @ log1p).
InequalityReport check_roots_refinement(std::string claim, const ScalarFunction& phi,
                                        ElementSpan xs, const Tolerance& tol,
                                        TrialContext ctx);

/// The literal printed form of the log refinement (claim "cor3.4-literal"),
/// kept verbatim for the record: middle term uses (sum |x_j|)^(1/2) and the
/// right side carries an inner factor 1/n.
InequalityReport check_log_refinement_literal(ElementSpan xs, const Tolerance& tol,
                                              TrialContext ctx);

/// Schatten p-norm refinement chain (claim "cor3.5"):
/// n^(-p/2) sum_k ||.||_p^p  vs  tau((sum |x_j|^2)^(p/2))  vs  (1/n) sum_k.
InequalityReport check_schatten_refinement(ElementSpan xs, double p, const Tolerance& tol,
                                           TrialContext ctx);

/// Literal probe of the general parallelogram statement (claim "tl-literal").
InequalityReport check_tl_literal(const ScalarFunction& phi, ElementSpan xs, ElementSpan ys,
                                  const WeightVector& w, const Tolerance& tol,
                                  TrialContext ctx);

/// Proof-chain probe (claim "tl-chain"): one report per step — the weighted
/// Jensen application, the claimed pairwise substitution equality, and the
/// superadditivity application — so a failing link is localized.
std::vector<InequalityReport> check_tl_proof_chain(const ScalarFunction& phi, ElementSpan xs,
                                                   ElementSpan ys, const WeightVector& w,
                                                   const Tolerance& tol, TrialContext ctx);

/// Parallelogram-law corollary (claim "tl1"), index-corrected form:
/// sum_j (1/a_j) tau phi(a_j |x_j|)  vs  pairwise terms + tau phi(|sum x_i|).
InequalityReport check_tl1(const ScalarFunction& phi, ElementSpan xs, const WeightVector& w,
                           const Tolerance& tol, TrialContext ctx);

/// p-norm specialization of check_tl1 (claim "cor4.3"):
/// sum_i a_i^(p-1) tau|x_i|^p  vs  pairwise + tau|sum x_i|^p.
InequalityReport check_pnorm_parallelogram(ElementSpan xs, const WeightVector& w, double p,
                                           const Tolerance& tol, TrialContext ctx);

}  // namespace tracelab
