#pragma once

// Functional calculus and generalized singular value machinery. On a
// weighted block algebra the distribution function of |x| is
// d(lambda) = sum of block weights over eigenvalues of |x| above lambda,
// and mu_t(x) = inf{lambda >= 0 : d(lambda) <= t} is a decreasing
// right-continuous step function. mu is represented on [0, tau(1)) only:
// at finite dimension the tail on [tau(1), inf] is identically zero, so
// value_at(t) returns 0 there rather than storing an infinite domain.

#include <vector>

#include "tracelab/algebra.hpp"
#include "tracelab/functions.hpp"

namespace tracelab {

/// Decreasing right-continuous step function on [0, total_length()).
/// Canonical form: values rounded to 12 significant digits, adjacent
/// exactly-equal values merged, strictly decreasing afterwards.
class StepFunction {
 public:
  struct Step {
    double value = 0.0;
    double length = 0.0;
  };

  /// Builds the canonical form from unsorted (value, length) samples.
  static StepFunction from_samples(std::vector<Step> samples);

  const std::vector<Step>& steps() const { return steps_; }
  double total_length() const { return total_length_; }

  /// Right-continuous evaluation; 0 for t >= total_length().
  double value_at(double t) const;

  /// Left endpoints of every step: {0, l0, l0+l1, ...}.
  std::vector<double> boundaries() const;

 private:
  std::vector<Step> steps_;
  double total_length_ = 0.0;
};

/// Rounds to 12 significant decimal digits (the step-value canonicalization).
double round_significant(double v);

struct BlockEigen {
  Eigen::VectorXd values;  // descending
  Matrix vectors;          // unitary, columns match values
};

/// Blockwise eigendecomposition of a self-adjoint element. Symmetrizes
/// (x + x*)/2 first; throws NotSelfAdjoint when the asymmetry exceeds
/// 1e-12 * ||x||.
std::vector<BlockEigen> hermitian_eigen(const AlgebraElement& x);

/// |x| = (x*x)^(1/2). Blockwise; eigenvalues of x*x below zero are clamped
/// when within the round-off window -dim*1e-12*||x*x||, else NumericError.
AlgebraElement abs_op(const AlgebraElement& x);

/// f applied in the eigenbasis of a positive element; f(0) = 0 is taken
/// exactly at clamped zero eigenvalues. Throws NotPositive when a has an
/// eigenvalue below the round-off window.
AlgebraElement apply_scalar_function(const FunctionSpec& f, const AlgebraElement& a);

/// d(lambda) = tau of the spectral projection of |x| above lambda.
double distribution_function(const AlgebraElement& x, double lambda);

/// mu(x) as a step function: eigenvalues of |x| sorted descending, each
/// contributing a step of its block's weight; total length is tau(1).
StepFunction singular_values(const AlgebraElement& x);

/// Evaluation path 1: sum_b weight_b * sum_i f(mu_i) over the eigenvalues
/// of |x| (unrounded).
double trace_function_spectral(const FunctionSpec& f, const AlgebraElement& x);

/// Evaluation path 2: the exact step integral sum_steps f(value)*length of
/// the canonical mu. Must agree with path 1 to 1e-10 relative.
double trace_function_mu(const FunctionSpec& f, const AlgebraElement& x);

/// ||x||_p = tau(|x|^p)^(1/p); a quasi-norm for 0 < p < 1. Throws
/// NonpositiveP for p <= 0.
double schatten_p_norm(const AlgebraElement& x, double p);

}  // namespace tracelab
