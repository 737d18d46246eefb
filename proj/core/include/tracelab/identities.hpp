#pragma once

// The four exact operator identities behind the trace inequalities, each
// evaluated as an operator residual ||LHS - RHS||. Residuals are operator
// norms of the difference element, not trace differences, which also
// catches off-diagonal assembly errors.

#include <span>
#include <string>
#include <vector>

#include "tracelab/algebra.hpp"

namespace tracelab {

enum class ConstraintMode { SumOne, SumInverseOne, SumInvSqrtPairsOne, None };

const char* to_string(ConstraintMode m);

struct WeightVector {
  std::vector<double> alphas;
  ConstraintMode mode = ConstraintMode::None;

  /// Throws WeightConstraintViolated unless positive and the mode's sum
  /// constraint holds to 1e-12.
  void validate() const;
};

/// The n-th roots of unity omega_j = e^(2*pi*i*j/n).
class UnityRoots {
 public:
  explicit UnityRoots(int n);

  int n() const { return n_; }
  const std::vector<Complex>& omegas() const { return omegas_; }

  /// omega_j^k, computed from the reduced angle 2*pi*((j*k) mod n)/n.
  Complex power(int j, int k) const;

 private:
  int n_ = 0;
  std::vector<Complex> omegas_;
};

using ElementSpan = std::span<const AlgebraElement>;

/// Both evaluated sides of an identity plus the residual normalization
/// scale = (sum ||x_j|| + sum ||y_j||)^2 * max(coefficients, 1).
struct IdentitySides {
  AlgebraElement lhs;
  AlgebraElement rhs;
  double scale = 0.0;
};

// (ID1): |sum_j a_j x_j|^2 + sum_{j<k} a_j a_k |x_j - x_k|^2 = sum_j a_j |x_j|^2,
// for sum a_j = 1.
IdentitySides id1_sides(ElementSpan xs, const WeightVector& w);

// (IBK): (1/n) sum_k |sum_j omega_j^k x_j|^2 = sum_j |x_j|^2.
IdentitySides ibk_sides(ElementSpan xs);

// (MO1): pairwise x-terms + pairwise y-terms
//        = sum_{i,j} |sqrt(a_i/a_j) x_i - sqrt(a_j/a_i) y_j|^2 - |sum (x_i - y_i)|^2,
// valid for arbitrary positive a (no sum constraint).
IdentitySides mo1_sides(ElementSpan xs, ElementSpan ys, const WeightVector& w);

// (MO2): pairwise x-terms = sum_i a_i |x_i|^2 - |sum x_i|^2, for sum 1/a_j = 1.
IdentitySides mo2_sides(ElementSpan xs, const WeightVector& w);

double residual_id1(ElementSpan xs, const WeightVector& w);
double residual_ibk(ElementSpan xs);
double residual_mo1(ElementSpan xs, ElementSpan ys, const WeightVector& w);
double residual_mo2(ElementSpan xs, const WeightVector& w);

/// ||(LHS - RHS) + eps * E00|| with E00 the unit matrix entry (0,0) of the
/// first block: the sensitivity probe showing the residual cannot be
/// trivially zero.
double perturbed_residual(const IdentitySides& sides, double eps);

/// Dispatch by id "id1" | "ibk" | "mo1" | "mo2" (mo1 draws ys externally).
bool identity_needs_ys(const std::string& id);
ConstraintMode identity_constraint(const std::string& id);
IdentitySides identity_sides(const std::string& id, ElementSpan xs, ElementSpan ys,
                             const WeightVector& w);

}  // namespace tracelab
