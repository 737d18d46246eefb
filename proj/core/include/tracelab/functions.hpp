#pragma once

// Catalog of the scalar functions phi the checked statements instantiate,
// together with the classification of psi(t) = phi(sqrt(t)) that selects
// each statement's direction. Entries are continuous, increasing on
// [0, inf) and vanish at 0. The catalog is closed (no user closures) so
// the classification stays trustworthy; extending it means adding a Kind
// here plus its rows in the classification tables.

#include <optional>
#include <string>
#include <string_view>

#include "tracelab/errors.hpp"

namespace tracelab {

enum class FunctionKind { Power, ExpSquareMinusOne, LogOnePlus, Identity };

enum class PsiClass { ConvexPsi, ConcavePsi, Both, Neither };

/// Curvature of an evaluated function on [0, inf); Linear counts as both.
enum class Curvature { Convex, Concave, Linear };

const char* to_string(PsiClass c);
const char* to_string(Curvature c);

class ScalarFunction {
 public:
  static ScalarFunction power(double p);
  static ScalarFunction exp_square_minus_one();
  static ScalarFunction log_one_plus();
  static ScalarFunction identity();

  FunctionKind kind() const { return kind_; }
  double power_exponent() const { return power_; }

  /// phi(t). Throws DomainOverflow beyond the guard (expsq: t <= 20).
  double eval(double t) const;

  /// psi(t) = phi(sqrt(t)), via an independent closed form per kind.
  double eval_psi(double t) const;

  /// Classification of psi(t) = phi(sqrt(t)); validated numerically at
  /// construction by second-difference sampling on a log grid.
  PsiClass psi_class() const { return psi_class_; }

  /// Curvature of phi itself on [0, inf) (drives the FK lemma variants).
  Curvature curvature() const { return curvature_; }

  /// Stable id: "power:<p>", "expsq", "log1p", "id".
  std::string id() const;

  /// Largest admissible argument for eval().
  double domain_max() const;

 private:
  ScalarFunction(FunctionKind kind, double p);

  FunctionKind kind_;
  double power_ = 0.0;
  PsiClass psi_class_ = PsiClass::Neither;
  Curvature curvature_ = Curvature::Linear;
};

/// A function as consumed by a checker: either a catalog phi, or its
/// psi-form phi(sqrt(.)) (id "psi:<base>"), which the FK lemma campaigns
/// need as a standalone f (e.g. f(t) = e^t - 1 for the expsq entry).
class FunctionSpec {
 public:
  FunctionSpec(ScalarFunction base) : base_(std::move(base)) {}  // NOLINT: implicit by design
  FunctionSpec(ScalarFunction base, bool psi_form) : base_(std::move(base)), psi_form_(psi_form) {}

  const ScalarFunction& base() const { return base_; }
  bool psi_form() const { return psi_form_; }

  double eval(double t) const;
  Curvature curvature() const;
  double domain_max() const;
  std::string id() const;

 private:
  ScalarFunction base_;
  bool psi_form_ = false;
};

/// Parses "power:<p>", "expsq", "log1p", "id", optionally prefixed "psi:".
/// Throws UnknownFunctionId.
FunctionSpec parse_function(std::string_view id);

/// Parses a bare catalog id (no "psi:" prefix allowed).
ScalarFunction parse_scalar_function(std::string_view id);

}  // namespace tracelab
