#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tracelab {

enum class Relation { LE, GE, EQ };
enum class Verdict { Pass, Violation, Degenerate, NotApplicable };

const char* to_string(Relation r);
const char* to_string(Verdict v);

struct Side {
  std::string label;
  double value = 0.0;
};

/// Scale-aware slack: relation a <= b passes iff a <= b + atol +
/// rtol * max(|a|, |b|, 1). Exponential-function campaigns widen rtol
/// to 1e-7 for their larger dynamic range.
struct Tolerance {
  double atol = 1e-10;
  double rtol = 1e-8;

  double allowed(double a, double b) const;
};

/// Everything needed to replay a trial bit-identically: the per-trial seed
/// plus the generated shape parameters. Elements are regenerated from the
/// seed, not stored.
struct TrialContext {
  std::uint64_t seed = 0;
  std::vector<int> dims;
  std::vector<double> weights;
  int n = 0;
  std::vector<double> alphas;
  std::string function;
};

struct InequalityReport {
  std::string claim;
  std::vector<Side> sides;
  std::vector<Relation> relations;  // between consecutive sides
  double margin = 0.0;              // minimum signed slack across the chain
  double tolerance = 0.0;           // allowed slack at the binding pair
  Verdict verdict = Verdict::Pass;
  TrialContext context;
};

/// Evaluates the chain: slack(LE) = b - a, slack(GE) = a - b,
/// slack(EQ) = -|a - b|. Pass iff every slack >= -allowed; any non-finite
/// side makes the verdict Degenerate.
InequalityReport judge(std::string claim, std::vector<Side> sides,
                       std::vector<Relation> relations, const Tolerance& tol,
                       TrialContext context);

/// Re-judges with every relation inverted (LE <-> GE). Returns nothing when
/// the chain has no direction to invert (all EQ).
std::optional<InequalityReport> judge_flipped(const InequalityReport& report,
                                              const Tolerance& tol);

}  // namespace tracelab
