#include "tracelab/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tracelab/errors.hpp"

namespace tracelab {

const char* to_string(Relation r) {
  switch (r) {
    case Relation::LE: return "<=";
    case Relation::GE: return ">=";
    case Relation::EQ: return "==";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Violation: return "Violation";
    case Verdict::Degenerate: return "Degenerate";
    case Verdict::NotApplicable: return "NotApplicable";
  }
  return "?";
}

double Tolerance::allowed(double a, double b) const {
  return atol + rtol * std::max({std::abs(a), std::abs(b), 1.0});
}

InequalityReport judge(std::string claim, std::vector<Side> sides,
                       std::vector<Relation> relations, const Tolerance& tol,
                       TrialContext context) {
  if (sides.size() < 2 || relations.size() != sides.size() - 1)
    throw NumericError("chain needs k sides and k-1 relations");

  InequalityReport report;
  report.claim = std::move(claim);
  report.context = std::move(context);

  bool degenerate = false;
  bool violated = false;
  double min_slack = std::numeric_limits<double>::infinity();
  double binding_allowed = 0.0;

  for (std::size_t i = 0; i + 1 < sides.size(); ++i) {
    const double a = sides[i].value;
    const double b = sides[i + 1].value;
    if (!std::isfinite(a) || !std::isfinite(b)) {
      degenerate = true;
      continue;
    }
    double slack = 0.0;
    switch (relations[i]) {
      case Relation::LE: slack = b - a; break;
      case Relation::GE: slack = a - b; break;
      case Relation::EQ: slack = -std::abs(a - b); break;
    }
    const double allowed = tol.allowed(a, b);
    if (slack < min_slack) {
      min_slack = slack;
      binding_allowed = allowed;
    }
    if (slack < -allowed) violated = true;
  }

  report.sides = std::move(sides);
  report.relations = std::move(relations);
  report.margin = std::isfinite(min_slack) ? min_slack : std::numeric_limits<double>::quiet_NaN();
  report.tolerance = binding_allowed;
  report.verdict = degenerate   ? Verdict::Degenerate
                   : violated   ? Verdict::Violation
                                : Verdict::Pass;
  return report;
}

std::optional<InequalityReport> judge_flipped(const InequalityReport& report,
                                              const Tolerance& tol) {
  bool directional = false;
  std::vector<Relation> flipped = report.relations;
  for (Relation& r : flipped) {
    if (r == Relation::LE) {
      r = Relation::GE;
      directional = true;
    } else if (r == Relation::GE) {
      r = Relation::LE;
      directional = true;
    }
  }
  if (!directional) return std::nullopt;
  return judge(report.claim, report.sides, std::move(flipped), tol, report.context);
}

}  // namespace tracelab
