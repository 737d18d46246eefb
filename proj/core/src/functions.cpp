#include "tracelab/functions.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace tracelab {

namespace {

constexpr double kExpSqGuard = 20.0;  // e^(20^2) = e^400 is still finite

std::string format_power(double p) {
  std::ostringstream out;
  out << "power:" << p;
  return out.str();
}

// Chord test on a 200-point log grid over [1e-6, 10]: for each interior
// point, the deviation of f(mid) from the chord through its neighbours must
// not contradict `curv` by more than 1e-9 (relative to max(1, values)).
template <typename F>
void validate_curvature(F&& f, Curvature curv, const std::string& what) {
  constexpr int kPoints = 200;
  const double lo = 1e-6, hi = 10.0;
  std::vector<double> ts(kPoints), vs(kPoints);
  for (int k = 0; k < kPoints; ++k) {
    ts[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (kPoints - 1));
    vs[k] = f(ts[k]);
  }
  for (int k = 0; k + 2 < kPoints; ++k) {
    const double t0 = ts[k], t1 = ts[k + 1], t2 = ts[k + 2];
    const double chord = vs[k] + (vs[k + 2] - vs[k]) * (t1 - t0) / (t2 - t0);
    const double dev = vs[k + 1] - chord;  // > 0 means locally concave
    const double tol = 1e-9 * std::max({1.0, std::abs(vs[k]), std::abs(vs[k + 2])});
    if (curv == Curvature::Convex && dev > tol)
      throw ClassificationMismatch(what + ": sampled second differences are not convex");
    if (curv == Curvature::Concave && dev < -tol)
      throw ClassificationMismatch(what + ": sampled second differences are not concave");
    if (curv == Curvature::Linear && std::abs(dev) > tol)
      throw ClassificationMismatch(what + ": sampled second differences are not linear");
  }
}

Curvature psi_to_curvature(PsiClass c) {
  switch (c) {
    case PsiClass::ConvexPsi: return Curvature::Convex;
    case PsiClass::ConcavePsi: return Curvature::Concave;
    case PsiClass::Both: return Curvature::Linear;
    case PsiClass::Neither: break;
  }
  throw ClassificationMismatch("psi-form of an unclassified function");
}

}  // namespace

const char* to_string(PsiClass c) {
  switch (c) {
    case PsiClass::ConvexPsi: return "ConvexPsi";
    case PsiClass::ConcavePsi: return "ConcavePsi";
    case PsiClass::Both: return "Both";
    case PsiClass::Neither: return "Neither";
  }
  return "?";
}

const char* to_string(Curvature c) {
  switch (c) {
    case Curvature::Convex: return "Convex";
    case Curvature::Concave: return "Concave";
    case Curvature::Linear: return "Linear";
  }
  return "?";
}

ScalarFunction::ScalarFunction(FunctionKind kind, double p) : kind_(kind), power_(p) {
  switch (kind_) {
    case FunctionKind::Power:
      if (!(power_ > 0.0) || !std::isfinite(power_))
        throw NonpositiveP("power exponent must be finite and > 0");
      psi_class_ = power_ > 2.0   ? PsiClass::ConvexPsi
                   : power_ < 2.0 ? PsiClass::ConcavePsi
                                  : PsiClass::Both;
      curvature_ = power_ > 1.0   ? Curvature::Convex
                   : power_ < 1.0 ? Curvature::Concave
                                  : Curvature::Linear;
      break;
    case FunctionKind::ExpSquareMinusOne:
      psi_class_ = PsiClass::ConvexPsi;  // psi(t) = e^t - 1
      curvature_ = Curvature::Convex;
      break;
    case FunctionKind::LogOnePlus:
      psi_class_ = PsiClass::ConcavePsi;  // psi(t) = log(sqrt(t) + 1)
      curvature_ = Curvature::Concave;
      break;
    case FunctionKind::Identity:
      psi_class_ = PsiClass::ConcavePsi;  // psi(t) = sqrt(t)
      curvature_ = Curvature::Linear;
      break;
  }
  validate_curvature([this](double t) { return eval_psi(t); }, psi_to_curvature(psi_class_),
                     "psi of " + id());
  validate_curvature([this](double t) { return eval(t); }, curvature_, id());
}

ScalarFunction ScalarFunction::power(double p) { return ScalarFunction(FunctionKind::Power, p); }
ScalarFunction ScalarFunction::exp_square_minus_one() {
  return ScalarFunction(FunctionKind::ExpSquareMinusOne, 0.0);
}
ScalarFunction ScalarFunction::log_one_plus() {
  return ScalarFunction(FunctionKind::LogOnePlus, 0.0);
}
ScalarFunction ScalarFunction::identity() { return ScalarFunction(FunctionKind::Identity, 0.0); }

double ScalarFunction::eval(double t) const {
  if (t < 0.0 || !std::isfinite(t)) throw DomainOverflow("argument outside [0, inf)");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case FunctionKind::Power: return std::pow(t, power_);
    case FunctionKind::ExpSquareMinusOne:
      if (t > kExpSqGuard) throw DomainOverflow("expsq argument beyond guard t <= 20");
      return std::expm1(t * t);
    case FunctionKind::LogOnePlus: return std::log1p(t);
    case FunctionKind::Identity: return t;
  }
  throw NumericError("unreachable function kind");
}

double ScalarFunction::eval_psi(double t) const {
  if (t < 0.0 || !std::isfinite(t)) throw DomainOverflow("argument outside [0, inf)");
  if (t == 0.0) return 0.0;
  switch (kind_) {
    case FunctionKind::Power: return std::pow(t, 0.5 * power_);
    case FunctionKind::ExpSquareMinusOne:
      if (t > kExpSqGuard * kExpSqGuard)
        throw DomainOverflow("psi:expsq argument beyond guard t <= 400");
      return std::expm1(t);
    case FunctionKind::LogOnePlus: return std::log1p(std::sqrt(t));
    case FunctionKind::Identity: return std::sqrt(t);
  }
  throw NumericError("unreachable function kind");
}

std::string ScalarFunction::id() const {
  switch (kind_) {
    case FunctionKind::Power: return format_power(power_);
    case FunctionKind::ExpSquareMinusOne: return "expsq";
    case FunctionKind::LogOnePlus: return "log1p";
    case FunctionKind::Identity: return "id";
  }
  return "?";
}

double ScalarFunction::domain_max() const {
  return kind_ == FunctionKind::ExpSquareMinusOne ? kExpSqGuard
                                                  : std::numeric_limits<double>::infinity();
}

double FunctionSpec::eval(double t) const {
  return psi_form_ ? base_.eval_psi(t) : base_.eval(t);
}

Curvature FunctionSpec::curvature() const {
  return psi_form_ ? psi_to_curvature(base_.psi_class()) : base_.curvature();
}

double FunctionSpec::domain_max() const {
  if (!psi_form_) return base_.domain_max();
  const double m = base_.domain_max();
  return std::isfinite(m) ? m * m : m;
}

std::string FunctionSpec::id() const { return psi_form_ ? "psi:" + base_.id() : base_.id(); }

ScalarFunction parse_scalar_function(std::string_view id) {
  if (id == "expsq") return ScalarFunction::exp_square_minus_one();
  if (id == "log1p") return ScalarFunction::log_one_plus();
  if (id == "id") return ScalarFunction::identity();
  constexpr std::string_view kPowerPrefix = "power:";
  if (id.substr(0, kPowerPrefix.size()) == kPowerPrefix) {
    const std::string num(id.substr(kPowerPrefix.size()));
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(num, &used);
    } catch (const std::exception&) {
      throw UnknownFunctionId("bad power exponent in '" + std::string(id) + "'");
    }
    if (used != num.size() || !(p > 0.0))
      throw UnknownFunctionId("bad power exponent in '" + std::string(id) + "'");
    return ScalarFunction::power(p);
  }
  throw UnknownFunctionId("unknown function id '" + std::string(id) + "'");
}

FunctionSpec parse_function(std::string_view id) {
  constexpr std::string_view kPsiPrefix = "psi:";
  if (id.substr(0, kPsiPrefix.size()) == kPsiPrefix)
    return FunctionSpec(parse_scalar_function(id.substr(kPsiPrefix.size())), true);
  return FunctionSpec(parse_scalar_function(id), false);
}

}  // namespace tracelab
