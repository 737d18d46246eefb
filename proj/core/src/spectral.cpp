#include "tracelab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <Eigen/Eigenvalues>

namespace tracelab {

namespace {

// Eigenvalues of |x| per block, descending within each block, unrounded.
// Shared kernel for the distribution function, mu, and the trace paths.
std::vector<Eigen::VectorXd> abs_eigenvalues(const AlgebraElement& x) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(x.blocks().size());
  for (const Matrix& m : x.blocks()) {
    const Matrix gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed on x*x");
    Eigen::VectorXd ev = solver.eigenvalues();
    const double top = std::max(0.0, ev.maxCoeff());
    const double clamp_window = static_cast<double>(m.rows()) * 1e-12 * top;
    Eigen::VectorXd sv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      double v = ev(i);
      if (v < 0.0) {
        if (v < -clamp_window)
          throw NumericError("eigenvalue of x*x below the round-off clamp window");
        v = 0.0;
      }
      sv(ev.size() - 1 - i) = std::sqrt(v);  // descending
    }
    out.push_back(std::move(sv));
  }
  return out;
}

}  // namespace

double round_significant(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return std::strtod(buf, nullptr);
}

StepFunction StepFunction::from_samples(std::vector<Step> samples) {
  StepFunction f;
  std::sort(samples.begin(), samples.end(),
            [](const Step& a, const Step& b) { return a.value > b.value; });
  for (Step s : samples) {
    if (!(s.length > 0.0)) throw NumericError("step length must be > 0");
    if (s.value < 0.0) throw NumericError("step value must be >= 0");
    s.value = round_significant(s.value);
    if (!f.steps_.empty() && f.steps_.back().value == s.value) {
      f.steps_.back().length += s.length;
    } else {
      f.steps_.push_back(s);
    }
    f.total_length_ += s.length;
  }
  return f;
}

double StepFunction::value_at(double t) const {
  if (t < 0.0) throw NumericError("step function argument must be >= 0");
  double acc = 0.0;
  for (const Step& s : steps_) {
    acc += s.length;
    if (t < acc) return s.value;
  }
  return 0.0;
}

std::vector<double> StepFunction::boundaries() const {
  std::vector<double> b;
  b.reserve(steps_.size());
  double acc = 0.0;
  for (const Step& s : steps_) {
    b.push_back(acc);
    acc += s.length;
  }
  return b;
}

std::vector<BlockEigen> hermitian_eigen(const AlgebraElement& x) {
  const double norm = operator_norm(x);
  const double asym = operator_norm(x - x.adjoint());
  if (asym > 1e-12 * norm)
    throw NotSelfAdjoint("asymmetry exceeds 1e-12 * ||x||");

  std::vector<BlockEigen> out;
  out.reserve(x.blocks().size());
  for (const Matrix& m : x.blocks()) {
    const Matrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed");
    const Eigen::Index d = sym.rows();
    BlockEigen be;
    be.values = solver.eigenvalues().reverse();
    be.vectors.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) be.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
    out.push_back(std::move(be));
  }
  return out;
}

AlgebraElement abs_op(const AlgebraElement& x) {
  std::vector<Matrix> data;
  data.reserve(x.blocks().size());
  for (const Matrix& m : x.blocks()) {
    const Matrix gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed on x*x");
    const Eigen::VectorXd ev = solver.eigenvalues();
    const double top = std::max(0.0, ev.maxCoeff());
    const double clamp_window = static_cast<double>(m.rows()) * 1e-12 * top;
    Eigen::VectorXd s(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      double v = ev(i);
      if (v < 0.0) {
        if (v < -clamp_window)
          throw NumericError("eigenvalue of x*x below the round-off clamp window");
        v = 0.0;
      }
      s(i) = std::sqrt(v);
    }
    Matrix a = solver.eigenvectors() * s.asDiagonal() * solver.eigenvectors().adjoint();
    data.push_back(0.5 * (a + Matrix(a.adjoint())));  // kill round-off asymmetry
  }
  return AlgebraElement(x.algebra(), std::move(data));
}

AlgebraElement apply_scalar_function(const FunctionSpec& f, const AlgebraElement& a) {
  const double norm = operator_norm(a);
  const double asym = operator_norm(a - a.adjoint());
  if (asym > 1e-12 * norm) throw NotSelfAdjoint("positive operand must be self-adjoint");

  std::vector<Matrix> data;
  data.reserve(a.blocks().size());
  for (const Matrix& m : a.blocks()) {
    const Matrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed");
    const Eigen::VectorXd ev = solver.eigenvalues();
    const double clamp_window = static_cast<double>(m.rows()) * 1e-12 * std::max(0.0, norm);
    Eigen::VectorXd fv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      double v = ev(i);
      if (v < 0.0) {
        if (v < -clamp_window) throw NotPositive("operand has a negative eigenvalue");
        v = 0.0;
      }
      fv(i) = v == 0.0 ? 0.0 : f.eval(v);
    }
    Matrix r = solver.eigenvectors() * fv.asDiagonal() * solver.eigenvectors().adjoint();
    data.push_back(0.5 * (r + Matrix(r.adjoint())));
  }
  return AlgebraElement(a.algebra(), std::move(data));
}

double distribution_function(const AlgebraElement& x, double lambda) {
  if (lambda < 0.0) throw NumericError("lambda must be >= 0");
  const auto eigs = abs_eigenvalues(x);
  const auto& blocks = x.algebra()->blocks();
  double d = 0.0;
  for (std::size_t b = 0; b < eigs.size(); ++b) {
    for (Eigen::Index i = 0; i < eigs[b].size(); ++i) {
      if (eigs[b](i) > lambda) d += blocks[b].weight;
    }
  }
  return d;
}

StepFunction singular_values(const AlgebraElement& x) {
  const auto eigs = abs_eigenvalues(x);
  const auto& blocks = x.algebra()->blocks();
  std::vector<StepFunction::Step> samples;
  for (std::size_t b = 0; b < eigs.size(); ++b) {
    for (Eigen::Index i = 0; i < eigs[b].size(); ++i)
      samples.push_back({eigs[b](i), blocks[b].weight});
  }
  return StepFunction::from_samples(std::move(samples));
}

double trace_function_spectral(const FunctionSpec& f, const AlgebraElement& x) {
  const auto eigs = abs_eigenvalues(x);
  const auto& blocks = x.algebra()->blocks();
  double acc = 0.0;
  for (std::size_t b = 0; b < eigs.size(); ++b) {
    double block_sum = 0.0;
    for (Eigen::Index i = 0; i < eigs[b].size(); ++i) {
      const double s = eigs[b](i);
      block_sum += s == 0.0 ? 0.0 : f.eval(s);
    }
    acc += blocks[b].weight * block_sum;
  }
  return acc;
}

double trace_function_mu(const FunctionSpec& f, const AlgebraElement& x) {
  const StepFunction mu = singular_values(x);
  double acc = 0.0;
  for (const StepFunction::Step& s : mu.steps()) {
    acc += (s.value == 0.0 ? 0.0 : f.eval(s.value)) * s.length;
  }
  return acc;
}

double schatten_p_norm(const AlgebraElement& x, double p) {
  if (!(p > 0.0)) throw NonpositiveP("p must be > 0");
  const double t = trace_function_spectral(ScalarFunction::power(p), x);
  return t == 0.0 ? 0.0 : std::pow(t, 1.0 / p);
}

}  // namespace tracelab
