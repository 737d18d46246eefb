#include "tracelab/algebra.hpp"

#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

namespace tracelab {

namespace {

bool all_finite(const Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const Complex v = m(r, c);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

}  // namespace

TracialAlgebra::TracialAlgebra(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw EmptyAlgebra("algebra needs at least one block");
  for (const Block& b : blocks_) {
    if (b.dim < 1) throw ZeroDimension("block dimension must be >= 1");
    if (!(b.weight > 0.0) || !std::isfinite(b.weight))
      throw NonpositiveWeight("block weight must be finite and > 0");
    trace_identity_ += b.weight * static_cast<double>(b.dim);
  }
  if (!std::isfinite(trace_identity_) || trace_identity_ <= 0.0)
    throw NonpositiveWeight("tau(1) must be finite and positive");
}

bool TracialAlgebra::same_structure(const TracialAlgebra& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].dim != other.blocks_[i].dim) return false;
    if (blocks_[i].weight != other.blocks_[i].weight) return false;
  }
  return true;
}

AlgebraPtr make_algebra(std::vector<Block> blocks) {
  return std::make_shared<TracialAlgebra>(std::move(blocks));
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> data)
    : algebra_(std::move(algebra)), data_(std::move(data)) {
  if (!algebra_) throw EmptyAlgebra("element needs an algebra");
  const auto& blocks = algebra_->blocks();
  if (data_.size() != blocks.size())
    throw AlgebraMismatch("element block count does not match the algebra");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (data_[b].rows() != blocks[b].dim || data_[b].cols() != blocks[b].dim)
      throw AlgebraMismatch("element block shape does not match the algebra");
    if (!all_finite(data_[b])) throw NumericError("element entries must be finite");
  }
}

AlgebraElement::AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> data, Unchecked)
    : algebra_(std::move(algebra)), data_(std::move(data)) {}

AlgebraElement AlgebraElement::zero(const AlgebraPtr& algebra) {
  std::vector<Matrix> data;
  data.reserve(algebra->block_count());
  for (const Block& b : algebra->blocks()) data.push_back(Matrix::Zero(b.dim, b.dim));
  return AlgebraElement(algebra, std::move(data), Unchecked{});
}

AlgebraElement AlgebraElement::identity(const AlgebraPtr& algebra) {
  std::vector<Matrix> data;
  data.reserve(algebra->block_count());
  for (const Block& b : algebra->blocks()) data.push_back(Matrix::Identity(b.dim, b.dim));
  return AlgebraElement(algebra, std::move(data), Unchecked{});
}

void AlgebraElement::require_same_algebra(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.algebra_ == y.algebra_) return;
  if (!x.algebra_->same_structure(*y.algebra_))
    throw AlgebraMismatch("elements belong to algebras with different block structure");
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> data;
  data.reserve(data_.size());
  for (const Matrix& m : data_) data.push_back(m.adjoint());
  return AlgebraElement(algebra_, std::move(data), Unchecked{});
}

AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement::require_same_algebra(x, y);
  std::vector<Matrix> data;
  data.reserve(x.data_.size());
  for (std::size_t b = 0; b < x.data_.size(); ++b) data.push_back(x.data_[b] + y.data_[b]);
  return AlgebraElement(x.algebra_, std::move(data), AlgebraElement::Unchecked{});
}

AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement::require_same_algebra(x, y);
  std::vector<Matrix> data;
  data.reserve(x.data_.size());
  for (std::size_t b = 0; b < x.data_.size(); ++b) data.push_back(x.data_[b] - y.data_[b]);
  return AlgebraElement(x.algebra_, std::move(data), AlgebraElement::Unchecked{});
}

AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement::require_same_algebra(x, y);
  std::vector<Matrix> data;
  data.reserve(x.data_.size());
  for (std::size_t b = 0; b < x.data_.size(); ++b) data.push_back(x.data_[b] * y.data_[b]);
  return AlgebraElement(x.algebra_, std::move(data), AlgebraElement::Unchecked{});
}

AlgebraElement operator*(Complex c, const AlgebraElement& x) {
  std::vector<Matrix> data;
  data.reserve(x.data_.size());
  for (const Matrix& m : x.data_) data.push_back(c * m);
  return AlgebraElement(x.algebra_, std::move(data), AlgebraElement::Unchecked{});
}

Complex trace(const AlgebraElement& x) {
  Complex t(0.0, 0.0);
  const auto& blocks = x.algebra()->blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) t += blocks[b].weight * x.block(b).trace();
  return t;
}

double operator_norm(const AlgebraElement& x) {
  double norm_sq = 0.0;
  for (const Matrix& m : x.blocks()) {
    if (m.rows() == 1) {
      norm_sq = std::max(norm_sq, std::norm(m(0, 0)));
      continue;
    }
    const Matrix gram = m.adjoint() * m;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("eigensolver failed on x*x");
    norm_sq = std::max(norm_sq, std::max(0.0, solver.eigenvalues().maxCoeff()));
  }
  return std::sqrt(norm_sq);
}

}  // namespace tracelab
