#pragma once

// Finite-dimensional weighted block-trace algebras: a direct sum of full
// matrix blocks M_{d_b}(C), each carrying a positive trace weight w_b. The
// trace of an element is sum_b w_b * tr(block_b), so tau(1) = sum_b w_b*d_b.
// Every element is bounded, hence tau-measurable; this is the desk-scale
// model of a semifinite trace on which everything else in the library runs.

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "tracelab/errors.hpp"

namespace tracelab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct Block {
  int dim = 0;
  double weight = 0.0;
};

class TracialAlgebra {
 public:
  /// Validates the block list: nonempty, dims >= 1, weights > 0 and finite.
  explicit TracialAlgebra(std::vector<Block> blocks);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }

  /// tau(1) = sum_b weight_b * dim_b. Finite and strictly positive.
  double trace_identity() const { return trace_identity_; }

  /// Structural equality (same dims and exactly equal weights).
  bool same_structure(const TracialAlgebra& other) const;

 private:
  std::vector<Block> blocks_;
  double trace_identity_ = 0.0;
};

using AlgebraPtr = std::shared_ptr<const TracialAlgebra>;

AlgebraPtr make_algebra(std::vector<Block> blocks);

/// A block-diagonal element of the algebra. Immutable after construction;
/// arithmetic returns fresh values, so elements are safe to share across
/// threads without synchronization.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> data);

  static AlgebraElement zero(const AlgebraPtr& algebra);
  static AlgebraElement identity(const AlgebraPtr& algebra);

  const AlgebraPtr& algebra() const { return algebra_; }
  const std::vector<Matrix>& blocks() const { return data_; }
  const Matrix& block(std::size_t b) const { return data_[b]; }

  AlgebraElement adjoint() const;

  friend AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y);
  friend AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y);
  friend AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y);
  friend AlgebraElement operator*(Complex c, const AlgebraElement& x);
  friend AlgebraElement operator*(const AlgebraElement& x, Complex c) { return c * x; }
  friend AlgebraElement operator*(double c, const AlgebraElement& x) { return Complex(c, 0.0) * x; }
  friend AlgebraElement operator*(const AlgebraElement& x, double c) { return Complex(c, 0.0) * x; }
  friend AlgebraElement operator-(const AlgebraElement& x) { return Complex(-1.0, 0.0) * x; }

 private:
  struct Unchecked {};
  AlgebraElement(AlgebraPtr algebra, std::vector<Matrix> data, Unchecked);

  static void require_same_algebra(const AlgebraElement& x, const AlgebraElement& y);

  AlgebraPtr algebra_;
  std::vector<Matrix> data_;
};

/// tau(x) = sum_b weight_b * tr(block_b). Real and >= 0 on positives.
Complex trace(const AlgebraElement& x);

/// Largest singular value over all blocks (sqrt of the top eigenvalue of x*x).
double operator_norm(const AlgebraElement& x);

}  // namespace tracelab
