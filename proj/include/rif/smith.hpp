#pragma once

#include "rif/matrix.hpp"

#include <optional>

namespace rif {

enum class SmithStrategy {
  MinPivot,  // smallest-magnitude pivot, Euclidean remainders
  GcdSweep,  // first nonzero pivot, 2x2 Bezout combinations
};

// U * A * V == D, U and V unimodular, D diagonal with d_i | d_{i+1} and d_i >= 0.
struct SmithForm {
  IntMatrix U, U_inv, V, D;
  std::size_t rank = 0;

  IntVector diagonal() const;  // length min(rows, cols)
};

SmithForm smith_normal_form(const IntMatrix& A, SmithStrategy strategy = SmithStrategy::MinPivot);

// Columns form a Z-basis of {x : A x = 0}.
IntMatrix kernel_basis(const IntMatrix& A);

// Reusable integer solver for A x = b.
class LinearSolver {
 public:
  LinearSolver() = default;
  explicit LinearSolver(const IntMatrix& A);

  std::optional<IntVector> solve(const IntVector& b) const;
  bool solvable(const IntVector& b) const { return solve(b).has_value(); }
  IntMatrix kernel() const;
  std::size_t rank() const { return snf_.rank; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  SmithForm snf_;
};

}  // namespace rif
