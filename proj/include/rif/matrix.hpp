#pragma once

#include "rif/bigint.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace rif {

// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  static IntMatrix diagonal(const IntVector& d);
  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows);
  static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows);
  static IntMatrix column_vector(const IntVector& v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntVector column(std::size_t j) const;
  IntVector row(std::size_t i) const;
  void set_column(std::size_t j, const IntVector& v);

  IntMatrix operator*(const IntMatrix& o) const;
  IntVector operator*(const IntVector& v) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntMatrix scaled(const Int& k) const;
  bool operator==(const IntMatrix& o) const;

  IntMatrix transpose() const;
  IntMatrix select_columns(const std::vector<std::size_t>& idx) const;
  IntMatrix select_rows(const std::vector<std::size_t>& idx) const;
  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const IntMatrix& b);

  static IntMatrix hcat(const IntMatrix& a, const IntMatrix& b);
  static IntMatrix vcat(const IntMatrix& a, const IntMatrix& b);
  static IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks);
  // k copies of a on the diagonal.
  static IntMatrix repeat_diagonal(const IntMatrix& a, std::size_t k);

  bool is_zero() const;
  std::string to_string() const;  // "a b; c d"

  // Elementary operations used by the normal-form code.
  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);
  void add_row(std::size_t dst, std::size_t src, const Int& k);  // row dst += k * row src
  void add_col(std::size_t dst, std::size_t src, const Int& k);
  void negate_row(std::size_t i);
  void negate_col(std::size_t j);
  // rows (i, j) <- (p*ri + q*rj, r*ri + s*rj)
  void combine_rows(std::size_t i, std::size_t j, const Int& p, const Int& q, const Int& r,
                    const Int& s);
  void combine_cols(std::size_t i, std::size_t j, const Int& p, const Int& q, const Int& r,
                    const Int& s);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> data_;
};

IntMatrix parse_matrix(const std::string& text, std::size_t expected_cols = 0);

}  // namespace rif
