#include "rif/matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace rif {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(const IntVector& d) {
  IntMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows.begin()->size() : 0;
  IntMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("ragged matrix literal");
    std::size_t j = 0;
    for (long long x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IntVector>& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntMatrix IntMatrix::column_vector(const IntVector& v) { return from_columns({v}, v.size()); }

IntVector IntMatrix::column(std::size_t j) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

IntVector IntMatrix::row(std::size_t i) const {
  return IntVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

void IntMatrix::set_column(std::size_t j, const IntVector& v) {
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Int& b = o(k, j);
        if (b != 0) r(i, j) += a * b;
      }
    }
  return r;
}

IntVector IntMatrix::operator*(const IntVector& v) const {
  if (cols_ != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
  IntVector r(rows_, Int(0));
  for (std::size_t k = 0; k < cols_; ++k) {
    if (v[k] == 0) continue;
    for (std::size_t i = 0; i < rows_; ++i) {
      const Int& a = (*this)(i, k);
      if (a != 0) r[i] += a * v[k];
    }
  }
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum mismatch");
  IntMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum mismatch");
  IntMatrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

IntMatrix IntMatrix::scaled(const Int& k) const {
  IntMatrix r = *this;
  for (auto& x : r.data_) x *= k;
  return r;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

IntMatrix IntMatrix::select_columns(const std::vector<std::size_t>& idx) const {
  IntMatrix r(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(i, idx[j]);
  return r;
}

IntMatrix IntMatrix::select_rows(const std::vector<std::size_t>& idx) const {
  IntMatrix r(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(idx[i], j);
  return r;
}

IntMatrix IntMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  IntMatrix r(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) r(i, j) = (*this)(r0 + i, c0 + j);
  return r;
}

void IntMatrix::set_block(std::size_t r0, std::size_t c0, const IntMatrix& b) {
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

IntMatrix IntMatrix::hcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ == 0) {
    if (b.cols_ == 0) return IntMatrix(std::max(a.rows_, b.rows_), 0);
    return b;
  }
  if (b.cols_ == 0) return a;
  if (a.rows_ != b.rows_) throw std::invalid_argument("hcat row mismatch");
  IntMatrix r(a.rows_, a.cols_ + b.cols_);
  r.set_block(0, 0, a);
  r.set_block(0, a.cols_, b);
  return r;
}

IntMatrix IntMatrix::vcat(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ == 0) {
    if (b.rows_ == 0) return IntMatrix(0, std::max(a.cols_, b.cols_));
    return b;
  }
  if (b.rows_ == 0) return a;
  if (a.cols_ != b.cols_) throw std::invalid_argument("vcat column mismatch");
  IntMatrix r(a.rows_ + b.rows_, a.cols_);
  r.set_block(0, 0, a);
  r.set_block(a.rows_, 0, b);
  return r;
}

IntMatrix IntMatrix::block_diagonal(const std::vector<IntMatrix>& blocks) {
  std::size_t nr = 0, nc = 0;
  for (const auto& b : blocks) {
    nr += b.rows_;
    nc += b.cols_;
  }
  IntMatrix r(nr, nc);
  std::size_t r0 = 0, c0 = 0;
  for (const auto& b : blocks) {
    r.set_block(r0, c0, b);
    r0 += b.rows_;
    c0 += b.cols_;
  }
  return r;
}

IntMatrix IntMatrix::repeat_diagonal(const IntMatrix& a, std::size_t k) {
  return block_diagonal(std::vector<IntMatrix>(k, a));
}

bool IntMatrix::is_zero() const {
  for (const auto& x : data_)
    if (x != 0) return false;
  return true;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ' ';
      os << (*this)(i, j);
    }
  }
  return os.str();
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
}

void IntMatrix::add_row(std::size_t dst, std::size_t src, const Int& k) {
  if (k == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) {
    const Int& s = (*this)(src, c);
    if (s != 0) (*this)(dst, c) += k * s;
  }
}

void IntMatrix::add_col(std::size_t dst, std::size_t src, const Int& k) {
  if (k == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) {
    const Int& s = (*this)(r, src);
    if (s != 0) (*this)(r, dst) += k * s;
  }
}

void IntMatrix::negate_row(std::size_t i) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
}

void IntMatrix::negate_col(std::size_t j) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, j) = -(*this)(r, j);
}

void IntMatrix::combine_rows(std::size_t i, std::size_t j, const Int& p, const Int& q,
                             const Int& r, const Int& s) {
  for (std::size_t c = 0; c < cols_; ++c) {
    Int a = (*this)(i, c), b = (*this)(j, c);
    if (a == 0 && b == 0) continue;
    (*this)(i, c) = p * a + q * b;
    (*this)(j, c) = r * a + s * b;
  }
}

void IntMatrix::combine_cols(std::size_t i, std::size_t j, const Int& p, const Int& q,
                             const Int& r, const Int& s) {
  for (std::size_t k = 0; k < rows_; ++k) {
    Int a = (*this)(k, i), b = (*this)(k, j);
    if (a == 0 && b == 0) continue;
    (*this)(k, i) = p * a + q * b;
    (*this)(k, j) = r * a + s * b;
  }
}

IntMatrix parse_matrix(const std::string& text, std::size_t expected_cols) {
  std::vector<IntVector> rows;
  std::stringstream all(text);
  std::string row_text;
  while (std::getline(all, row_text, ';')) {
    std::stringstream rs(row_text);
    std::string tok;
    IntVector row;
    while (rs >> tok) row.push_back(parse_int(tok));
    if (row.empty()) continue;
    rows.push_back(std::move(row));
  }
  std::size_t c = rows.empty() ? expected_cols : rows[0].size();
  for (const auto& r : rows)
    if (r.size() != c) throw std::invalid_argument("ragged matrix '" + text + "'");
  if (expected_cols && c != expected_cols)
    throw std::invalid_argument("matrix '" + text + "' has " + std::to_string(c) +
                                " columns, expected " + std::to_string(expected_cols));
  IntMatrix m(rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace rif
